#include "opdyn/simulation.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "opdyn/detail/rk4.hpp"
#include "opdyn/error.hpp"
#include "opdyn/metrics.hpp"

namespace opdyn {

namespace {

std::size_t steps_for(double duration, double step) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(duration / step)));
}

// +1 / -1 when every agent has entered the saturated orthant of that sign.
int absorbed_sign(std::span<const double> x, double eps) {
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v >= eps; })) return 1;
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v <= -eps; })) return -1;
  return 0;
}

}  // namespace

SimulationResult simulate(const OpinionState& x0, const InfluenceGraph& graph,
                          const PlatformParams& platform, const SimulationSettings& settings) {
  const double step = settings.step;
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("step must be positive");
  if (!(settings.horizon >= step) || !std::isfinite(settings.horizon)) {
    throw InvalidArgument("horizon must be finite and at least one step");
  }
  if (!(settings.tol > 0.0) || !(settings.window > 0.0)) {
    throw InvalidArgument("tol and window must be positive");
  }
  if (x0.opinions.size() != graph.size() || platform.size() != graph.size()) {
    throw InvalidArgument("simulate: dimension mismatch");
  }
  for (const double v : x0.opinions) {
    if (!std::isfinite(v)) throw InvalidArgument("simulate: non-finite initial opinion");
  }

  const std::size_t refine =
      settings.guard == StepGuard::Off ? 1 : step_refinement(step, platform);
  const double h = step / static_cast<double>(refine);
  if (refine > 1 && settings.guard == StepGuard::Uniform) {
    spdlog::warn("step {} exceeds epsilon/(10 b) = {}; refining to {} substeps of {}", step,
                 platform.epsilon() / (10.0 * platform.max_b()), refine, h);
  }
  const auto total = static_cast<std::size_t>(std::ceil(settings.horizon / step - 1e-9));
  const std::size_t window_steps = steps_for(settings.window, step);
  const std::size_t sample_steps =
      settings.sample_interval > 0.0 ? steps_for(settings.sample_interval, step) : 0;

  const bool can_absorb = settings.stop_at_convergence && settings.absorb_consensus &&
                          platform.alpha() >= platform.epsilon() &&
                          std::all_of(platform.b().begin(), platform.b().end(),
                                      [](double bi) { return bi > 0.0; });

  SimulationResult result;
  result.integration_step = h;
  result.step_refined = refine > 1;
  if (sample_steps > 0) {
    result.sample_times.push_back(x0.time);
    result.samples.push_back(x0.opinions);
  }

  const double box = invariant_box_radius(x0.opinions);
  std::vector<double> x = x0.opinions;
  std::vector<double> anchor = x;
  std::vector<double> f(x.size());
  detail::Rk4Workspace ws(x.size());
  auto field = [&](std::span<const double> s, std::span<double> out) {
    vector_field(s, graph, platform, out);
  };

  // absorbed_sign != 0: the limit is the orthant's fixed point alpha * (+-1).
  auto finish = [&](EquilibriumKind kind, double t, int absorbed_sign = 0) {
    result.report.kind = kind;
    result.final_state = OpinionState{x, t};
    if (result.report.converged()) {
      result.report.limit = result.final_state;
      if (absorbed_sign != 0) {
        std::fill(result.report.limit->opinions.begin(), result.report.limit->opinions.end(),
                  absorbed_sign * platform.alpha());
      }
      result.report.polarization =
          block_polarization(result.report.limit->opinions, graph.labels());
      result.report.settle_time = t;
    }
    if (result.max_box_excess > 1e-9) {
      spdlog::warn("trajectory left the invariant box [-{0}, {0}] by {1}", box,
                   result.max_box_excess);
    }
    return result;
  };

  const double eps = platform.epsilon();
  double max_row = 0.0;
  for (const double r : graph.row_sums()) max_row = std::max(max_row, r);
  const double growth = 2.0 * std::exp((2.0 * max_row + platform.max_b()) * step);
  auto near_band = [&] {
    double speed = 0.0;
    for (const double v : ws.k1) speed = std::max(speed, std::abs(v));
    const double reach = eps + step * speed * growth;
    return std::any_of(x.begin(), x.end(), [&](double v) { return std::abs(v) <= reach; });
  };

  double movement = 0.0;
  for (std::size_t k = 1; k <= total; ++k) {
    vector_field(x, graph, platform, ws.k1);
    if (refine == 1 || (settings.guard == StepGuard::NearBand && !near_band())) {
      detail::rk4_advance(field, x, step, ws);
    } else {
      detail::rk4_advance(field, x, h, ws);
      for (std::size_t r = 1; r < refine; ++r) detail::rk4_step(field, x, h, ws);
    }
    const double t = x0.time + static_cast<double>(k) * step;
    double moved = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i])) throw NumericalFailure("non-finite opinion during simulation", t);
      result.max_box_excess = std::max(result.max_box_excess, std::abs(x[i]) - box);
      moved = std::max(moved, std::abs(x[i] - anchor[i]));
    }
    movement = std::max(movement, moved);
    if (sample_steps > 0 && k % sample_steps == 0) {
      result.sample_times.push_back(t);
      result.samples.push_back(x);
    }

    if (can_absorb) {
      if (const int sign = absorbed_sign(x, eps); sign != 0) {
        vector_field(x, graph, platform, f);
        double residual = 0.0;
        for (const double v : f) residual = std::max(residual, std::abs(v));
        result.report.residual = residual;
        result.report.movement = movement;
        result.report.absorbed = true;
        return finish(sign > 0 ? EquilibriumKind::ConsensusPlus : EquilibriumKind::ConsensusMinus,
                      t, sign);
      }
    }

    if (k % window_steps == 0 || k == total) {
      vector_field(x, graph, platform, f);
      double residual = 0.0;
      for (const double v : f) residual = std::max(residual, std::abs(v));
      result.report.residual = residual;
      result.report.movement = movement;
      const bool converged = k >= window_steps && residual < settings.tol &&
                             movement < settings.tol * settings.window;
      if (converged && (settings.stop_at_convergence || k == total)) {
        return finish(classify_limit(x, platform.alpha(), settings.tol), t);
      }
      anchor = x;
      movement = 0.0;
    }
  }
  return finish(EquilibriumKind::NonConvergent, x0.time + static_cast<double>(total) * step);
}

}  // namespace opdyn
