#include "opdyn/integrator.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "opdyn/detail/rk4.hpp"
#include "opdyn/error.hpp"

namespace opdyn {

std::size_t step_refinement(double step, const PlatformParams& platform) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("step must be positive");
  if (platform.max_b() <= 0.0) return 1;
  const double limit = platform.epsilon() / (10.0 * platform.max_b());
  if (step <= limit) return 1;
  return static_cast<std::size_t>(std::ceil(step / limit * (1.0 - 1e-12)));
}

double invariant_box_radius(std::span<const double> x0) {
  double k = 1.0;
  for (const double v : x0) k = std::max(k, std::abs(v));
  return k;
}

Trajectory integrate(const OpinionState& x0, const InfluenceGraph& graph,
                     const PlatformParams& platform, double horizon, double step,
                     const IntegrateOptions& options) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("step must be positive");
  if (!(horizon >= step) || !std::isfinite(horizon)) {
    throw InvalidArgument("horizon must be finite and at least one step");
  }
  if (options.record_every == 0) throw InvalidArgument("record_every must be >= 1");
  if (x0.opinions.size() != graph.size() || platform.size() != graph.size()) {
    throw InvalidArgument("integrate: dimension mismatch");
  }
  for (const double v : x0.opinions) {
    if (!std::isfinite(v)) throw InvalidArgument("integrate: non-finite initial opinion");
  }

  const std::size_t refine = options.guard_step ? step_refinement(step, platform) : 1;
  const double h = step / static_cast<double>(refine);
  if (refine > 1) {
    spdlog::warn("step {} exceeds epsilon/(10 b) = {}; refining to {} substeps of {}", step,
                 platform.epsilon() / (10.0 * platform.max_b()), refine, h);
  }

  // Round up to whole recording strides so the recorded grid stays uniform.
  const auto raw = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  const std::size_t records = (raw + options.record_every - 1) / options.record_every;
  const std::size_t intervals = records * options.record_every;

  Trajectory traj;
  traj.step_size = step * static_cast<double>(options.record_every);
  traj.integration_step = h;
  traj.step_refined = refine > 1;
  traj.times.reserve(records + 1);
  traj.states.reserve(records + 1);
  traj.times.push_back(x0.time);
  traj.states.push_back(x0.opinions);

  const double box = invariant_box_radius(x0.opinions);
  std::vector<double> x = x0.opinions;
  detail::Rk4Workspace ws(x.size());
  auto field = [&](std::span<const double> s, std::span<double> out) {
    vector_field(s, graph, platform, out);
  };

  std::size_t substep = 0;
  const std::size_t total_substeps = intervals * refine;
  const std::size_t record_stride = refine * options.record_every;
  while (substep < total_substeps) {
    detail::rk4_step(field, x, h, ws);
    ++substep;
    const double t =
        x0.time + step * (static_cast<double>(substep) / static_cast<double>(refine));
    for (const double v : x) {
      if (!std::isfinite(v)) throw NumericalFailure("non-finite opinion during integration", t);
      traj.max_box_excess = std::max(traj.max_box_excess, std::abs(v) - box);
    }
    if (substep % record_stride == 0) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
  }
  if (traj.max_box_excess > 1e-9) {
    spdlog::warn("trajectory left the invariant box [-{0}, {0}] by {1}", box, traj.max_box_excess);
  }
  return traj;
}

}  // namespace opdyn
