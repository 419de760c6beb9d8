#include "opdyn/network.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "opdyn/detail/rk4.hpp"
#include "opdyn/error.hpp"
#include "opdyn/integrator.hpp"

namespace opdyn {

namespace {

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }

double relative_deviation(std::size_t degree, double expected) {
  const double d = static_cast<double>(degree);
  if (expected == 0.0) return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(d - expected) / expected;
}

}  // namespace

void SbmConfig::validate() const {
  if (n == 0) throw InvalidArgument("sbm: n must be >= 1");
  if (!is_probability(p) || !is_probability(q)) {
    throw InvalidArgument("sbm: p and q must lie in [0, 1]");
  }
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("sbm: a must be positive");
  if (normalization == Normalization::Explicit) {
    throw InvalidArgument("sbm: normalization must be row-normalized or unit-weight");
  }
}

InfluenceGraph generate_sbm(const SbmConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t agents = 2 * cfg.n;
  std::vector<Block> labels(agents, Block::Left);
  std::fill(labels.begin() + static_cast<std::ptrdiff_t>(cfg.n), labels.end(), Block::Right);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < agents; ++i) {
    for (std::size_t j = i + 1; j < agents; ++j) {
      const double prob = labels[i] == labels[j] ? cfg.p : cfg.q;
      if (rng.bernoulli(prob)) edges.emplace_back(i, j);
    }
  }
  return InfluenceGraph::from_undirected(agents, std::move(edges), std::move(labels),
                                         cfg.normalization, cfg.a);
}

InfluenceGraph generate_sbm(const SbmConfig& cfg) {
  Rng rng(cfg.seed);
  return generate_sbm(cfg, rng);
}

ConcentrationCheck concentration_check(const InfluenceGraph& graph, const SbmConfig& cfg,
                                       double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  if (!graph.fully_labeled()) throw InvalidArgument("concentration_check: unlabeled agents");
  const double nn = static_cast<double>(cfg.n);
  const double same_mean = cfg.p * nn;
  const double cross_mean = cfg.q * nn;

  ConcentrationCheck out;
  out.delta = delta;
  out.in_set = true;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    std::size_t same = 0;
    std::size_t cross = 0;
    for (const std::size_t j : graph.row_columns(i)) {
      (graph.label(j) == graph.label(i) ? same : cross) += 1;
    }
    const double ds = static_cast<double>(same);
    const double dc = static_cast<double>(cross);
    if (ds < (1.0 - delta) * same_mean || ds > (1.0 + delta) * same_mean ||
        dc < (1.0 - delta) * cross_mean || dc > (1.0 + delta) * cross_mean) {
      out.in_set = false;
    }
    out.worst_same_deviation = std::max(out.worst_same_deviation, relative_deviation(same, same_mean));
    out.worst_cross_deviation =
        std::max(out.worst_cross_deviation, relative_deviation(cross, cross_mean));
  }
  return out;
}

double concentration_bound(std::size_t n, double rate, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  if (!is_probability(rate)) throw InvalidArgument("rate must lie in [0, 1]");
  return 3.0 * std::exp(-delta * delta * rate * static_cast<double>(n) / 8.0);
}

namespace {

MeanFieldPrediction predict(double coupling, double b, double xL, double xR) {
  if (!(coupling > 0.0)) {
    throw InvalidArgument(fmt::format(
        "mean-field coupling is {} (no cross-block interaction); the two-agent reduction needs a "
        "positive coupling",
        coupling));
  }
  MeanFieldPrediction out;
  out.coupling = coupling;
  out.classification = classify(TwoAgentSystem{coupling, b, {xL, xR}});
  if (is_pd(out.classification.kind)) out.polarization = pd_equilibrium(coupling, b)[1];
  return out;
}

}  // namespace

MeanFieldPrediction mean_field_prediction(double a, double b, double p, double q, double xL,
                                          double xR) {
  if (!is_probability(p) || !is_probability(q) || !(p + q > 0.0)) {
    throw InvalidArgument("mean_field_prediction: need probabilities with p + q > 0");
  }
  return predict(a * q / (p + q), b, xL, xR);
}

MeanFieldPrediction mean_field_prediction_unit_weight(double a, double b, std::size_t n, double q,
                                                      double xL, double xR) {
  if (!is_probability(q)) throw InvalidArgument("q must lie in [0, 1]");
  return predict(a * static_cast<double>(n) * q, b, xL, xR);
}

EnvelopeTrajectory integrate_envelopes(const EnvelopeParams& params, double xL, double xR,
                                       double horizon, double step) {
  const auto& [a, b, p, q, delta, eps] = params;
  if (!(a > 0.0) || !(b > 0.0) || !(eps > 0.0)) {
    throw InvalidArgument("envelopes: a, b and epsilon must be positive");
  }
  if (!(delta >= 0.0 && delta < 1.0)) throw InvalidArgument("envelopes: delta must lie in [0, 1)");
  if (!is_probability(p) || !is_probability(q) || !(p + q > 0.0)) {
    throw InvalidArgument("envelopes: coefficient denominator p + q is zero");
  }
  if (!(step > 0.0) || !(horizon >= step)) {
    throw InvalidArgument("envelopes: need step > 0 and horizon >= step");
  }
  if (!(xL * xR < 0.0)) throw InvalidArgument("envelopes: blocks must start on opposite sides of 0");

  EnvelopeTrajectory out;
  out.mirrored = xL < 0.0;
  const double sign = out.mirrored ? -1.0 : 1.0;
  const double c_lo = (1.0 - delta) * q / ((1.0 + delta) * (p + q));
  const double c_hi = (1.0 + delta) * q / ((1.0 - delta) * (p + q));

  // y = (xbar_L, xunder_L, xbar_R, xunder_R) of the un-mirrored system.
  auto field = [&](std::span<const double> y, std::span<double> dy) {
    auto pull = [&](double v) { return b * (std::clamp(v / eps, -1.0, 1.0) - v); };
    dy[0] = a * c_lo * (y[2] - y[0]) + pull(y[0]);
    dy[1] = a * c_hi * (y[3] - y[1]) + pull(y[1]);
    dy[2] = a * c_hi * (y[0] - y[2]) + pull(y[2]);
    dy[3] = a * c_lo * (y[1] - y[3]) + pull(y[3]);
  };
  auto record = [&](std::span<const double> y, double t) {
    out.times.push_back(t);
    out.states.push_back(out.mirrored ? EnvelopeState{-y[1], -y[0], -y[3], -y[2]}
                                      : EnvelopeState{y[0], y[1], y[2], y[3]});
  };

  const std::size_t refine = step_refinement(step, PlatformParams({b}, eps));
  if (refine > 1) {
    spdlog::warn("envelopes: refining step {} into {} substeps", step, refine);
  }
  const double h = step / static_cast<double>(refine);
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  out.step = step;
  std::array<double, 4> y{sign * xL, sign * xL, sign * xR, sign * xR};
  detail::Rk4Workspace ws(4);
  out.times.reserve(steps + 1);
  out.states.reserve(steps + 1);
  record(y, 0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    for (std::size_t r = 0; r < refine; ++r) detail::rk4_step(field, y, h, ws);
    for (const double v : y) {
      if (!std::isfinite(v)) {
        throw NumericalFailure("non-finite envelope", static_cast<double>(k) * step);
      }
    }
    record(y, static_cast<double>(k) * step);
  }
  return out;
}

double envelope_excess(const InfluenceGraph& graph, const std::vector<double>& times,
                       const std::vector<std::vector<double>>& states,
                       const EnvelopeTrajectory& envelopes) {
  if (times.size() != states.size()) throw InvalidArgument("envelope_excess: size mismatch");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double pos = times[s] / envelopes.step;
    const auto k = static_cast<std::size_t>(std::llround(pos));
    if (k >= envelopes.states.size() || std::abs(pos - static_cast<double>(k)) > 1e-6) {
      throw InvalidArgument(fmt::format("sample time {} is not on the envelope grid", times[s]));
    }
    const EnvelopeState& e = envelopes.states[k];
    const auto& x = states[s];
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Block blk = graph.label(i);
      if (blk == Block::Unlabeled) continue;
      const double hi = blk == Block::Left ? e.xbar_L : e.xbar_R;
      const double lo = blk == Block::Left ? e.xunder_L : e.xunder_R;
      worst = std::max({worst, x[i] - hi, lo - x[i]});
    }
  }
  return worst;
}

}  // namespace opdyn
