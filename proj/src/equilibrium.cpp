#include "opdyn/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "opdyn/error.hpp"
#include "opdyn/metrics.hpp"

namespace opdyn {

std::string_view to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::ConsensusPlus:
      return "ConsensusPlus";
    case EquilibriumKind::ConsensusMinus:
      return "ConsensusMinus";
    case EquilibriumKind::PersistentDisagreement:
      return "PersistentDisagreement";
    case EquilibriumKind::NonConvergent:
      return "NonConvergent";
    case EquilibriumKind::Undetermined:
      return "Undetermined";
  }
  return "?";
}

EquilibriumKind classify_limit(std::span<const double> x, double alpha, double tol) {
  const double band = 10.0 * tol;
  const bool plus = std::all_of(x.begin(), x.end(), [&](double v) { return std::abs(v - alpha) <= band; });
  if (plus) return EquilibriumKind::ConsensusPlus;
  const bool minus = std::all_of(x.begin(), x.end(), [&](double v) { return std::abs(v + alpha) <= band; });
  if (minus) return EquilibriumKind::ConsensusMinus;
  return EquilibriumKind::PersistentDisagreement;
}

namespace {

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

EquilibriumReport detect_equilibrium(const Trajectory& traj, const InfluenceGraph& graph,
                                     const PlatformParams& platform, double tol, double window) {
  if (traj.empty()) throw InvalidArgument("detect_equilibrium: empty trajectory");
  if (!(tol > 0.0) || !(window > 0.0)) throw InvalidArgument("tol and window must be positive");

  EquilibriumReport report;
  const auto& last = traj.final_opinions();
  report.residual = sup_norm(vector_field(last, graph, platform));

  const double end = traj.final_time();
  if (end - traj.times.front() < window * (1.0 - 1e-12)) {
    report.kind = EquilibriumKind::Undetermined;
    return report;
  }
  // First recorded state inside the trailing window.
  const auto first = static_cast<std::size_t>(
      std::lower_bound(traj.times.begin(), traj.times.end(), end - window * (1.0 + 1e-12)) -
      traj.times.begin());
  for (std::size_t k = first; k < traj.size(); ++k) {
    report.movement = std::max(report.movement, sup_distance(traj.states[k], traj.states[first]));
  }

  if (!(report.residual < tol && report.movement < tol * window)) {
    report.kind = EquilibriumKind::NonConvergent;
    return report;
  }
  report.kind = classify_limit(last, platform.alpha(), tol);
  report.limit = OpinionState{last, end};
  report.polarization = block_polarization(last, graph.labels());
  // Earliest time after which the trajectory never leaves the 10*tol ball
  // around the limit.
  std::size_t settle = traj.size() - 1;
  while (settle > 0 && sup_distance(traj.states[settle - 1], last) <= 10.0 * tol) --settle;
  report.settle_time = traj.times[settle];
  return report;
}

}  // namespace opdyn
