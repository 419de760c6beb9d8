#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "opdyn/dynamics.hpp"
#include "opdyn/integrator.hpp"

namespace opdyn {

enum class EquilibriumKind {
  ConsensusPlus,
  ConsensusMinus,
  PersistentDisagreement,
  NonConvergent,
  Undetermined
};

std::string_view to_string(EquilibriumKind kind);

struct EquilibriumReport {
  EquilibriumKind kind = EquilibriumKind::Undetermined;
  std::optional<OpinionState> limit;
  std::optional<double> polarization;
  std::optional<double> settle_time;
  double residual = 0.0;   // sup-norm of the vector field at the last state examined
  double movement = 0.0;   // largest displacement inside the trailing window
  bool absorbed = false;   // consensus certified by entering a saturated orthant

  bool converged() const noexcept {
    return kind == EquilibriumKind::ConsensusPlus || kind == EquilibriumKind::ConsensusMinus ||
           kind == EquilibriumKind::PersistentDisagreement;
  }
  bool consensus() const noexcept {
    return kind == EquilibriumKind::ConsensusPlus || kind == EquilibriumKind::ConsensusMinus;
  }
};

// Kind of a converged limit: consensus when every entry is within 10*tol of
// +alpha (resp. -alpha), persistent disagreement otherwise.
EquilibriumKind classify_limit(std::span<const double> x, double alpha, double tol);

// Converged iff ||f(x_final)||_inf < tol and every state in the trailing
// window [T - window, T] lies within tol * window of the window's first state.
// Undetermined when the trajectory is shorter than the window, NonConvergent
// when the criterion fails at the end of the trajectory.
EquilibriumReport detect_equilibrium(const Trajectory& traj, const InfluenceGraph& graph,
                                     const PlatformParams& platform,
                                     double tol = kDefaultTolerance,
                                     double window = kDefaultWindow);

}  // namespace opdyn
