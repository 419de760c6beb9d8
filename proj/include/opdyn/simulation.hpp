#pragma once

#include <vector>

#include "opdyn/equilibrium.hpp"

namespace opdyn {

// How the step <= epsilon / (10 b) guard is applied.
enum class StepGuard {
  Uniform,   // every step is refined, as in integrate()
  NearBand,  // refine only steps that can reach the band |x_i| <= epsilon
  Off
};

// Run-until-converged integration without storing the full trajectory.
struct SimulationSettings {
  double step = kDefaultStep;
  double horizon = kDefaultHorizon;
  double tol = kDefaultTolerance;
  double window = kDefaultWindow;
  // Outside the band the field is affine, so a plain step there already
  // resolves it; NearBand refines only when some agent could enter the band
  // within the step (bound: h |f(x)|_inf e^{C h}, C the field's Lipschitz
  // constant off the band).
  StepGuard guard = StepGuard::NearBand;
  // Stop as soon as every agent sits at or beyond +epsilon (or -epsilon). That
  // orthant is forward invariant and the flow inside it is linear and stable
  // with unique fixed point alpha * (+-1), so the consensus outcome is exact.
  bool absorb_consensus = true;
  // When false, integrate to the horizon regardless of convergence (time
  // series); the report then describes the final window only.
  bool stop_at_convergence = true;
  // When > 0, record states on this time grid (rounded to whole steps).
  double sample_interval = 0.0;
};

struct SimulationResult {
  EquilibriumReport report;
  OpinionState final_state;
  std::vector<double> sample_times;
  std::vector<std::vector<double>> samples;
  double integration_step = 0.0;
  bool step_refined = false;
  double max_box_excess = 0.0;
};

// Integrates with fixed-step RK4 and checks the residual-plus-movement
// criterion on consecutive windows [k w, (k+1) w]. Stops at the first window
// that passes, on consensus absorption, or at the horizon (NonConvergent).
SimulationResult simulate(const OpinionState& x0, const InfluenceGraph& graph,
                          const PlatformParams& platform, const SimulationSettings& settings = {});

}  // namespace opdyn
