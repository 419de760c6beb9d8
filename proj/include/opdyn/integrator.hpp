#pragma once

#include <cstddef>
#include <vector>

#include "opdyn/dynamics.hpp"
#include "opdyn/graph.hpp"

namespace opdyn {

// Uniformly sampled solution of the opinion dynamics.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  double step_size = 0.0;         // spacing between recorded states
  double integration_step = 0.0;  // RK4 step actually taken (<= step_size)
  bool step_refined = false;      // the band-resolution guard shrank the requested step
  double max_box_excess = 0.0;    // largest excursion outside [-K, K]^n seen, never clamped

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
  OpinionState state(std::size_t k) const { return {states.at(k), times.at(k)}; }
  const std::vector<double>& final_opinions() const { return states.back(); }
  double final_time() const { return times.back(); }
};

struct IntegrateOptions {
  std::size_t record_every = 1;  // keep every k-th step of the requested grid
  bool guard_step = true;        // enforce step <= epsilon / (10 * max b)
};

// Number of RK4 substeps per requested step so that the substep satisfies
// h <= epsilon / (10 * max_i b_i). 1 when no refinement is needed.
std::size_t step_refinement(double step, const PlatformParams& platform);

// K = max(max_i |x_i(0)|, 1); the box [-K, K]^n is positively invariant.
double invariant_box_radius(std::span<const double> x0);

// Fixed-step classical RK4 from x0.time to at least x0.time + horizon.
// The returned grid has spacing step * record_every; when the guard refines
// the step, each grid interval is split into equal substeps and a warning is
// logged. Throws NumericalFailure on non-finite values.
Trajectory integrate(const OpinionState& x0, const InfluenceGraph& graph,
                     const PlatformParams& platform, double horizon, double step = kDefaultStep,
                     const IntegrateOptions& options = {});

}  // namespace opdyn
