#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "opdyn/dynamics.hpp"
#include "opdyn/integrator.hpp"
#include "opdyn/simulation.hpp"

namespace opdyn {

using Pair = std::array<double, 2>;

// Two agents influencing each other with weight a, both pulled by the
// platform with strength b. Agent 1 is the L block, agent 2 the R block.
struct TwoAgentSystem {
  double a = 1.0;
  double b = 1.0;
  Pair x0{0.0, 0.0};
  double epsilon = kDefaultEpsilon;

  // Throws InvalidArgument unless a, b, epsilon are positive and finite.
  void validate() const;
  InfluenceGraph graph() const;
  PlatformParams platform() const;
};

enum class TwoAgentKind { PD_C1, PD_C2, CO_SameSign, CO_Band, Boundary };
std::string_view to_string(TwoAgentKind kind);

inline bool is_pd(TwoAgentKind k) { return k == TwoAgentKind::PD_C1 || k == TwoAgentKind::PD_C2; }
inline bool is_co(TwoAgentKind k) {
  return k == TwoAgentKind::CO_SameSign || k == TwoAgentKind::CO_Band;
}

// Where the sign of the predicted equilibrium comes from.
//   Quadrant:   PD, the trajectory never leaves its opening quadrant.
//   SameSign:   both opinions already share a sign.
//   Analytic:   CO_Band, the agent with the weaker opinion crosses zero, so
//               consensus follows the sign of x1 + x2.
//   Simulation: confirmed by integrating the dynamics.
enum class SignSource { None, Quadrant, SameSign, Analytic, Simulation };
std::string_view to_string(SignSource s);

// Both sides of the PD conditions, with K = (2a+b)|x1-x2| - 2b:
//   C1: K < b |x1+x2|
//   C2: K > b^(1-2a/b) a^(2a/b) |x1+x2|^(1+2a/b)
// CO_Band is the strict sandwich b|x1+x2| <= K <= c2_rhs.
struct ConditionValues {
  double lhs = 0.0;
  double c1_rhs = 0.0;
  double c2_rhs = 0.0;
  bool c1 = false;
  bool c2 = false;
  bool c1_tight = false;  // |lhs - c1_rhs| within the relative boundary tolerance
  bool c2_tight = false;
};

struct ClassificationResult {
  TwoAgentKind kind = TwoAgentKind::Boundary;
  std::optional<Pair> predicted_equilibrium;  // empty for Boundary
  ConditionValues conditions;
  SignSource sign_source = SignSource::None;
};

inline constexpr double kBoundaryTolerance = 1e-12;

// Throws InvalidArgument when x1(0) * x2(0) == 0. Exact equality of a
// condition (to kBoundaryTolerance relative) gives Boundary unless the other
// PD condition holds strictly.
ClassificationResult classify(const TwoAgentSystem& sys);

// Overwrites the consensus sign of a CO result with the outcome of simulating
// the dynamics; sign_source becomes Simulation. Returns false (leaving the
// result unchanged) when the simulation does not reach consensus.
bool resolve_sign_by_simulation(const TwoAgentSystem& sys, ClassificationResult& result,
                                const SimulationSettings& settings = {});

// (mu*, p*) = (b/(2a+b), 2b/(2a+b)).
Pair pd_equilibrium(double a, double b);

// Opinions x1 = -u < 0 < v = x2 while both stay outside the band.
struct QuadrantTrajectory {
  double u = 0.0;
  double v = 0.0;
  double a = 1.0;
  double b = 1.0;
};

// Solution of the linear system that governs the quadrant:
//   x1(t) = -b/c - e^{-bt}(u-v)/2 - e^{-ct} K/(2c)
//   x2(t) =  b/c - e^{-bt}(u-v)/2 + e^{-ct} K/(2c),   c = 2a+b, K = c(u+v) - 2b.
Pair closed_form_trajectory(const QuadrantTrajectory& q, double t);

struct TrajectoryExtrema {
  double max_x1 = 0.0;
  double min_x2 = 0.0;
  std::optional<double> t_star_x1;  // interior maximiser of x1, if any
  std::optional<double> t_star_x2;  // interior minimiser of x2, if any
};

// sup_{t>=0} x1(t) and inf_{t>=0} x2(t) of the closed form, endpoints and the
// limit t -> infinity included.
TrajectoryExtrema trajectory_extrema(double a, double b, double u, double v);

// Two-agent polarization |x2 - x1| in the PD regime:
//   y(t) = p* + e^{-(2a+b)t}(y0 - p*).
double polarization_curve(double a, double b, double y0, double t);

// Linear flow while x1 sits inside the band and x2 > epsilon, with a = 1:
//   x(t) = c+ e^{l+ t} v+ + c- e^{l- t} v- + v0,   x(0) = (-epsilon, x2_0).
struct BandCrossing {
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  Pair v_plus{};
  Pair v_minus{};
  double c_plus = 0.0;
  double c_minus = 0.0;
  Pair v0{};
  bool c_plus_positive = false;
  bool c_minus_positive = false;
  bool crossing_guaranteed() const { return c_plus_positive && c_minus_positive; }

  Pair evaluate(double t) const;
};

// Requires b > 0, epsilon > 0 and x2_0 >= b.
BandCrossing band_crossing(double b, double epsilon, double x2_0);
// Right-hand side of the band system at x (x1 in the band, x2 above it).
Pair band_field(double b, double epsilon, const Pair& x);

// Classification of every point of a square lattice. kinds is row-major with
// x1 varying along rows: kinds[i * resolution + j] is (axis[i], axis[j]).
// Lattice points on an axis report Boundary.
struct RegionGrid {
  double a = 1.0;
  double b = 1.0;
  std::vector<double> axis;
  std::vector<TwoAgentKind> kinds;
  std::size_t resolution() const { return axis.size(); }
  TwoAgentKind at(std::size_t i, std::size_t j) const { return kinds[i * axis.size() + j]; }
};

RegionGrid region_grid(double a, double b, double grid_min, double grid_max,
                       std::size_t resolution);
// CSV with header x1_0,x2_0,kind.
void write_region_csv(std::ostream& out, const RegionGrid& grid);

// Two-agent trajectory via the general integrator.
Trajectory simulate_two_agent(const TwoAgentSystem& sys, double horizon,
                              double step = kDefaultStep);

}  // namespace opdyn
