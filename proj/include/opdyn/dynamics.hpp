#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "opdyn/graph.hpp"

namespace opdyn {

inline constexpr double kDefaultEpsilon = 1e-3;
inline constexpr double kDefaultStep = 0.01;
inline constexpr double kDefaultHorizon = 500.0;
inline constexpr double kDefaultTolerance = 1e-6;
inline constexpr double kDefaultWindow = 1.0;

// Opinions of every agent at one time point.
struct OpinionState {
  std::vector<double> opinions;
  double time = 0.0;
};

// Continuous interpolation of sign(x): -1 below -epsilon, x/epsilon inside the
// band, +1 above epsilon. Throws InvalidArgument on non-finite x or epsilon <= 0.
double sgn_eps(double x, double epsilon);

// Platform strength per agent, band half-width epsilon and content slant alpha.
// The platform pulls agent i toward alpha * sgn_eps(x_i) with strength b_i.
class PlatformParams {
 public:
  PlatformParams(std::vector<double> b, double epsilon = kDefaultEpsilon, double alpha = 1.0);

  static PlatformParams uniform(std::size_t agents, double b, double epsilon = kDefaultEpsilon,
                                double alpha = 1.0);

  std::size_t size() const noexcept { return b_.size(); }
  std::span<const double> b() const noexcept { return b_; }
  double b(std::size_t i) const { return b_[i]; }
  double max_b() const noexcept { return max_b_; }
  double epsilon() const noexcept { return epsilon_; }
  double alpha() const noexcept { return alpha_; }

 private:
  std::vector<double> b_;
  double epsilon_;
  double alpha_;
  double max_b_ = 0.0;
};

// out_i = sum_j a_ij (x_j - x_i) + b_i (alpha * sgn_eps(x_i) - x_i),
// i.e. out = -L x + B (alpha * sgn_eps(x) - x).
void vector_field(std::span<const double> x, const InfluenceGraph& graph,
                  const PlatformParams& platform, std::span<double> out);

std::vector<double> vector_field(std::span<const double> x, const InfluenceGraph& graph,
                                 const PlatformParams& platform);

// Lyapunov certificate for symmetric influence matrices:
//   V(x) = 1/2 x^T (L + B) x - sum_j b_j * integral_0^{x_j} alpha * sgn_eps(s) ds.
// Throws PreconditionViolation when the graph is not symmetric.
double lyapunov_value(std::span<const double> x, const InfluenceGraph& graph,
                      const PlatformParams& platform);

// ||(L + B) x - B alpha sgn_eps(x)||^2, which is -dV/dt along the flow and
// vanishes exactly on the equilibrium set. Requires a symmetric graph.
double lyapunov_dissipation(std::span<const double> x, const InfluenceGraph& graph,
                            const PlatformParams& platform);

// integral_0^x sgn_eps(s) ds in closed form.
double sgn_eps_integral(double x, double epsilon);

}  // namespace opdyn
