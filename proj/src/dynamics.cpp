#include "opdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "opdyn/error.hpp"

namespace opdyn {

double sgn_eps(double x, double epsilon) {
  if (!std::isfinite(x)) throw InvalidArgument("sgn_eps: non-finite argument");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("sgn_eps: epsilon must be positive");
  }
  if (x >= epsilon) return 1.0;
  if (x <= -epsilon) return -1.0;
  return x / epsilon;
}

double sgn_eps_integral(double x, double epsilon) {
  const double ax = std::abs(x);
  if (ax <= epsilon) return x * x / (2.0 * epsilon);
  return ax - 0.5 * epsilon;
}

PlatformParams::PlatformParams(std::vector<double> b, double epsilon, double alpha)
    : b_(std::move(b)), epsilon_(epsilon), alpha_(alpha) {
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) {
    throw InvalidArgument("platform epsilon must be positive");
  }
  if (!(alpha_ >= 0.0 && alpha_ <= 1.0)) throw InvalidArgument("platform alpha must lie in [0, 1]");
  for (const double bi : b_) {
    if (!std::isfinite(bi) || bi < 0.0) throw InvalidArgument("platform strengths must be >= 0");
    max_b_ = std::max(max_b_, bi);
  }
}

PlatformParams PlatformParams::uniform(std::size_t agents, double b, double epsilon, double alpha) {
  return PlatformParams(std::vector<double>(agents, b), epsilon, alpha);
}

namespace {

void check_dims(std::size_t x, const InfluenceGraph& graph, const PlatformParams& platform) {
  if (x != graph.size() || platform.size() != graph.size()) {
    throw InvalidArgument("dimension mismatch: state " + std::to_string(x) + ", graph " +
                          std::to_string(graph.size()) + ", platform " +
                          std::to_string(platform.size()));
  }
}

void require_symmetric(const InfluenceGraph& graph) {
  if (!graph.is_symmetric()) {
    throw PreconditionViolation("Lyapunov certificate requires a symmetric influence matrix");
  }
}

}  // namespace

void vector_field(std::span<const double> x, const InfluenceGraph& graph,
                  const PlatformParams& platform, std::span<double> out) {
  check_dims(x.size(), graph, platform);
  if (out.size() != x.size()) throw InvalidArgument("vector_field: output size mismatch");

  const auto offsets = graph.row_offsets();
  const auto cols = graph.columns();
  const auto weights = graph.weights();
  const auto sums = graph.row_sums();
  const auto b = platform.b();
  const double inv_eps = 1.0 / platform.epsilon();
  const double alpha = platform.alpha();
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    double social = -sums[i] * x[i];
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) social += weights[k] * x[cols[k]];
    const double s = std::clamp(x[i] * inv_eps, -1.0, 1.0);
    out[i] = social + b[i] * (alpha * s - x[i]);
  }
}

std::vector<double> vector_field(std::span<const double> x, const InfluenceGraph& graph,
                                 const PlatformParams& platform) {
  std::vector<double> out(x.size());
  vector_field(x, graph, platform, out);
  return out;
}

double lyapunov_value(std::span<const double> x, const InfluenceGraph& graph,
                      const PlatformParams& platform) {
  check_dims(x.size(), graph, platform);
  require_symmetric(graph);
  std::vector<double> lx(x.size());
  graph.apply_laplacian(x, lx);
  double quadratic = 0.0;
  double potential = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    quadratic += x[i] * (lx[i] + platform.b(i) * x[i]);
    potential += platform.b(i) * platform.alpha() * sgn_eps_integral(x[i], platform.epsilon());
  }
  return 0.5 * quadratic - potential;
}

double lyapunov_dissipation(std::span<const double> x, const InfluenceGraph& graph,
                            const PlatformParams& platform) {
  check_dims(x.size(), graph, platform);
  require_symmetric(graph);
  std::vector<double> lx(x.size());
  graph.apply_laplacian(x, lx);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = platform.alpha() * sgn_eps(x[i], platform.epsilon());
    const double g = lx[i] + platform.b(i) * x[i] - platform.b(i) * s;
    total += g * g;
  }
  return total;
}

}  // namespace opdyn
