#include "opdyn/two_agent.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "opdyn/error.hpp"

namespace opdyn {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(fmt::format("{} must be positive and finite (got {})", name, v));
  }
}

bool tight(double lhs, double rhs, double scale) {
  return std::abs(lhs - rhs) <= kBoundaryTolerance * scale;
}

// b^(1-2a/b) a^(2a/b) s^(1+2a/b), evaluated in log space.
double c2_rhs(double a, double b, double s) {
  if (s == 0.0) return 0.0;
  const double r = 2.0 * a / b;
  return std::exp((1.0 - r) * std::log(b) + r * std::log(a) + (1.0 + r) * std::log(s));
}

}  // namespace

void TwoAgentSystem::validate() const {
  require_positive(a, "a");
  require_positive(b, "b");
  require_positive(epsilon, "epsilon");
  if (!std::isfinite(x0[0]) || !std::isfinite(x0[1])) {
    throw InvalidArgument("initial opinions must be finite");
  }
}

InfluenceGraph TwoAgentSystem::graph() const {
  const double w[4] = {0.0, a, a, 0.0};
  return InfluenceGraph::from_dense(2, w, {Block::Left, Block::Right});
}

PlatformParams TwoAgentSystem::platform() const { return PlatformParams::uniform(2, b, epsilon); }

std::string_view to_string(TwoAgentKind kind) {
  switch (kind) {
    case TwoAgentKind::PD_C1:
      return "PD_C1";
    case TwoAgentKind::PD_C2:
      return "PD_C2";
    case TwoAgentKind::CO_SameSign:
      return "CO_SameSign";
    case TwoAgentKind::CO_Band:
      return "CO_Band";
    case TwoAgentKind::Boundary:
      return "Boundary";
  }
  return "?";
}

std::string_view to_string(SignSource s) {
  switch (s) {
    case SignSource::None:
      return "none";
    case SignSource::Quadrant:
      return "quadrant";
    case SignSource::SameSign:
      return "same-sign";
    case SignSource::Analytic:
      return "analytic";
    case SignSource::Simulation:
      return "sign-by-simulation";
  }
  return "?";
}

ClassificationResult classify(const TwoAgentSystem& sys) {
  sys.validate();
  const double x1 = sys.x0[0];
  const double x2 = sys.x0[1];
  if (x1 * x2 == 0.0) throw InvalidArgument("classify: requires x1(0) * x2(0) != 0");
  const double a = sys.a;
  const double b = sys.b;

  ClassificationResult out;
  ConditionValues& c = out.conditions;
  const double d = (2.0 * a + b) * std::abs(x1 - x2);
  const double s = std::abs(x1 + x2);
  c.lhs = d - 2.0 * b;
  c.c1_rhs = b * s;
  c.c2_rhs = c2_rhs(a, b, s);

  if (x1 * x2 > 0.0) {
    const double sign = x1 > 0.0 ? 1.0 : -1.0;
    out.kind = TwoAgentKind::CO_SameSign;
    out.predicted_equilibrium = Pair{sign, sign};
    out.sign_source = SignSource::SameSign;
    return out;
  }

  c.c1_tight = tight(c.lhs, c.c1_rhs, std::max({d, 2.0 * b, c.c1_rhs}));
  c.c2_tight = tight(c.lhs, c.c2_rhs, std::max({d, 2.0 * b, c.c2_rhs}));
  c.c1 = !c.c1_tight && c.lhs < c.c1_rhs;
  c.c2 = !c.c2_tight && c.lhs > c.c2_rhs;

  if (c.c1 || c.c2) {
    const double mu = pd_equilibrium(a, b)[0];
    out.kind = c.c1 ? TwoAgentKind::PD_C1 : TwoAgentKind::PD_C2;
    out.predicted_equilibrium = x1 < 0.0 ? Pair{-mu, mu} : Pair{mu, -mu};
    out.sign_source = SignSource::Quadrant;
  } else if (c.c1_tight || c.c2_tight) {
    out.kind = TwoAgentKind::Boundary;
  } else {
    // The sandwich is only nonempty for |x1 + x2| > b/a, so the sum is nonzero.
    const double sign = x1 + x2 > 0.0 ? 1.0 : -1.0;
    out.kind = TwoAgentKind::CO_Band;
    out.predicted_equilibrium = Pair{sign, sign};
    out.sign_source = SignSource::Analytic;
  }
  return out;
}

bool resolve_sign_by_simulation(const TwoAgentSystem& sys, ClassificationResult& result,
                                const SimulationSettings& settings) {
  if (!is_co(result.kind)) return false;
  const auto sim = simulate(OpinionState{{sys.x0[0], sys.x0[1]}, 0.0}, sys.graph(),
                            sys.platform(), settings);
  if (!sim.report.consensus()) return false;
  const double sign = sim.report.kind == EquilibriumKind::ConsensusPlus ? 1.0 : -1.0;
  result.predicted_equilibrium = Pair{sign, sign};
  result.sign_source = SignSource::Simulation;
  return true;
}

Pair pd_equilibrium(double a, double b) {
  require_positive(a, "a");
  require_positive(b, "b");
  const double mu = b / (2.0 * a + b);
  return {mu, 2.0 * mu};
}

Pair closed_form_trajectory(const QuadrantTrajectory& q, double t) {
  const double c = 2.0 * q.a + q.b;
  const double k = c * (q.u + q.v) - 2.0 * q.b;
  const double slow = std::exp(-q.b * t) * (q.u - q.v) / 2.0;
  const double fast = std::exp(-c * t) * k / (2.0 * c);
  const double mu = q.b / c;
  return {-mu - slow - fast, mu - slow + fast};
}

TrajectoryExtrema trajectory_extrema(double a, double b, double u, double v) {
  require_positive(a, "a");
  require_positive(b, "b");
  require_positive(u, "u");
  require_positive(v, "v");
  const QuadrantTrajectory q{u, v, a, b};
  const double mu = b / (2.0 * a + b);
  const double k = (2.0 * a + b) * (u + v) - 2.0 * b;
  const double diff = u - v;

  TrajectoryExtrema out;
  out.max_x1 = std::max(-u, -mu);
  out.min_x2 = std::min(v, mu);
  // x1' vanishes where b(u-v)e^{-bt} = -K e^{-(2a+b)t}, x2' where it equals
  // +K e^{-(2a+b)t}. Either needs K (u-v) of the matching sign; u = v or
  // K = 0 leaves both coordinates monotone.
  const double prod = k * diff;
  if (prod != 0.0) {
    const double t = std::log(std::abs(k) / (b * std::abs(diff))) / (2.0 * a);
    if (t > 0.0) {
      const Pair x = closed_form_trajectory(q, t);
      if (prod < 0.0) {
        out.t_star_x1 = t;
        out.max_x1 = std::max(out.max_x1, x[0]);
      } else {
        out.t_star_x2 = t;
        out.min_x2 = std::min(out.min_x2, x[1]);
      }
    }
  }
  return out;
}

double polarization_curve(double a, double b, double y0, double t) {
  const double p = pd_equilibrium(a, b)[1];
  return p + std::exp(-(2.0 * a + b) * t) * (y0 - p);
}

Pair BandCrossing::evaluate(double t) const {
  const double ep = c_plus * std::exp(lambda_plus * t);
  const double em = c_minus * std::exp(lambda_minus * t);
  return {ep * v_plus[0] + em * v_minus[0] + v0[0], ep * v_plus[1] + em * v_minus[1] + v0[1]};
}

Pair band_field(double b, double epsilon, const Pair& x) {
  return {(x[1] - x[0]) + b * (x[0] / epsilon - x[0]), (x[0] - x[1]) + b * (1.0 - x[1])};
}

BandCrossing band_crossing(double b, double epsilon, double x2_0) {
  require_positive(b, "b");
  require_positive(epsilon, "epsilon");
  if (!(x2_0 >= b)) throw InvalidArgument("band_crossing: requires x2(0) >= b");

  BandCrossing out;
  const double root = std::sqrt(b * b + 4.0 * epsilon * epsilon);
  const double base = b - 2.0 * epsilon - 2.0 * b * epsilon;
  out.lambda_plus = (base + root) / (2.0 * epsilon);
  out.lambda_minus = (base - root) / (2.0 * epsilon);
  out.v_plus = {(b + root) / (2.0 * epsilon), 1.0};
  out.v_minus = {(b - root) / (2.0 * epsilon), 1.0};

  // Fixed point of x' = M x + (0, b) with M = [[b/eps - 1 - b, 1], [1, -1 - b]].
  const double m11 = b / epsilon - 1.0 - b;
  const double m22 = -1.0 - b;
  const double det = m11 * m22 - 1.0;
  out.v0 = {b / det, -b * m11 / det};

  const double r1 = -epsilon - out.v0[0];
  const double r2 = x2_0 - out.v0[1];
  const double vdet = out.v_plus[0] - out.v_minus[0];
  out.c_plus = (r1 - out.v_minus[0] * r2) / vdet;
  out.c_minus = (out.v_plus[0] * r2 - r1) / vdet;
  out.c_plus_positive = out.c_plus > 0.0;
  out.c_minus_positive = out.c_minus > 0.0;
  return out;
}

RegionGrid region_grid(double a, double b, double grid_min, double grid_max,
                       std::size_t resolution) {
  require_positive(a, "a");
  require_positive(b, "b");
  if (resolution < 2) throw InvalidArgument("region_grid: resolution must be >= 2");
  if (!(grid_max > grid_min) || !std::isfinite(grid_min) || !std::isfinite(grid_max)) {
    throw InvalidArgument("region_grid: need finite grid_min < grid_max");
  }
  RegionGrid grid;
  grid.a = a;
  grid.b = b;
  grid.axis.resize(resolution);
  const double span = grid_max - grid_min;
  const auto last = static_cast<double>(resolution - 1);
  for (std::size_t i = 0; i < resolution; ++i) {
    const auto fi = static_cast<double>(i);
    double x = (grid_min * (last - fi) + grid_max * fi) / last;
    if (std::abs(x) <= 1e-12 * span) x = 0.0;
    grid.axis[i] = x;
  }
  grid.kinds.resize(resolution * resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    for (std::size_t j = 0; j < resolution; ++j) {
      const double x1 = grid.axis[i];
      const double x2 = grid.axis[j];
      grid.kinds[i * resolution + j] =
          x1 == 0.0 || x2 == 0.0 ? TwoAgentKind::Boundary
                                 : classify(TwoAgentSystem{a, b, {x1, x2}}).kind;
    }
  }
  return grid;
}

void write_region_csv(std::ostream& out, const RegionGrid& grid) {
  out << "x1_0,x2_0,kind\n";
  const std::size_t n = grid.resolution();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      fmt::print(out, "{},{},{}\n", grid.axis[i], grid.axis[j], to_string(grid.at(i, j)));
    }
  }
}

Trajectory simulate_two_agent(const TwoAgentSystem& sys, double horizon, double step) {
  sys.validate();
  return integrate(OpinionState{{sys.x0[0], sys.x0[1]}, 0.0}, sys.graph(), sys.platform(), horizon,
                   step);
}

}  // namespace opdyn
