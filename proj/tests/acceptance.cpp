// Acceptance checks. Usage: acceptance [id ...]; no ids runs all thirteen.
// Prints one PASS/FAIL line per criterion (INFO lines add context) and exits
// nonzero when any selected criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "opdyn/dynamics.hpp"
#include "opdyn/experiments.hpp"
#include "opdyn/network.hpp"
#include "opdyn/parallel.hpp"
#include "opdyn/simulation.hpp"
#include "opdyn/two_agent.hpp"

using namespace opdyn;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

void info(int id, const std::string& msg) { fmt::print("criterion {:2d} INFO {}\n", id, msg); }

bool same_verdict(TwoAgentKind kind, EquilibriumKind sim) {
  if (is_pd(kind)) return sim == EquilibriumKind::PersistentDisagreement;
  return sim == EquilibriumKind::ConsensusPlus || sim == EquilibriumKind::ConsensusMinus;
}

// True when the PD/CO verdict changes somewhere in the radius-r disc around x.
bool near_locus(double a, double b, const Pair& x, double r) {
  const bool pd = is_pd(classify({a, b, x}).kind);
  for (int ring = 1; ring <= 5; ++ring) {
    const double rho = r * ring / 5.0;
    for (int k = 0; k < 72; ++k) {
      const double th = 2.0 * M_PI * k / 72.0;
      const Pair y{x[0] + rho * std::cos(th), x[1] + rho * std::sin(th)};
      if (y[0] * y[1] == 0.0 || y[0] * x[0] < 0.0 || y[1] * x[1] < 0.0) return true;
      const auto kind = classify({a, b, y}).kind;
      if (kind == TwoAgentKind::Boundary || is_pd(kind) != pd) return true;
    }
  }
  return false;
}

Verdict classifier_agreement() {
  bool pass = true;
  std::string detail;
  for (const double ratio : {0.5, 1.0}) {
    const auto grid = region_grid(1.0, ratio, -3.0, 3.0, 101);
    std::size_t checked = 0, mismatched = 0, far = 0;
    for (std::size_t i = 0; i < 101; ++i) {
      for (std::size_t j = 0; j < 101; ++j) {
        const auto kind = grid.at(i, j);
        if (kind == TwoAgentKind::Boundary) continue;
        const TwoAgentSystem sys{1.0, ratio, {grid.axis[i], grid.axis[j]}};
        const auto sim = simulate({{sys.x0[0], sys.x0[1]}, 0.0}, sys.graph(), sys.platform());
        ++checked;
        if (same_verdict(kind, sim.report.kind)) continue;
        ++mismatched;
        if (!near_locus(1.0, ratio, sys.x0, 0.05)) {
          ++far;
          info(1, fmt::format("b/a={} far mismatch at ({}, {}): {} vs {}", ratio, sys.x0[0],
                              sys.x0[1], to_string(kind), to_string(sim.report.kind)));
        }
      }
    }
    const double rate = 1.0 - static_cast<double>(mismatched) / static_cast<double>(checked);
    pass = pass && rate >= 0.99 && far == 0;
    detail += fmt::format("b/a={}: agreement {:.4f} on {} points, {} mismatches ({} off-locus); ",
                          ratio, rate, checked, mismatched, far);
  }
  return {pass, detail};
}

Verdict pd_equilibrium_value() {
  const TwoAgentSystem sys{1.0, 1.0, {-0.4, 0.4}};
  const auto sim = simulate({{-0.4, 0.4}, 0.0}, sys.graph(), sys.platform());
  const auto& x = sim.final_state.opinions;
  const double err = std::max(std::abs(x[0] + 1.0 / 3.0), std::abs(x[1] - 1.0 / 3.0));
  return {sim.report.kind == EquilibriumKind::PersistentDisagreement && err < 1e-3,
          fmt::format("limit ({:.9f}, {:.9f}), {}, error {:.3g}", x[0], x[1],
                      to_string(sim.report.kind), err)};
}

Verdict closed_form_oracle() {
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> ab(0.2, 2.0), uv(0.05, 3.0);
  double worst = 0.0;
  int instances = 0;
  while (instances < 100) {
    const double a = ab(eng), b = ab(eng), u = uv(eng), v = uv(eng);
    const TwoAgentSystem sys{a, b, {-u, v}};
    if (!is_pd(classify(sys).kind)) continue;
    ++instances;
    const auto traj = integrate({{-u, v}, 0.0}, sys.graph(), sys.platform(), 10.0, 1e-3);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const Pair exact = closed_form_trajectory({u, v, a, b}, traj.times[k]);
      if (std::abs(exact[0]) <= sys.epsilon || std::abs(exact[1]) <= sys.epsilon) break;
      worst = std::max({worst, std::abs(exact[0] - traj.states[k][0]),
                        std::abs(exact[1] - traj.states[k][1])});
    }
  }
  return {worst < 1e-6, fmt::format("max deviation {:.3g} over 100 PD instances", worst)};
}

Verdict extrema_vs_classification() {
  std::mt19937_64 eng(4);
  std::uniform_real_distribution<double> ab(0.05, 5.0), uv(0.001, 5.0);
  int checked = 0, disagree = 0;
  for (int k = 0; k < 10000; ++k) {
    const double a = ab(eng), b = ab(eng), u = uv(eng), v = uv(eng);
    const auto kind = classify({a, b, {-u, v}}).kind;
    if (kind == TwoAgentKind::Boundary) continue;
    ++checked;
    const auto ex = trajectory_extrema(a, b, u, v);
    if (is_pd(kind) != (ex.max_x1 < 0.0 && ex.min_x2 > 0.0)) ++disagree;
  }
  return {disagree == 0, fmt::format("{} disagreements on {} instances", disagree, checked)};
}

Verdict band_coefficients() {
  bool pass = true;
  std::string detail;
  for (const double b : {0.5, 1.0, 2.0}) {
    const auto bc = band_crossing(b, 1e-5, 1.5 * b);
    const double target = b * b / (1.0 + b);
    const double rel = std::abs(bc.c_minus - target) / target;
    pass = pass && bc.c_plus > 0.0 && bc.c_minus > 0.0 && rel <= 0.05;
    detail += fmt::format("b={}: c+={:.3g} c-={:.6f} vs {:.6f} (rel {:.3f}); ", b, bc.c_plus,
                          bc.c_minus, target, rel);
    const auto at_b = band_crossing(b, 1e-5, b);
    info(5, fmt::format("b={} with x2(0)=b: c-={:.6f}, rel {:.2e}", b, at_b.c_minus,
                        std::abs(at_b.c_minus - target) / target));
  }
  return {pass, detail};
}

Verdict polarization_monotonicity() {
  bool pass = true;
  std::string detail;
  // Two agents, balanced starts of width h.
  std::vector<double> terminal;
  double worst_two = 0.0;
  for (const double h : {0.5, 1.0, 2.0, 3.0}) {
    const TwoAgentSystem sys{1.0, 1.0, {-h / 2.0, h / 2.0}};
    SimulationSettings s;
    s.horizon = 20.0;
    s.stop_at_convergence = false;
    s.sample_interval = 0.01;
    const auto sim = simulate({{sys.x0[0], sys.x0[1]}, 0.0}, sys.graph(), sys.platform(), s);
    std::vector<double> y;
    for (const auto& x : sim.samples) y.push_back(x[1] - x[0]);
    const double dir = y.back() >= y.front() ? 1.0 : -1.0;
    for (std::size_t k = 1; k < y.size(); ++k) worst_two = std::max(worst_two, -dir * (y[k] - y[k - 1]));
    terminal.push_back(y.back());
  }
  const auto [lo2, hi2] = std::minmax_element(terminal.begin(), terminal.end());
  const double spread2 = *hi2 / *lo2 - 1.0;
  pass = pass && worst_two <= 1e-6 && spread2 <= 0.1;
  detail += fmt::format("two-agent: worst reversal {:.2g}, terminal spread {:.3f}; ", worst_two, spread2);

  // Block model means.
  ExperimentConfig cfg;
  cfg.b_grid = {1.0};
  cfg.h_grid = {0.5, 1.0, 2.0, 3.0};
  cfg.trials = 200;
  cfg.seed = 6;
  const auto res = run_trajectory_monotonicity(cfg);
  std::vector<double> ends;
  std::size_t violations = 0;
  for (const auto& row : res.rows) {
    const double dir = row.mean.back() >= row.mean.front() ? 1.0 : -1.0;
    for (std::size_t k = 1; k < row.mean.size(); ++k) {
      if (-dir * (row.mean[k] - row.mean[k - 1]) > row.sd[k]) ++violations;
    }
    ends.push_back(row.mean.back());
    info(6, fmt::format("SBM h={}: mean polarization {:.4f} -> {:.4f} (sd {:.4f})", row.h,
                        row.mean.front(), row.mean.back(), row.sd.back()));
  }
  const auto [lo, hi] = std::minmax_element(ends.begin(), ends.end());
  const double spread = *hi / *lo - 1.0;
  pass = pass && violations == 0 && spread <= 0.1;
  detail += fmt::format("SBM b=1: {} reversals beyond 1 sd, terminal spread {:.3f}", violations, spread);
  return {pass, detail};
}

Verdict mean_field_polarization() {
  ExperimentConfig cfg;
  cfg.b_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
  cfg.trials = 500;
  cfg.seed = 7;
  const auto res = run_polarization_experiment(cfg);
  bool pass = true;
  std::string detail;
  for (const auto& row : res.rows) {
    const bool ok = row.p50 && std::abs(*row.p50 / *row.theory - 1.0) <= 0.1;
    pass = pass && ok;
    detail += fmt::format("b={}: median {} vs {:.4f} ({} PD); ", row.b,
                          row.p50 ? fmt::format("{:.4f}", *row.p50) : "none", *row.theory,
                          row.counts.disagreement);
  }
  return {pass, detail};
}

double membership_rate(std::size_t n, double delta, std::size_t seeds) {
  std::size_t hits = 0;
  for (std::size_t s = 0; s < seeds; ++s) {
    SbmConfig cfg;
    cfg.n = n;
    cfg.seed = s;
    hits += concentration_check(generate_sbm(cfg), cfg, delta).in_set ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(seeds);
}

Verdict concentration() {
  std::vector<double> rates;
  std::string detail;
  for (const std::size_t n : {128, 256, 512, 1024}) {
    rates.push_back(membership_rate(n, 0.3, 100));
    detail += fmt::format("n={}: {:.2f}; ", n, rates.back());
  }
  info(8, fmt::format("n=2048: {:.2f}", membership_rate(2048, 0.3, 100)));
  const bool monotone = std::is_sorted(rates.begin(), rates.end());
  return {monotone && rates.back() >= 0.99, detail};
}

Verdict envelope_sandwich() {
  const double delta = 0.1;
  SbmConfig cfg;
  cfg.n = 256;
  const EnvelopeParams params{cfg.a, 1.0, cfg.p, cfg.q, delta};
  const auto env = integrate_envelopes(params, 0.5, -0.5, 20.0);
  SimulationSettings s;
  s.horizon = 20.0;
  s.stop_at_convergence = false;
  s.sample_interval = 0.1;
  auto excess_for = [&](const InfluenceGraph& g) {
    std::vector<double> x(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) x[i] = g.label(i) == Block::Left ? 0.5 : -0.5;
    const auto sim = simulate({x, 0.0}, g, PlatformParams::uniform(g.size(), 1.0), s);
    return envelope_excess(g, sim.sample_times, sim.samples, env);
  };

  const std::size_t max_seeds = 2000;
  std::size_t found = 0, inside = 0;
  double best_same = INFINITY, best_cross = INFINITY;
  double worst = -INFINITY;
  for (std::size_t seed = 0; seed < max_seeds && found < 20; ++seed) {
    cfg.seed = seed;
    const auto g = generate_sbm(cfg);
    const auto check = concentration_check(g, cfg, delta);
    best_same = std::min(best_same, check.worst_same_deviation);
    best_cross = std::min(best_cross, check.worst_cross_deviation);
    if (!check.in_set) continue;
    ++found;
    const double e = excess_for(g);
    worst = std::max(worst, e);
    inside += e <= 1e-6 ? 1 : 0;
  }
  // Context: the same comparison on graphs outside the concentration set.
  double outside_worst = -INFINITY;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    outside_worst = std::max(outside_worst, excess_for(generate_sbm(cfg)));
  }
  info(9, fmt::format("smallest worst-agent degree deviations seen: same {:.3f}, cross {:.3f} (band {})",
                      best_same, best_cross, delta));
  info(9, fmt::format("first 5 seeds regardless of membership: worst excess {:.3g}", outside_worst));
  return {found == 20 && inside == 20,
          fmt::format("{} of {} seeds in the concentration set, {} inside envelopes{}", found,
                      max_seeds, inside,
                      found ? fmt::format(", worst excess {:.3g}", worst) : std::string())};
}

Verdict lyapunov_certificate() {
  std::mt19937_64 eng(10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t increases = 0, unconverged = 0;
  double worst_increase = 0.0, worst_residual = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 2 + eng() % 7;
    std::vector<InfluenceEntry> entries;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (unit(eng) < 0.6) {
          const double w = 0.1 + unit(eng);
          entries.push_back({i, j, w});
          entries.push_back({j, i, w});
        }
      }
    }
    const auto g = InfluenceGraph::from_entries(n, entries);
    std::vector<double> b(n), x0(n);
    for (auto& v : b) v = 0.1 + 1.9 * unit(eng);
    for (auto& v : x0) v = -2.0 + 4.0 * unit(eng);
    const PlatformParams platform(b, kDefaultEpsilon);
    SimulationSettings s;
    s.sample_interval = 0.05;
    const auto sim = simulate({x0, 0.0}, g, platform, s);
    double prev = lyapunov_value(sim.samples.front(), g, platform);
    for (const auto& x : sim.samples) {
      const double v = lyapunov_value(x, g, platform);
      if (v > prev + 1e-8) ++increases;
      worst_increase = std::max(worst_increase, v - prev);
      prev = v;
    }
    if (!sim.report.converged()) {
      ++unconverged;
      continue;
    }
    const auto f = vector_field(sim.report.limit->opinions, g, platform);
    for (const double v : f) worst_residual = std::max(worst_residual, std::abs(v));
  }
  return {increases == 0 && unconverged == 0 && worst_residual < 1e-5,
          fmt::format("{} V increases beyond 1e-8 (largest step {:.3g}), {} unconverged, worst limit "
                      "residual {:.3g}",
                      increases, worst_increase, unconverged, worst_residual)};
}

Verdict cycle_counterexample() {
  const auto r = run_cycle_demo();
  return {r.report.kind == EquilibriumKind::NonConvergent && r.tail_min_residual > 1e-3 &&
              r.symmetrized.converged(),
          fmt::format("{}, tail residual in [{:.4f}, {:.4f}], recurrence {:.3g}; symmetrized: {}",
                      to_string(r.report.kind), r.tail_min_residual, r.tail_max_residual,
                      r.recurrence, to_string(r.symmetrized.kind))};
}

Verdict consensus_trend() {
  ExperimentConfig cfg;
  cfg.b_grid = {0.05};
  cfg.h_grid = {0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  cfg.trials = 2000;
  cfg.seed = 12;
  const auto res = run_consensus_probability(cfg);
  std::size_t violations = 0;
  std::string detail;
  for (std::size_t k = 0; k < res.rows.size(); ++k) {
    const auto& r = res.rows[k];
    detail += fmt::format("h={}: {:.4f} [{:.4f}, {:.4f}]; ", r.h, r.p, r.lo, r.hi);
    if (k > 0 && r.hi < res.rows[k - 1].lo) ++violations;
  }
  return {violations == 0, fmt::format("{} decreases beyond the intervals; {}", violations, detail)};
}

Verdict extremism_shape() {
  ExperimentConfig cfg;
  cfg.b_grid = {0.01, 0.1, 0.5, 1.0, 5.0, 10.0};
  cfg.trials = 200;
  cfg.seed = 13;
  const auto res = run_extremism_experiment(cfg);
  auto median_at = [&](double b) {
    for (const auto& r : res.rows) {
      if (r.b == b && r.q50) return *r.q50;
    }
    return std::nan("");
  };
  const double lo = median_at(0.01), mid = median_at(0.5), hi = median_at(10.0);
  bool increasing = true;
  std::optional<double> prev;
  std::string pd;
  for (const auto& r : res.rows) {
    if (!r.mean_pd) {
      pd += fmt::format("b={}: no PD; ", r.b);
      continue;
    }
    if (prev && !(*r.mean_pd > *prev)) increasing = false;
    prev = r.mean_pd;
    pd += fmt::format("b={}: {:.4f}; ", r.b, *r.mean_pd);
  }
  return {lo > mid && hi > mid && increasing,
          fmt::format("medians b=0.01 {:.4f}, b=0.5 {:.4f}, b=10 {:.4f}; PD-conditional means {}",
                      lo, mid, hi, pd)};
}

const std::vector<std::function<Verdict()>> kCriteria{
    classifier_agreement,  pd_equilibrium_value,     closed_form_oracle,   extrema_vs_classification,
    band_coefficients,     polarization_monotonicity, mean_field_polarization, concentration,
    envelope_sandwich,     lyapunov_certificate,     cycle_counterexample, consensus_trend,
    extremism_shape};

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::err);
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) {
    ids.resize(kCriteria.size());
    std::iota(ids.begin(), ids.end(), 1);
  }
  int failures = 0;
  for (const int id : ids) {
    if (id < 1 || id > static_cast<int>(kCriteria.size())) {
      fmt::print(stderr, "unknown criterion {}\n", id);
      return 2;
    }
    const Verdict v = kCriteria[static_cast<std::size_t>(id - 1)]();
    fmt::print("criterion {:2d} {} {}\n", id, v.pass ? "PASS" : "FAIL", v.detail);
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
