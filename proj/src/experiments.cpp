#include "opdyn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "opdyn/error.hpp"
#include "opdyn/metrics.hpp"
#include "opdyn/parallel.hpp"
#include "opdyn/stats.hpp"

namespace opdyn {

namespace {

bool well_ordered(const Interval& iv) {
  return std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo <= iv.hi;
}

void require_positive_grid(const std::vector<double>& grid, const char* name) {
  for (const double v : grid) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument(fmt::format("{} values must be positive (got {})", name, v));
    }
  }
}

SimulationSettings settings_of(const IntegratorSettings& s) {
  SimulationSettings out;
  out.step = s.step;
  out.horizon = s.horizon;
  out.tol = s.tol;
  out.window = s.window;
  return out;
}

void count(OutcomeCounts& c, const TrialRecord& r) {
  if (r.failed) {
    ++c.failed;
  } else if (r.kind == EquilibriumKind::ConsensusPlus || r.kind == EquilibriumKind::ConsensusMinus) {
    ++c.consensus;
  } else if (r.kind == EquilibriumKind::PersistentDisagreement) {
    ++c.disagreement;
  } else {
    ++c.nonconvergent;
  }
}

bool is_consensus(const TrialRecord& r) {
  return !r.failed &&
         (r.kind == EquilibriumKind::ConsensusPlus || r.kind == EquilibriumKind::ConsensusMinus);
}
bool is_disagreement(const TrialRecord& r) {
  return !r.failed && r.kind == EquilibriumKind::PersistentDisagreement;
}

InfluenceGraph trial_graph(const ExperimentConfig& cfg, Rng& rng) {
  if (cfg.graph) return *cfg.graph;
  return generate_sbm(*cfg.sbm, rng);
}

// Trials for every value of `grid`, ordered grid-major.
std::vector<TrialRecord> sweep(const ExperimentConfig& cfg, const std::vector<double>& b_values,
                               const std::vector<double>& h_values) {
  const std::size_t per = cfg.trials;
  const std::size_t cells = b_values.size() * h_values.size();
  return run_indexed(cells * per, cfg.threads, [&](std::size_t idx) {
    const std::size_t cell = idx / per;
    const double b = b_values[cell / h_values.size()];
    const double h = h_values[cell % h_values.size()];
    return run_trial(cfg, b, h, idx % per);
  });
}

template <class T>
std::string opt(const std::optional<T>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials == 0) throw InvalidArgument("trials must be >= 1");
  if (!graph && !sbm) throw InvalidArgument("experiment needs an SBM config or a fixed graph");
  if (graph && !graph->fully_labeled()) {
    throw InvalidArgument("fixed graph must label every agent L or R");
  }
  if (sbm) sbm->validate();
  if (b_grid.empty()) throw InvalidArgument("b_grid must not be empty");
  require_positive_grid(b_grid, "b_grid");
  require_positive_grid(h_grid, "h_grid");
  if (!well_ordered(left) || !well_ordered(right)) {
    throw InvalidArgument("initial-opinion intervals must be finite with lo <= hi");
  }
  const auto& s = integrator;
  if (!(s.epsilon > 0.0) || !(s.step > 0.0) || !(s.horizon >= s.step) || !(s.tol > 0.0) ||
      !(s.window > 0.0)) {
    throw InvalidArgument("integrator settings must be positive with horizon >= step");
  }
  if (!(series_horizon >= s.step) || !(sample_interval > 0.0)) {
    throw InvalidArgument("series_horizon and sample_interval must be positive");
  }
}

std::vector<double> draw_opinions(const ExperimentConfig& cfg, const InfluenceGraph& graph,
                                  Rng& rng, double h) {
  const Interval left = h > 0.0 ? Interval{-h, 0.0} : cfg.left;
  const Interval right = h > 0.0 ? Interval{0.0, h} : cfg.right;
  std::vector<double> x(graph.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Interval& iv = graph.label(i) == Block::Right ? right : left;
    x[i] = rng.uniform(iv.lo, iv.hi);
  }
  return x;
}

TrialRecord run_trial(const ExperimentConfig& cfg, double b, double h, std::size_t trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.b = b;
  rec.h = h;
  Rng rng = Rng::stream(cfg.seed, trial);
  const InfluenceGraph graph = trial_graph(cfg, rng);
  const std::vector<double> x0 = draw_opinions(cfg, graph, rng, h);
  const PlatformParams platform = PlatformParams::uniform(graph.size(), b, cfg.integrator.epsilon);
  try {
    const SimulationResult sim = simulate({x0, 0.0}, graph, platform, settings_of(cfg.integrator));
    rec.kind = sim.report.kind;
    const auto& x = sim.report.limit ? sim.report.limit->opinions : sim.final_state.opinions;
    rec.polarization = block_polarization(x, graph.labels()).value_or(0.0);
    rec.extremism = extremism(x);
    rec.final_time = sim.final_state.time;
  } catch (const NumericalFailure& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

std::optional<double> theoretical_polarization(const ExperimentConfig& cfg, double b) {
  if (!cfg.sbm || cfg.graph) return std::nullopt;
  const SbmConfig& s = *cfg.sbm;
  if (s.q == 0.0) return std::nullopt;
  const double coupling = s.normalization == Normalization::UnitWeight
                              ? s.a * static_cast<double>(s.n) * s.q
                              : s.a * s.q / (s.p + s.q);
  return pd_equilibrium(coupling, b)[1];
}

PolarizationResult run_polarization_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  PolarizationResult out;
  out.trials = sweep(cfg, cfg.b_grid, {0.0});
  for (std::size_t k = 0; k < cfg.b_grid.size(); ++k) {
    PolarizationRow row;
    row.b = cfg.b_grid[k];
    row.theory = theoretical_polarization(cfg, row.b);
    std::vector<double> pd;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialRecord& r = out.trials[k * cfg.trials + t];
      count(row.counts, r);
      if (is_disagreement(r)) pd.push_back(r.polarization);
    }
    if (!pd.empty()) {
      row.p05 = percentile(pd, 5.0);
      row.p50 = percentile(pd, 50.0);
      row.p95 = percentile(pd, 95.0);
    }
    out.rows.push_back(row);
  }
  return out;
}

MonotonicityResult run_trajectory_monotonicity(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.h_grid.empty()) throw InvalidArgument("monotonicity experiment needs an h_grid");
  MonotonicityResult out;
  out.b = cfg.b_grid.front();
  out.theory = theoretical_polarization(cfg, out.b);

  SimulationSettings settings = settings_of(cfg.integrator);
  settings.horizon = cfg.series_horizon;
  settings.stop_at_convergence = false;
  settings.sample_interval = cfg.sample_interval;

  const std::size_t per = cfg.trials;
  using Series = std::optional<std::pair<std::vector<double>, std::vector<double>>>;
  const auto series = run_indexed(cfg.h_grid.size() * per, cfg.threads, [&](std::size_t idx) {
    const double h = cfg.h_grid[idx / per];
    Rng rng = Rng::stream(cfg.seed, idx % per);
    const InfluenceGraph graph = trial_graph(cfg, rng);
    const auto x0 = draw_opinions(cfg, graph, rng, h);
    const auto platform = PlatformParams::uniform(graph.size(), out.b, cfg.integrator.epsilon);
    try {
      const auto sim = simulate({x0, 0.0}, graph, platform, settings);
      std::vector<double> pol;
      pol.reserve(sim.samples.size());
      for (const auto& s : sim.samples) pol.push_back(*block_polarization(s, graph.labels()));
      return Series{std::in_place, sim.sample_times, std::move(pol)};
    } catch (const NumericalFailure&) {
      return Series{};
    }
  });

  for (std::size_t k = 0; k < cfg.h_grid.size(); ++k) {
    SeriesRow row;
    row.h = cfg.h_grid[k];
    std::vector<const Series::value_type*> ok;
    for (std::size_t t = 0; t < per; ++t) {
      if (const auto& s = series[k * per + t]) ok.push_back(&*s);
    }
    row.used = ok.size();
    if (!ok.empty()) {
      row.times = ok.front()->first;
      std::vector<double> column(ok.size());
      for (std::size_t j = 0; j < row.times.size(); ++j) {
        for (std::size_t t = 0; t < ok.size(); ++t) column[t] = ok[t]->second[j];
        row.mean.push_back(mean(column));
        row.sd.push_back(stddev(column));
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

ConsensusResult run_consensus_probability(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.h_grid.empty()) throw InvalidArgument("consensus experiment needs an h_grid");
  ConsensusResult out;
  out.b = cfg.b_grid.front();
  out.trials = sweep(cfg, {out.b}, cfg.h_grid);
  for (std::size_t k = 0; k < cfg.h_grid.size(); ++k) {
    ConsensusRow row;
    row.h = cfg.h_grid[k];
    for (std::size_t t = 0; t < cfg.trials; ++t) count(row.counts, out.trials[k * cfg.trials + t]);
    row.n = cfg.trials - row.counts.failed;
    if (row.n > 0) {
      const auto iv = proportion_interval(row.counts.consensus, row.n);
      row.p = iv.p;
      row.lo = iv.lo;
      row.hi = iv.hi;
    }
    out.rows.push_back(row);
  }
  return out;
}

ExtremismResult run_extremism_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExtremismResult out;
  out.trials = sweep(cfg, cfg.b_grid, {0.0});
  for (std::size_t k = 0; k < cfg.b_grid.size(); ++k) {
    ExtremismRow row;
    row.b = cfg.b_grid[k];
    std::vector<double> all, cons, pd;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialRecord& r = out.trials[k * cfg.trials + t];
      count(row.counts, r);
      if (r.failed) continue;
      all.push_back(r.extremism);
      if (is_consensus(r)) cons.push_back(r.extremism);
      if (is_disagreement(r)) pd.push_back(r.extremism);
    }
    if (!all.empty()) {
      row.q25 = percentile(all, 25.0);
      row.q50 = percentile(all, 50.0);
      row.q75 = percentile(all, 75.0);
    }
    const std::size_t converged = cons.size() + pd.size();
    if (converged > 0) {
      const double pc = static_cast<double>(cons.size()) / static_cast<double>(converged);
      row.consensus_probability = pc;
      double total = 0.0;
      for (const double v : cons) total += v;
      for (const double v : pd) total += v;
      row.mean_converged = total / static_cast<double>(converged);
      if (!cons.empty()) row.mean_consensus = mean(cons);
      if (!pd.empty()) row.mean_pd = mean(pd);
    }
    out.rows.push_back(row);
  }
  return out;
}

InfluenceGraph cycle_demo_graph() {
  std::vector<InfluenceEntry> entries;
  for (std::size_t i = 0; i < 4; ++i) entries.push_back({i, (i + 1) % 4, 1.0});
  return InfluenceGraph::from_entries(4, std::move(entries));
}

CycleDemoResult run_cycle_demo() {
  const InfluenceGraph graph = cycle_demo_graph();
  const PlatformParams platform = PlatformParams::uniform(4, 0.6, 0.1);
  const OpinionState x0{{-0.5, 1.0, 0.5, -1.0}, 0.0};
  CycleDemoResult out;
  out.trajectory = integrate(x0, graph, platform, 200.0, kDefaultStep);
  out.report = detect_equilibrium(out.trajectory, graph, platform);

  const auto& tr = out.trajectory;
  const auto at = [&](double t) {
    return static_cast<std::size_t>(std::lower_bound(tr.times.begin(), tr.times.end(), t - 1e-9) -
                                    tr.times.begin());
  };
  const auto& ref = tr.states[at(100.0)];
  out.recurrence = std::numeric_limits<double>::infinity();
  out.tail_min_residual = std::numeric_limits<double>::infinity();
  for (std::size_t k = at(150.0); k < tr.size(); ++k) {
    double dist = 0.0;
    for (std::size_t i = 0; i < 4; ++i) dist = std::max(dist, std::abs(tr.states[k][i] - ref[i]));
    out.recurrence = std::min(out.recurrence, dist);
    double res = 0.0;
    for (const double v : vector_field(tr.states[k], graph, platform)) res = std::max(res, std::abs(v));
    out.tail_min_residual = std::min(out.tail_min_residual, res);
    out.tail_max_residual = std::max(out.tail_max_residual, res);
  }
  out.symmetrized = simulate(x0, graph.symmetrized(), platform).report;
  return out;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& trials) {
  out << "trial,b,h,kind,polarization,extremism,final_time,error\n";
  for (const auto& r : trials) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    fmt::print(out, "{},{},{},{},{},{},{},{}\n", r.trial, r.b, r.h,
               r.failed ? std::string_view("Failed") : to_string(r.kind), r.polarization,
               r.extremism, r.final_time, err);
  }
}

void write_csv(std::ostream& out, const PolarizationResult& result) {
  out << "b,theory,consensus,disagreement,nonconvergent,failed,p05,p50,p95\n";
  for (const auto& r : result.rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", r.b, opt(r.theory), r.counts.consensus,
               r.counts.disagreement, r.counts.nonconvergent, r.counts.failed, opt(r.p05),
               opt(r.p50), opt(r.p95));
  }
}

void write_csv(std::ostream& out, const MonotonicityResult& result) {
  out << "b,h,t,mean,sd,trials\n";
  for (const auto& r : result.rows) {
    for (std::size_t j = 0; j < r.times.size(); ++j) {
      fmt::print(out, "{},{},{},{},{},{}\n", result.b, r.h, r.times[j], r.mean[j], r.sd[j], r.used);
    }
  }
}

void write_csv(std::ostream& out, const ConsensusResult& result) {
  out << "b,h,trials,consensus,disagreement,nonconvergent,failed,p,lo,hi\n";
  for (const auto& r : result.rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{}\n", result.b, r.h, r.n, r.counts.consensus,
               r.counts.disagreement, r.counts.nonconvergent, r.counts.failed, r.p, r.lo, r.hi);
  }
}

void write_csv(std::ostream& out, const ExtremismResult& result) {
  out << "b,consensus,disagreement,nonconvergent,failed,q25,q50,q75,consensus_probability,"
         "mean_consensus,mean_pd,mean_converged\n";
  for (const auto& r : result.rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{}\n", r.b, r.counts.consensus,
               r.counts.disagreement, r.counts.nonconvergent, r.counts.failed, opt(r.q25),
               opt(r.q50), opt(r.q75), opt(r.consensus_probability), opt(r.mean_consensus),
               opt(r.mean_pd), opt(r.mean_converged));
  }
}

void write_csv(std::ostream& out, const CycleDemoResult& result) {
  out << "t,x1,x2,x3,x4\n";
  const auto& tr = result.trajectory;
  for (std::size_t k = 0; k < tr.size(); k += 10) {
    const auto& x = tr.states[k];
    fmt::print(out, "{},{},{},{},{}\n", tr.times[k], x[0], x[1], x[2], x[3]);
  }
}

}  // namespace opdyn
