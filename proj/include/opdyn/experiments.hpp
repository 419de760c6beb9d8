#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "opdyn/equilibrium.hpp"
#include "opdyn/network.hpp"
#include "opdyn/simulation.hpp"

namespace opdyn {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct IntegratorSettings {
  double epsilon = kDefaultEpsilon;
  double step = kDefaultStep;
  double horizon = kDefaultHorizon;
  double tol = kDefaultTolerance;
  double window = kDefaultWindow;
};

// Monte Carlo sweep. Trial k of every grid value uses random stream k of
// `seed`: a fresh SBM graph (unless a fixed graph is given) and then one
// uniform draw per agent, so grid values share their random numbers.
struct ExperimentConfig {
  std::optional<SbmConfig> sbm = SbmConfig{};
  std::shared_ptr<const InfluenceGraph> graph;  // fixed-graph mode when set
  std::string graph_source;                     // provenance of the fixed graph

  std::vector<double> b_grid{0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  // When non-empty, opinions are drawn from L: U[-h, 0], R: U[0, h] for each h.
  std::vector<double> h_grid;
  Interval left{-2.0, 0.0};
  Interval right{0.0, 2.0};

  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  IntegratorSettings integrator;
  double series_horizon = 20.0;   // time-series experiments only
  double sample_interval = 0.1;
  unsigned threads = 0;           // 0 = hardware concurrency

  void validate() const;
};

// Outcome of one (graph, x0) draw. "Final" is the certified limit when the
// run converged, the state at the horizon otherwise.
struct TrialRecord {
  std::size_t trial = 0;
  double b = 0.0;
  double h = 0.0;  // 0 when drawing from the fixed intervals
  EquilibriumKind kind = EquilibriumKind::Undetermined;
  bool failed = false;  // NumericalFailure; error holds the message
  std::string error;
  double polarization = 0.0;
  double extremism = 0.0;
  double final_time = 0.0;
};

// Initial opinions of trial `trial` for interval scale h (h <= 0: use the
// config intervals), drawn after the graph from the same stream.
std::vector<double> draw_opinions(const ExperimentConfig& cfg, const InfluenceGraph& graph,
                                  Rng& rng, double h);
TrialRecord run_trial(const ExperimentConfig& cfg, double b, double h, std::size_t trial);

// Final polarization predicted by the two-agent reduction, when the network
// is an SBM: 2b/(2 a beta + b) (row-normalized) or 2b/(b + 2 a n q) (unit weight).
std::optional<double> theoretical_polarization(const ExperimentConfig& cfg, double b);

struct OutcomeCounts {
  std::size_t consensus = 0;
  std::size_t disagreement = 0;
  std::size_t nonconvergent = 0;
  std::size_t failed = 0;
};

struct PolarizationRow {
  double b = 0.0;
  std::optional<double> theory;
  OutcomeCounts counts;
  std::optional<double> p05, p50, p95;  // over PD trials; empty when there are none
};
struct PolarizationResult {
  std::vector<PolarizationRow> rows;
  std::vector<TrialRecord> trials;
};
PolarizationResult run_polarization_experiment(const ExperimentConfig& cfg);

struct SeriesRow {
  double h = 0.0;
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> sd;
  std::size_t used = 0;  // trials without numerical failure
};
struct MonotonicityResult {
  double b = 0.0;
  std::optional<double> theory;
  std::vector<SeriesRow> rows;
};
// Uses b_grid[0] and every h in h_grid; integrates each trial to
// series_horizon and samples the block polarization every sample_interval.
MonotonicityResult run_trajectory_monotonicity(const ExperimentConfig& cfg);

struct ConsensusRow {
  double h = 0.0;
  OutcomeCounts counts;
  std::size_t n = 0;  // trials without numerical failure
  double p = 0.0, lo = 0.0, hi = 0.0;
};
struct ConsensusResult {
  double b = 0.0;
  std::vector<ConsensusRow> rows;
  std::vector<TrialRecord> trials;
};
// Uses b_grid[0] and every h in h_grid.
ConsensusResult run_consensus_probability(const ExperimentConfig& cfg);

// Quartiles cover every trial without numerical failure (horizon state for
// non-converged ones). The decomposition is over converged trials only:
// mean_converged = P(consensus) mean_consensus + P(PD) mean_pd.
struct ExtremismRow {
  double b = 0.0;
  OutcomeCounts counts;
  std::optional<double> q25, q50, q75;
  std::optional<double> consensus_probability;
  std::optional<double> mean_consensus, mean_pd, mean_converged;
};
struct ExtremismResult {
  std::vector<ExtremismRow> rows;
  std::vector<TrialRecord> trials;
};
ExtremismResult run_extremism_experiment(const ExperimentConfig& cfg);

inline const std::vector<double> kExtremismBGrid{0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0};

// Directed 4-cycle a_{i,i+1} = a_{4,1} = 1, b = 0.6, epsilon = 0.1,
// x0 = (-1/2, 1, 1/2, -1), integrated to t = 200.
struct CycleDemoResult {
  Trajectory trajectory;
  EquilibriumReport report;
  double recurrence = 0.0;          // min_{t in [150, 200]} |x(t) - x(100)|_inf
  double tail_min_residual = 0.0;   // min_{t in [150, 200]} |f(x(t))|_inf
  double tail_max_residual = 0.0;
  EquilibriumReport symmetrized;    // same start on (A + A^T)/2
};
InfluenceGraph cycle_demo_graph();
CycleDemoResult run_cycle_demo();

// CSV writers (full round-trip number formatting).
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& trials);
void write_csv(std::ostream& out, const PolarizationResult& result);
void write_csv(std::ostream& out, const MonotonicityResult& result);
void write_csv(std::ostream& out, const ConsensusResult& result);
void write_csv(std::ostream& out, const ExtremismResult& result);
void write_csv(std::ostream& out, const CycleDemoResult& result);

}  // namespace opdyn
