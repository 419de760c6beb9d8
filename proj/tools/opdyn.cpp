// opdyn: command-line front end for the opinion-dynamics toolkit.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure,
// 4 more than 1% of trials failed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "opdyn/config.hpp"
#include "opdyn/error.hpp"
#include "opdyn/experiments.hpp"
#include "opdyn/graph_io.hpp"
#include "opdyn/metrics.hpp"
#include "opdyn/network.hpp"
#include "opdyn/run_output.hpp"
#include "opdyn/two_agent.hpp"

namespace {

using nlohmann::json;
using namespace opdyn;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitTrials = 4;

struct Global {
  std::string output_dir;
  std::string log_level = "warn";
  unsigned threads = 0;

  std::filesystem::path dir() const {
    return output_dir.empty() ? default_output_dir() : std::filesystem::path(output_dir);
  }
};

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

json pair_json(const Pair& p) { return json::array({p[0], p[1]}); }

json to_json(const ClassificationResult& r, const TwoAgentSystem& sys) {
  const auto& c = r.conditions;
  return {{"a", sys.a},
          {"b", sys.b},
          {"x0", pair_json(sys.x0)},
          {"kind", std::string(to_string(r.kind))},
          {"predicted_equilibrium",
           r.predicted_equilibrium ? pair_json(*r.predicted_equilibrium) : json()},
          {"sign_source", std::string(to_string(r.sign_source))},
          {"conditions",
           {{"lhs", c.lhs},
            {"c1_rhs", c.c1_rhs},
            {"c2_rhs", c.c2_rhs},
            {"c1", c.c1},
            {"c2", c.c2},
            {"c1_tight", c.c1_tight},
            {"c2_tight", c.c2_tight}}}};
}

json to_json(const BandCrossing& bc) {
  return {{"lambda_plus", bc.lambda_plus},
          {"lambda_minus", bc.lambda_minus},
          {"v_plus", pair_json(bc.v_plus)},
          {"v_minus", pair_json(bc.v_minus)},
          {"v0", pair_json(bc.v0)},
          {"c_plus", bc.c_plus},
          {"c_minus", bc.c_minus},
          {"c_plus_positive", bc.c_plus_positive},
          {"c_minus_positive", bc.c_minus_positive},
          {"crossing_guaranteed", bc.crossing_guaranteed()}};
}

json to_json(const ConcentrationCheck& c) {
  return {{"delta", c.delta},
          {"in_set", c.in_set},
          {"worst_same_deviation", c.worst_same_deviation},
          {"worst_cross_deviation", c.worst_cross_deviation}};
}

json to_json(const EquilibriumReport& r) {
  json j = {{"kind", std::string(to_string(r.kind))},
            {"residual", r.residual},
            {"movement", r.movement},
            {"absorbed", r.absorbed}};
  if (r.limit) j["limit"] = r.limit->opinions;
  if (r.polarization) j["polarization"] = *r.polarization;
  if (r.settle_time) j["settle_time"] = *r.settle_time;
  return j;
}

Normalization parse_norm(const std::string& s) {
  return s == "unit-weight" ? Normalization::UnitWeight : Normalization::RowNormalized;
}

// --- two-agent ---------------------------------------------------------------

struct TwoAgentArgs {
  double a = 1.0, b = 1.0, x1 = 0.0, x2 = 0.0, epsilon = kDefaultEpsilon;
  double horizon = 50.0, step = kDefaultStep;
  bool resolve = false;
  double ratio = 0.0, min = -3.0, max = 3.0;
  std::size_t res = 101;
  double x2_0 = 0.0;
};

void add_two_agent(CLI::App& app, Global& g, TwoAgentArgs& ta, int& code) {
  auto* cmd = app.add_subcommand("two-agent", "Exact analysis of the two-agent system");
  cmd->require_subcommand(1);
  auto system_opts = [&](CLI::App* sub) {
    sub->add_option("--a", ta.a, "Mutual influence a > 0")->capture_default_str();
    sub->add_option("--b", ta.b, "Platform strength b > 0")->capture_default_str();
    sub->add_option("--x1", ta.x1, "Initial opinion of agent 1")->required();
    sub->add_option("--x2", ta.x2, "Initial opinion of agent 2")->required();
    sub->add_option("--epsilon", ta.epsilon, "Band half-width")->capture_default_str();
  };

  auto* classify_cmd = cmd->add_subcommand("classify", "Classify x0 as PD or CO; prints JSON");
  system_opts(classify_cmd);
  classify_cmd->add_flag("--resolve-sign", ta.resolve,
                         "Confirm the consensus sign by simulating the dynamics");
  classify_cmd->callback([&] {
    const TwoAgentSystem sys{ta.a, ta.b, {ta.x1, ta.x2}, ta.epsilon};
    auto r = classify(sys);
    if (ta.resolve) resolve_sign_by_simulation(sys, r);
    print_json(to_json(r, sys));
  });

  auto* sim = cmd->add_subcommand("simulate", "Integrate the two-agent dynamics; writes CSV");
  system_opts(sim);
  sim->add_option("--horizon", ta.horizon, "Final time")->capture_default_str();
  sim->add_option("--step", ta.step, "RK4 step")->capture_default_str();
  sim->callback([&] {
    const TwoAgentSystem sys{ta.a, ta.b, {ta.x1, ta.x2}, ta.epsilon};
    const auto tr = simulate_two_agent(sys, ta.horizon, ta.step);
    RunOutput run("two-agent simulate", "two-agent-simulate", g.dir());
    const auto path = run.file(".csv");
    {
      auto out = open_out(path);
      out << "t,x1,x2,polarization\n";
      for (std::size_t k = 0; k < tr.size(); ++k) {
        const auto& x = tr.states[k];
        fmt::print(out, "{},{},{},{}\n", tr.times[k], x[0], x[1], x[1] - x[0]);
      }
    }
    run.set_config({{"a", ta.a}, {"b", ta.b}, {"x0", {ta.x1, ta.x2}}, {"epsilon", ta.epsilon},
                    {"horizon", ta.horizon}, {"step", ta.step}});
    const auto report = detect_equilibrium(tr, sys.graph(), sys.platform());
    run.notes()["equilibrium"] = to_json(report);
    run.finish();
    const auto& last = tr.final_opinions();
    fmt::print("{}\nfinal t={} x=({}, {}) {}\n", path.string(), tr.final_time(), last[0], last[1],
               to_string(report.kind));
  });

  auto* region = cmd->add_subcommand("region", "Classify a square grid of x0; writes CSV");
  region->add_option("--ratio", ta.ratio, "b/a (sets a = 1, b = ratio)");
  region->add_option("--a", ta.a, "Mutual influence a > 0")->capture_default_str();
  region->add_option("--b", ta.b, "Platform strength b > 0")->capture_default_str();
  region->add_option("--min", ta.min, "Grid minimum")->capture_default_str();
  region->add_option("--max", ta.max, "Grid maximum")->capture_default_str();
  region->add_option("--res", ta.res, "Points per axis (>= 2)")->capture_default_str();
  region->callback([&] {
    if (ta.ratio > 0.0) {
      ta.a = 1.0;
      ta.b = ta.ratio;
    }
    const auto grid = region_grid(ta.a, ta.b, ta.min, ta.max, ta.res);
    RunOutput run("two-agent region", "two-agent-region", g.dir());
    const auto path = run.file(".csv");
    {
      auto out = open_out(path);
      write_region_csv(out, grid);
    }
    run.set_config({{"a", ta.a}, {"b", ta.b}, {"min", ta.min}, {"max", ta.max}, {"res", ta.res}});
    run.finish();
    fmt::print("{}\n", path.string());
  });

  auto* band = cmd->add_subcommand("band", "Band-crossing eigen-analysis (a = 1); prints JSON");
  band->add_option("--b", ta.b, "Platform strength b > 0")->capture_default_str();
  band->add_option("--epsilon", ta.epsilon, "Band half-width")->capture_default_str();
  band->add_option("--x2", ta.x2_0, "Initial opinion x2(0) >= b")->required();
  band->callback([&] { print_json(to_json(band_crossing(ta.b, ta.epsilon, ta.x2_0))); });
  (void)code;
}

// --- sbm ---------------------------------------------------------------------

struct SbmArgs {
  SbmConfig cfg;
  std::string normalization = "row-normalized";
  double b = 1.0, h = 2.0, epsilon = kDefaultEpsilon, delta = 0.3;
  double horizon = kDefaultHorizon, sample = 0.1;
  std::string edges, labels;
};

void add_sbm(CLI::App& app, Global& g, SbmArgs& sa) {
  auto* cmd = app.add_subcommand("sbm", "Two-block stochastic block model");
  cmd->require_subcommand(1);
  auto model_opts = [&](CLI::App* sub) {
    sub->add_option("--n", sa.cfg.n, "Agents per block")->capture_default_str();
    sub->add_option("--p", sa.cfg.p, "Same-block edge probability")->capture_default_str();
    sub->add_option("--q", sa.cfg.q, "Cross-block edge probability")->capture_default_str();
    sub->add_option("--a", sa.cfg.a, "Influence budget / edge weight")->capture_default_str();
    sub->add_option("--normalization", sa.normalization, "row-normalized or unit-weight")
        ->check(CLI::IsMember({"row-normalized", "unit-weight"}))
        ->capture_default_str();
    sub->add_option("--seed", sa.cfg.seed, "Random seed")->capture_default_str();
  };

  auto* gen = cmd->add_subcommand("generate", "Sample a graph; writes edge list and labels");
  model_opts(gen);
  gen->callback([&] {
    sa.cfg.normalization = parse_norm(sa.normalization);
    const auto graph = generate_sbm(sa.cfg);
    RunOutput run("sbm generate", "sbm", g.dir());
    const auto edges = run.file(".edges");
    const auto labels = run.file(".labels");
    {
      auto e = open_out(edges);
      write_edge_list(e, graph);
      auto l = open_out(labels);
      write_labels(l, graph);
    }
    run.set_config({{"n", sa.cfg.n}, {"p", sa.cfg.p}, {"q", sa.cfg.q}, {"a", sa.cfg.a},
                    {"normalization", sa.normalization}});
    run.set_seed(sa.cfg.seed);
    run.finish();
    fmt::print("{}\n{}\n", edges.string(), labels.string());
  });

  auto* sim = cmd->add_subcommand("simulate", "Simulate one trajectory; writes metrics CSV");
  model_opts(sim);
  sim->add_option("--b", sa.b, "Platform strength")->capture_default_str();
  sim->add_option("--initial-h", sa.h, "Initial opinions L ~ U[-h,0], R ~ U[0,h]")->capture_default_str();
  sim->add_option("--epsilon", sa.epsilon, "Band half-width")->capture_default_str();
  sim->add_option("--horizon", sa.horizon, "Maximum time")->capture_default_str();
  sim->add_option("--sample-interval", sa.sample, "Metric sampling interval")->capture_default_str();
  sim->callback([&] {
    sa.cfg.normalization = parse_norm(sa.normalization);
    ExperimentConfig ec;
    ec.sbm = sa.cfg;
    ec.seed = sa.cfg.seed;
    Rng rng = Rng::stream(ec.seed, 0);
    const auto graph = generate_sbm(sa.cfg, rng);
    const auto x0 = draw_opinions(ec, graph, rng, sa.h);
    SimulationSettings st;
    st.horizon = sa.horizon;
    st.sample_interval = sa.sample;
    const auto result =
        simulate({x0, 0.0}, graph, PlatformParams::uniform(graph.size(), sa.b, sa.epsilon), st);
    RunOutput run("sbm simulate", "sbm-simulate", g.dir());
    const auto path = run.file(".csv");
    {
      auto out = open_out(path);
      out << "t,polarization,extremism\n";
      for (std::size_t k = 0; k < result.samples.size(); ++k) {
        fmt::print(out, "{},{},{}\n", result.sample_times[k],
                   *block_polarization(result.samples[k], graph.labels()),
                   extremism(result.samples[k]));
      }
      const auto& xf = result.final_state.opinions;
      if (result.sample_times.empty() || result.sample_times.back() != result.final_state.time) {
        fmt::print(out, "{},{},{}\n", result.final_state.time,
                   *block_polarization(xf, graph.labels()), extremism(xf));
      }
    }
    run.set_config({{"n", sa.cfg.n}, {"p", sa.cfg.p}, {"q", sa.cfg.q}, {"a", sa.cfg.a},
                    {"normalization", sa.normalization}, {"b", sa.b}, {"h", sa.h},
                    {"epsilon", sa.epsilon}, {"horizon", sa.horizon}});
    run.set_seed(sa.cfg.seed);
    run.notes()["equilibrium"] = to_json(result.report);
    run.finish();
    fmt::print("{}\n{}\n", path.string(), to_string(result.report.kind));
  });

  auto* check = cmd->add_subcommand("check", "Degree-concentration test; prints JSON");
  model_opts(check);
  check->add_option("--delta", sa.delta, "Relative band half-width in (0,1)")->capture_default_str();
  check->add_option("--edges", sa.edges, "Check this edge list instead of sampling");
  check->add_option("--labels", sa.labels, "Labels for --edges");
  check->callback([&] {
    sa.cfg.normalization = parse_norm(sa.normalization);
    const InfluenceGraph graph =
        sa.edges.empty() ? generate_sbm(sa.cfg)
                         : load_labeled_graph(sa.edges, sa.labels, sa.cfg.normalization, sa.cfg.a);
    print_json(to_json(concentration_check(graph, sa.cfg, sa.delta)));
  });
}

// --- experiments -------------------------------------------------------------

struct ExperimentArgs {
  std::string name;
  std::string config;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::vector<double> b_grid, h_grid;
  std::string edges, labels, normalization = "row-normalized";
  double a = 1.0;
};

void apply_overrides(ExperimentConfig& cfg, const ExperimentArgs& ea, const Global& g) {
  if (ea.trials) cfg.trials = *ea.trials;
  if (ea.seed) cfg.seed = *ea.seed;
  if (!ea.b_grid.empty()) cfg.b_grid = ea.b_grid;
  if (!ea.h_grid.empty()) cfg.h_grid = ea.h_grid;
  if (g.threads > 0) cfg.threads = g.threads;
  cfg.validate();
}

ExperimentConfig defaults_for(const std::string& name) {
  ExperimentConfig cfg;
  if (name == "monotonicity") {
    cfg.b_grid = {1.0};
    cfg.h_grid = {0.5, 1.0, 2.0, 3.0};
    cfg.trials = 1000;
  } else if (name == "consensus-prob") {
    cfg.b_grid = {0.05};
    for (int k = 1; k <= 30; ++k) cfg.h_grid.push_back(k / 10.0);
    cfg.trials = 10000;
  } else if (name == "extremism") {
    cfg.b_grid = kExtremismBGrid;
    cfg.trials = 100;
  }
  return cfg;
}

std::size_t failed_of(const std::vector<TrialRecord>& trials) {
  std::size_t n = 0;
  for (const auto& t : trials) n += t.failed ? 1 : 0;
  return n;
}

int finish_trials(RunOutput& run, std::size_t total, std::size_t failed) {
  run.notes()["trials_total"] = total;
  run.notes()["trials_failed"] = failed;
  run.finish();
  return static_cast<double>(failed) > 0.01 * static_cast<double>(total) ? kExitTrials : kExitOk;
}

int run_named(const std::string& name, const std::string& command, const ExperimentConfig& cfg,
              const Global& g) {
  RunOutput run(command, name, g.dir());
  run.set_config(to_json(cfg));
  run.set_seed(cfg.seed);
  const auto summary = run.file(".csv");
  int code = kExitOk;
  auto write_summary = [&](const auto& result) {
    auto out = open_out(summary);
    write_csv(out, result);
  };
  auto write_trials = [&](const std::vector<TrialRecord>& trials) {
    auto out = open_out(run.file("_trials.csv"));
    write_trials_csv(out, trials);
  };
  if (name == "polarization") {
    const auto r = run_polarization_experiment(cfg);
    write_summary(r);
    write_trials(r.trials);
    code = finish_trials(run, r.trials.size(), failed_of(r.trials));
  } else if (name == "monotonicity") {
    const auto r = run_trajectory_monotonicity(cfg);
    write_summary(r);
    std::size_t used = 0;
    for (const auto& row : r.rows) used += row.used;
    const std::size_t total = cfg.trials * cfg.h_grid.size();
    code = finish_trials(run, total, total - used);
  } else if (name == "consensus-prob") {
    const auto r = run_consensus_probability(cfg);
    write_summary(r);
    write_trials(r.trials);
    code = finish_trials(run, r.trials.size(), failed_of(r.trials));
  } else if (name == "extremism") {
    const auto r = run_extremism_experiment(cfg);
    write_summary(r);
    write_trials(r.trials);
    code = finish_trials(run, r.trials.size(), failed_of(r.trials));
  } else {
    throw InvalidArgument("unknown experiment " + name);
  }
  fmt::print("{}\n", summary.string());
  return code;
}

int run_cycle(const Global& g) {
  const auto r = run_cycle_demo();
  RunOutput run("experiment cycle-demo", "cycle-demo", g.dir());
  run.set_config({{"graph", "directed 4-cycle"}, {"a", 1.0}, {"b", 0.6}, {"epsilon", 0.1},
                  {"x0", {-0.5, 1.0, 0.5, -1.0}}, {"horizon", 200.0}});
  {
    auto out = open_out(run.file(".csv"));
    write_csv(out, r);
  }
  run.notes()["equilibrium"] = to_json(r.report);
  run.notes()["recurrence"] = r.recurrence;
  run.notes()["tail_min_residual"] = r.tail_min_residual;
  run.notes()["tail_max_residual"] = r.tail_max_residual;
  run.notes()["symmetrized"] = to_json(r.symmetrized);
  const auto manifest = run.finish();
  fmt::print("{}\n{} (recurrence {}, tail residual >= {}); symmetrized: {}\n", manifest.string(),
             to_string(r.report.kind), r.recurrence, r.tail_min_residual,
             to_string(r.symmetrized.kind));
  return kExitOk;
}

void add_experiment_overrides(CLI::App* sub, ExperimentArgs& ea) {
  sub->add_option("--trials", ea.trials, "Override the number of trials");
  sub->add_option("--seed", ea.seed, "Override the root seed");
  sub->add_option("--b-grid", ea.b_grid, "Override the b grid")->delimiter(',');
  sub->add_option("--h-grid", ea.h_grid, "Override the h grid")->delimiter(',');
}

void add_experiment(CLI::App& app, Global& g, ExperimentArgs& ea, int& code) {
  auto* cmd = app.add_subcommand("experiment", "Run a Monte Carlo experiment; writes CSV + manifest");
  cmd->add_option("name", ea.name, "polarization | monotonicity | consensus-prob | extremism | cycle-demo")
      ->required()
      ->check(CLI::IsMember({"polarization", "monotonicity", "consensus-prob", "extremism",
                             "cycle-demo"}));
  cmd->add_option("--config", ea.config, "JSON config file (see README for the schema)");
  add_experiment_overrides(cmd, ea);
  cmd->callback([&] {
    if (ea.name == "cycle-demo") {
      code = run_cycle(g);
      return;
    }
    ExperimentConfig cfg = ea.config.empty() ? defaults_for(ea.name)
                                             : load_experiment_config(ea.config);
    apply_overrides(cfg, ea, g);
    code = run_named(ea.name, "experiment " + ea.name, cfg, g);
  });
}

void add_graph(CLI::App& app, Global& g, ExperimentArgs& ea, int& code) {
  auto* cmd = app.add_subcommand("graph", "Experiments on a fixed labelled graph");
  cmd->require_subcommand(1);
  auto* sim = cmd->add_subcommand("simulate", "Trials with redrawn initial opinions");
  sim->add_option("--edges", ea.edges, "Edge list file")->required();
  sim->add_option("--labels", ea.labels, "Label file")->required();
  sim->add_option("--normalization", ea.normalization, "row-normalized or unit-weight")
      ->check(CLI::IsMember({"row-normalized", "unit-weight"}))
      ->capture_default_str();
  sim->add_option("--a", ea.a, "Influence budget / edge weight")->capture_default_str();
  sim->add_option("--experiment", ea.name, "polarization | monotonicity | consensus-prob | extremism")
      ->check(CLI::IsMember({"polarization", "monotonicity", "consensus-prob", "extremism"}))
      ->default_val("extremism");
  sim->add_option("--config", ea.config, "JSON config (its network section is ignored)");
  add_experiment_overrides(sim, ea);
  sim->callback([&] {
    ExperimentConfig cfg = ea.config.empty() ? defaults_for(ea.name)
                                             : load_experiment_config(ea.config);
    cfg.sbm.reset();
    cfg.graph = std::make_shared<const InfluenceGraph>(
        load_labeled_graph(ea.edges, ea.labels, parse_norm(ea.normalization), ea.a));
    cfg.graph_source = ea.edges + " " + ea.labels;
    apply_overrides(cfg, ea, g);
    code = run_named(ea.name, "graph simulate --experiment " + ea.name, cfg, g);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Platform-influenced opinion dynamics: simulation and analysis"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--output-dir", g.output_dir,
                 fmt::format("Directory for output files (default ${} or .)", kOutputDirEnv));
  app.add_option("--log-level", g.log_level, "trace | debug | info | warn | error | off")
      ->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for trials (0 = all cores)");

  int code = kExitOk;
  TwoAgentArgs ta;
  SbmArgs sa;
  ExperimentArgs ea;
  add_two_agent(app, g, ta, code);
  add_sbm(app, g, sa);
  add_experiment(app, g, ea, code);
  add_graph(app, g, ea, code);
  app.parse_complete_callback([&] { spdlog::set_level(spdlog::level::from_str(g.log_level)); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return code;
}
