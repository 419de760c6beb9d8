#include "opdyn/config.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "opdyn/error.hpp"
#include "opdyn/graph_io.hpp"

namespace opdyn {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& j, std::string path, const std::string& source)
      : j_(j), path_(std::move(path)), source_(source) {
    if (!j_.is_object()) fail("expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, _] : j_.items()) {
      if (!ok.contains(k)) fail(fmt::format("unknown key '{}'", k));
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) const { return j_.at(key); }
  std::string where(const char* key) const { return path_ + "." + key; }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number()) fail(fmt::format("'{}' must be a number", key));
    return v.get<double>();
  }
  std::uint64_t unsigned_int(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_unsigned()) fail(fmt::format("'{}' must be a nonnegative integer", key));
    return v.get<std::uint64_t>();
  }
  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_string()) fail(fmt::format("'{}' must be a string", key));
    return v.get<std::string>();
  }
  std::vector<double> numbers(const char* key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_array()) fail(fmt::format("'{}' must be an array of numbers", key));
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(fmt::format("'{}' must be an array of numbers", key));
      out.push_back(e.get<double>());
    }
    return out;
  }
  Interval interval(const char* key, Interval fallback) const {
    if (!has(key)) return fallback;
    const auto v = numbers(key, {});
    if (v.size() != 2) fail(fmt::format("'{}' must be [lo, hi]", key));
    return {v[0], v[1]};
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_, 0, path_ + ": " + what);
  }

 private:
  const json& j_;
  std::string path_;
  const std::string& source_;
};

Normalization parse_normalization(const std::string& s, const Reader& r) {
  if (s == "row-normalized") return Normalization::RowNormalized;
  if (s == "unit-weight") return Normalization::UnitWeight;
  r.fail("normalization must be 'row-normalized' or 'unit-weight'");
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& j, const std::filesystem::path& base_dir,
                                             const std::string& source) {
  const Reader root(j, "$", source);
  root.allow({"network", "b_grid", "h_grid", "initial", "trials", "seed", "integrator", "series",
              "threads"});
  ExperimentConfig cfg;

  if (root.has("network")) {
    const Reader net(root.at("network"), root.where("network"), source);
    const std::string type = net.string("type", "sbm");
    const Normalization norm = parse_normalization(net.string("normalization", "row-normalized"), net);
    const double a = net.number("a", 1.0);
    if (type == "sbm") {
      net.allow({"type", "n", "p", "q", "normalization", "a"});
      SbmConfig s;
      s.n = net.unsigned_int("n", s.n);
      s.p = net.number("p", s.p);
      s.q = net.number("q", s.q);
      s.normalization = norm;
      s.a = a;
      cfg.sbm = s;
    } else if (type == "graph") {
      net.allow({"type", "edges", "labels", "normalization", "a"});
      if (!net.has("edges") || !net.has("labels")) net.fail("graph network needs 'edges' and 'labels'");
      const auto edges = base_dir / net.string("edges", "");
      const auto labels = base_dir / net.string("labels", "");
      cfg.sbm.reset();
      cfg.graph = std::make_shared<const InfluenceGraph>(load_labeled_graph(edges, labels, norm, a));
      cfg.graph_source = edges.string() + " " + labels.string();
    } else {
      net.fail("type must be 'sbm' or 'graph'");
    }
  }
  cfg.b_grid = root.numbers("b_grid", cfg.b_grid);
  cfg.h_grid = root.numbers("h_grid", cfg.h_grid);
  if (root.has("initial")) {
    const Reader init(root.at("initial"), root.where("initial"), source);
    init.allow({"left", "right"});
    cfg.left = init.interval("left", cfg.left);
    cfg.right = init.interval("right", cfg.right);
  }
  cfg.trials = root.unsigned_int("trials", cfg.trials);
  cfg.seed = root.unsigned_int("seed", cfg.seed);
  if (root.has("integrator")) {
    const Reader in(root.at("integrator"), root.where("integrator"), source);
    in.allow({"epsilon", "step", "horizon", "tol", "window"});
    auto& s = cfg.integrator;
    s.epsilon = in.number("epsilon", s.epsilon);
    s.step = in.number("step", s.step);
    s.horizon = in.number("horizon", s.horizon);
    s.tol = in.number("tol", s.tol);
    s.window = in.number("window", s.window);
  }
  if (root.has("series")) {
    const Reader se(root.at("series"), root.where("series"), source);
    se.allow({"horizon", "interval"});
    cfg.series_horizon = se.number("horizon", cfg.series_horizon);
    cfg.sample_interval = se.number("interval", cfg.sample_interval);
  }
  cfg.threads = static_cast<unsigned>(root.unsigned_int("threads", cfg.threads));
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return experiment_config_from_json(j, path.parent_path(), path.string());
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  if (cfg.graph) {
    j["network"] = {{"type", "graph"},
                    {"source", cfg.graph_source},
                    {"agents", cfg.graph->size()},
                    {"normalization", std::string(to_string(cfg.graph->normalization()))}};
  } else {
    const SbmConfig& s = *cfg.sbm;
    j["network"] = {{"type", "sbm"},
                    {"n", s.n},
                    {"p", s.p},
                    {"q", s.q},
                    {"normalization", std::string(to_string(s.normalization))},
                    {"a", s.a}};
  }
  j["b_grid"] = cfg.b_grid;
  j["h_grid"] = cfg.h_grid;
  j["initial"] = {{"left", {cfg.left.lo, cfg.left.hi}}, {"right", {cfg.right.lo, cfg.right.hi}}};
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  const auto& s = cfg.integrator;
  j["integrator"] = {{"epsilon", s.epsilon},
                     {"step", s.step},
                     {"horizon", s.horizon},
                     {"tol", s.tol},
                     {"window", s.window}};
  j["series"] = {{"horizon", cfg.series_horizon}, {"interval", cfg.sample_interval}};
  return j;
}

std::string config_digest(const json& j) {
  const std::string canonical = j.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

}  // namespace opdyn
