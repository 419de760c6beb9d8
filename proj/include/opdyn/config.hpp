#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "opdyn/experiments.hpp"

namespace opdyn {

// JSON experiment configuration. Every key is optional; unknown keys are
// rejected. Schema (defaults shown):
//
//   {
//     "network": {"type": "sbm", "n": 32, "p": 0.25, "q": 0.125,
//                 "normalization": "row-normalized", "a": 1.0}
//              | {"type": "graph", "edges": PATH, "labels": PATH,
//                 "normalization": "row-normalized", "a": 1.0},
//     "b_grid": [0.25, 0.5, 1, 2, 4, 8, 16, 32],
//     "h_grid": [],
//     "initial": {"left": [-2, 0], "right": [0, 2]},
//     "trials": 1000,
//     "seed": 0,
//     "integrator": {"epsilon": 1e-3, "step": 0.01, "horizon": 500,
//                    "tol": 1e-6, "window": 1.0},
//     "series": {"horizon": 20, "interval": 0.1},
//     "threads": 0
//   }
//
// Graph paths are resolved against `base_dir`. Throws ParseError on schema
// violations and InvalidArgument on out-of-range values.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::filesystem::path& base_dir = {},
                                             const std::string& source = "config");
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Resolved configuration in the same schema (fixed graphs appear by source).
nlohmann::json to_json(const ExperimentConfig& cfg);

// Hex SHA-256 of the canonical serialization (keys sorted), so the digest does
// not depend on key order in the input file.
std::string config_digest(const nlohmann::json& j);

}  // namespace opdyn
