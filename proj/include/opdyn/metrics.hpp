#pragma once

#include <optional>
#include <span>

#include "opdyn/graph.hpp"

namespace opdyn {

// Mean opinion of the R block minus mean opinion of the L block. Empty when
// either block has no agents.
std::optional<double> block_polarization(std::span<const double> x, std::span<const Block> labels);

// Mean absolute opinion over all agents.
double extremism(std::span<const double> x);

}  // namespace opdyn
