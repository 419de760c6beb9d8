#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "opdyn/graph.hpp"

namespace opdyn {

// Plain-text graph formats.
//
// Edge list: one "u v" pair of nonnegative integer node ids per line. Blank
// lines and anything after '#' are ignored. Duplicate edges (in either
// orientation) collapse to one; self loops are rejected.
//
// Labels: one "node_id L" or "node_id R" per line, same comment rules. The
// labels file defines the node set; node i of the resulting graph is the i-th
// labelled id in file order. Nodes without edges are kept.
//
// Malformed input raises ParseError carrying the source name and line.
InfluenceGraph load_labeled_graph(std::istream& edges, std::istream& labels,
                                  Normalization normalization, double a,
                                  const std::string& edges_name = "edges",
                                  const std::string& labels_name = "labels");
InfluenceGraph load_labeled_graph(const std::filesystem::path& edges,
                                  const std::filesystem::path& labels,
                                  Normalization normalization, double a);

// Writes the graph with node ids 0..n-1 in the formats above.
void write_edge_list(std::ostream& out, const InfluenceGraph& graph);
void write_labels(std::ostream& out, const InfluenceGraph& graph);

}  // namespace opdyn
