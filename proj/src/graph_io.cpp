#include "opdyn/graph_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "opdyn/error.hpp"

namespace opdyn {

namespace {

// Splits a line into whitespace-separated tokens after stripping comments.
std::vector<std::string_view> tokens(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_id(std::string_view tok, const std::string& source, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(source, line, "expected a nonnegative integer node id, got '" +
                                       std::string(tok) + "'");
  }
  return v;
}

}  // namespace

InfluenceGraph load_labeled_graph(std::istream& edges, std::istream& labels,
                                  Normalization normalization, double a,
                                  const std::string& edges_name, const std::string& labels_name) {
  std::unordered_map<std::uint64_t, std::size_t> index;
  std::vector<Block> blocks;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(labels, line)) {
    ++lineno;
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw ParseError(labels_name, lineno, "expected 'node_id L|R'");
    const std::uint64_t id = parse_id(tok[0], labels_name, lineno);
    Block blk;
    if (tok[1] == "L") {
      blk = Block::Left;
    } else if (tok[1] == "R") {
      blk = Block::Right;
    } else {
      throw ParseError(labels_name, lineno, "unknown label '" + std::string(tok[1]) + "'");
    }
    if (!index.emplace(id, blocks.size()).second) {
      throw ParseError(labels_name, lineno, "node " + std::to_string(id) + " labelled twice");
    }
    blocks.push_back(blk);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  lineno = 0;
  while (std::getline(edges, line)) {
    ++lineno;
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw ParseError(edges_name, lineno, "expected 'u v'");
    const std::uint64_t u = parse_id(tok[0], edges_name, lineno);
    const std::uint64_t v = parse_id(tok[1], edges_name, lineno);
    if (u == v) throw ParseError(edges_name, lineno, "self loop on node " + std::to_string(u));
    const auto iu = index.find(u);
    const auto iv = index.find(v);
    if (iu == index.end() || iv == index.end()) {
      throw ParseError(edges_name, lineno,
                       "node " + std::to_string(iu == index.end() ? u : v) + " has no label");
    }
    pairs.emplace_back(iu->second, iv->second);
  }
  const std::size_t n = blocks.size();
  return InfluenceGraph::from_undirected(n, std::move(pairs), std::move(blocks), normalization, a);
}

InfluenceGraph load_labeled_graph(const std::filesystem::path& edges,
                                  const std::filesystem::path& labels,
                                  Normalization normalization, double a) {
  std::ifstream ein(edges);
  if (!ein) throw ParseError(edges.string(), 0, "cannot open file");
  std::ifstream lin(labels);
  if (!lin) throw ParseError(labels.string(), 0, "cannot open file");
  return load_labeled_graph(ein, lin, normalization, a, edges.string(), labels.string());
}

void write_edge_list(std::ostream& out, const InfluenceGraph& graph) {
  for (const auto& [i, j] : graph.undirected_edges()) out << i << ' ' << j << '\n';
}

void write_labels(std::ostream& out, const InfluenceGraph& graph) {
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (graph.label(i) == Block::Unlabeled) {
      throw InvalidArgument("write_labels: agent " + std::to_string(i) + " is unlabeled");
    }
    out << i << ' ' << to_string(graph.label(i)) << '\n';
  }
}

}  // namespace opdyn
