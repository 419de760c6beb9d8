#include "opdyn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "opdyn/error.hpp"

namespace opdyn {

std::string_view to_string(Normalization n) {
  switch (n) {
    case Normalization::RowNormalized:
      return "row-normalized";
    case Normalization::UnitWeight:
      return "unit-weight";
    case Normalization::Explicit:
      return "explicit";
  }
  return "?";
}

std::string_view to_string(Block b) {
  switch (b) {
    case Block::Left:
      return "L";
    case Block::Right:
      return "R";
    case Block::Unlabeled:
      return "-";
  }
  return "?";
}

InfluenceGraph InfluenceGraph::from_entries(std::size_t agents, std::vector<InfluenceEntry> entries,
                                            std::vector<Block> labels,
                                            Normalization normalization) {
  if (labels.empty()) labels.assign(agents, Block::Unlabeled);
  if (labels.size() != agents) {
    throw InvalidArgument("label count " + std::to_string(labels.size()) + " != agent count " +
                          std::to_string(agents));
  }
  for (const auto& e : entries) {
    if (e.row >= agents || e.col >= agents) throw InvalidArgument("influence entry out of range");
    if (e.row == e.col) {
      throw InvalidArgument("self-influence a_ii is not allowed (agent " + std::to_string(e.row) +
                            ")");
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw InvalidArgument("influence weights must be finite and nonnegative");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const InfluenceEntry& l, const InfluenceEntry& r) {
    return l.row != r.row ? l.row < r.row : l.col < r.col;
  });

  InfluenceGraph g;
  g.labels_ = std::move(labels);
  g.normalization_ = normalization;
  g.row_ptr_.assign(agents + 1, 0);
  g.row_sums_.assign(agents, 0.0);
  for (std::size_t k = 0; k < entries.size();) {
    const auto [row, col, w0] = entries[k];
    double w = w0;
    std::size_t next = k + 1;
    while (next < entries.size() && entries[next].row == row && entries[next].col == col) {
      w += entries[next].weight;
      ++next;
    }
    if (w > 0.0) {
      g.cols_.push_back(col);
      g.weights_.push_back(w);
      g.row_ptr_[row + 1]++;
      g.row_sums_[row] += w;
    }
    k = next;
  }
  for (std::size_t i = 0; i < agents; ++i) g.row_ptr_[i + 1] += g.row_ptr_[i];
  return g;
}

InfluenceGraph InfluenceGraph::from_dense(std::size_t agents, std::span<const double> weights,
                                          std::vector<Block> labels) {
  if (weights.size() != agents * agents) throw InvalidArgument("dense matrix size mismatch");
  std::vector<InfluenceEntry> entries;
  for (std::size_t i = 0; i < agents; ++i) {
    for (std::size_t j = 0; j < agents; ++j) {
      const double w = weights[i * agents + j];
      if (i == j) {
        if (w != 0.0) throw InvalidArgument("influence matrix must have a zero diagonal");
        continue;
      }
      if (w != 0.0) entries.push_back({i, j, w});
    }
  }
  return from_entries(agents, std::move(entries), std::move(labels), Normalization::Explicit);
}

InfluenceGraph InfluenceGraph::from_undirected(
    std::size_t agents, std::vector<std::pair<std::size_t, std::size_t>> edges,
    std::vector<Block> labels, Normalization normalization, double a) {
  if (normalization == Normalization::Explicit) {
    throw InvalidArgument("undirected construction needs row-normalized or unit-weight mode");
  }
  if (!std::isfinite(a) || a <= 0.0) throw InvalidArgument("influence budget a must be positive");
  for (auto& [i, j] : edges) {
    if (i >= agents || j >= agents) throw InvalidArgument("edge endpoint out of range");
    if (i == j) throw InvalidArgument("self loop on agent " + std::to_string(i));
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<std::size_t> degree(agents, 0);
  for (const auto& [i, j] : edges) {
    ++degree[i];
    ++degree[j];
  }
  std::vector<InfluenceEntry> entries;
  entries.reserve(2 * edges.size());
  auto weight_of = [&](std::size_t i) {
    return normalization == Normalization::RowNormalized ? a / static_cast<double>(degree[i]) : a;
  };
  for (const auto& [i, j] : edges) {
    entries.push_back({i, j, weight_of(i)});
    entries.push_back({j, i, weight_of(j)});
  }
  return from_entries(agents, std::move(entries), std::move(labels), normalization);
}

double InfluenceGraph::weight(std::size_t i, std::size_t j) const {
  const auto cols = row_columns(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return row_weights(i)[static_cast<std::size_t>(it - cols.begin())];
}

bool InfluenceGraph::fully_labeled() const {
  return std::none_of(labels_.begin(), labels_.end(),
                      [](Block b) { return b == Block::Unlabeled; });
}

bool InfluenceGraph::is_symmetric(double rel_tol) const {
  for (std::size_t i = 0; i < size(); ++i) {
    const auto cols = row_columns(i);
    const auto ws = row_weights(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const double back = weight(cols[k], i);
      if (std::abs(back - ws[k]) > rel_tol * std::max(std::abs(back), std::abs(ws[k]))) {
        return false;
      }
    }
  }
  return true;
}

void InfluenceGraph::apply_laplacian(std::span<const double> x, std::span<double> out) const {
  if (x.size() != size() || out.size() != size()) {
    throw InvalidArgument("apply_laplacian: dimension mismatch");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    double acc = row_sums_[i] * x[i];
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc -= weights_[k] * x[cols_[k]];
    out[i] = acc;
  }
}

std::vector<double> InfluenceGraph::dense_laplacian() const {
  const std::size_t n = size();
  std::vector<double> lap(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    lap[i * n + i] = row_sums_[i];
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) lap[i * n + cols_[k]] = -weights_[k];
  }
  return lap;
}

InfluenceGraph InfluenceGraph::symmetrized() const {
  std::vector<InfluenceEntry> entries;
  entries.reserve(2 * cols_.size());
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      entries.push_back({i, cols_[k], 0.5 * weights_[k]});
      entries.push_back({cols_[k], i, 0.5 * weights_[k]});
    }
  }
  return from_entries(size(), std::move(entries), labels_, Normalization::Explicit);
}

std::vector<std::pair<std::size_t, std::size_t>> InfluenceGraph::undirected_edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i) {
    for (const std::size_t j : row_columns(i)) out.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace opdyn
