#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace opdyn {

enum class Block : std::uint8_t { Unlabeled, Left, Right };

// How edge weights were assigned.
//   RowNormalized: a_ij = a / deg(i) for each neighbor j (rows sum to a).
//   UnitWeight:    a_ij = a for each neighbor j.
//   Explicit:      weights supplied directly by the caller.
enum class Normalization : std::uint8_t { RowNormalized, UnitWeight, Explicit };

std::string_view to_string(Normalization n);
std::string_view to_string(Block b);

// One directed influence entry: a_{row,col} = weight, the influence of agent
// `col` on agent `row`.
struct InfluenceEntry {
  std::size_t row;
  std::size_t col;
  double weight;
};

// Nonnegative influence matrix with zero diagonal, stored row-compressed.
// Immutable after construction.
class InfluenceGraph {
 public:
  InfluenceGraph() = default;

  // Directed weighted entries. Zero weights are dropped, duplicate (row, col)
  // entries are summed. Negative or non-finite weights and self-influence are
  // rejected with InvalidArgument. `labels` may be empty (all Unlabeled).
  static InfluenceGraph from_entries(std::size_t agents, std::vector<InfluenceEntry> entries,
                                     std::vector<Block> labels = {},
                                     Normalization normalization = Normalization::Explicit);

  // Row-major dense n*n matrix.
  static InfluenceGraph from_dense(std::size_t agents, std::span<const double> weights,
                                   std::vector<Block> labels = {});

  // Simple undirected graph. Edges are deduplicated ({i,j} == {j,i}); self
  // loops are rejected. Weights follow `normalization` with budget `a`
  // (Explicit is not accepted here). Isolated agents get all-zero rows.
  static InfluenceGraph from_undirected(std::size_t agents,
                                        std::vector<std::pair<std::size_t, std::size_t>> edges,
                                        std::vector<Block> labels, Normalization normalization,
                                        double a);

  std::size_t size() const noexcept { return labels_.size(); }

  std::span<const std::size_t> row_columns(std::size_t i) const {
    return {cols_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_weights(std::size_t i) const {
    return {weights_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  // Number of agents with nonzero influence on i.
  std::size_t degree(std::size_t i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  double row_sum(std::size_t i) const { return row_sums_[i]; }
  double weight(std::size_t i, std::size_t j) const;

  Block label(std::size_t i) const { return labels_[i]; }
  std::span<const Block> labels() const noexcept { return labels_; }
  bool fully_labeled() const;
  Normalization normalization() const noexcept { return normalization_; }
  std::size_t entry_count() const noexcept { return cols_.size(); }

  bool is_symmetric(double rel_tol = 1e-12) const;

  // out = L x with L = diag(row sums) - A, i.e. (Lx)_i = sum_j a_ij (x_i - x_j).
  void apply_laplacian(std::span<const double> x, std::span<double> out) const;

  // Row-major dense Laplacian (small graphs, diagnostics and tests).
  std::vector<double> dense_laplacian() const;

  // (A + A^T) / 2, labels kept, normalization becomes Explicit.
  InfluenceGraph symmetrized() const;

  // Unordered pairs {i, j}, i < j, with a_ij > 0 or a_ji > 0, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> undirected_edges() const;

  // Raw CSR arrays for hot loops.
  std::span<const std::size_t> row_offsets() const noexcept { return row_ptr_; }
  std::span<const std::size_t> columns() const noexcept { return cols_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> row_sums() const noexcept { return row_sums_; }

 private:
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> weights_;
  std::vector<double> row_sums_;
  std::vector<Block> labels_;
  Normalization normalization_ = Normalization::Explicit;
};

}  // namespace opdyn
