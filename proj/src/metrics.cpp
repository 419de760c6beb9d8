#include "opdyn/metrics.hpp"

#include <cmath>

#include "opdyn/error.hpp"

namespace opdyn {

std::optional<double> block_polarization(std::span<const double> x,
                                         std::span<const Block> labels) {
  if (x.size() != labels.size()) throw InvalidArgument("polarization: label count mismatch");
  double left = 0.0, right = 0.0;
  std::size_t nl = 0, nr = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (labels[i] == Block::Left) {
      left += x[i];
      ++nl;
    } else if (labels[i] == Block::Right) {
      right += x[i];
      ++nr;
    }
  }
  if (nl == 0 || nr == 0) return std::nullopt;
  return right / static_cast<double>(nr) - left / static_cast<double>(nl);
}

double extremism(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("extremism of an empty state");
  double total = 0.0;
  for (const double v : x) total += std::abs(v);
  return total / static_cast<double>(x.size());
}

}  // namespace opdyn
