#include "opdyn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "opdyn/error.hpp"

namespace opdyn {

double percentile(std::span<const double> values, double q) {
  if (values.empty()) throw InvalidArgument("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw InvalidArgument("percentile must lie in [0, 100]");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double pos = q / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

double mean(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("mean of an empty sample");
  double total = 0.0;
  for (const double v : values) total += v;
  return total / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  const double m = mean(values);
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (const double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

ProportionInterval proportion_interval(std::size_t successes, std::size_t total) {
  if (total == 0 || successes > total) throw InvalidArgument("proportion: need 0 <= m <= N, N > 0");
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(successes) / n;
  const double half = 2.0 * std::sqrt(p * (1.0 - p) / n);
  return {p, p - half, p + half};
}

}  // namespace opdyn
