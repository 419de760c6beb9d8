#pragma once

#include <span>

namespace opdyn {

// Percentile with linear interpolation between order statistics
// (position q/100 * (n-1) in the sorted sample). Throws on empty input or q
// outside [0, 100].
double percentile(std::span<const double> values, double q);
double mean(std::span<const double> values);
// Sample standard deviation (n-1 denominator); 0 for a single value.
double stddev(std::span<const double> values);

// Consensus-probability interval p +- 2 sqrt(p(1-p)/N).
struct ProportionInterval {
  double p = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};
ProportionInterval proportion_interval(std::size_t successes, std::size_t total);

}  // namespace opdyn
