#pragma once

#include <cstdint>

namespace mmw::stats {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for a Bernoulli proportion; z = 1.96 is ~95%.
Interval wilson(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

/// sqrt(p (1 - p) / n), p taken as the sample proportion.
double binomial_standard_error(std::uint64_t successes, std::uint64_t trials);

}  // namespace mmw::stats
