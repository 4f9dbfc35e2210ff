#pragma once

#include <functional>
#include <span>
#include <vector>

namespace voss::stats {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
};

/// P(X > x) for X ~ chi-square(dof).
[[nodiscard]] double chi_square_sf(double x, int dof);

/// Limiting Kolmogorov survival function P(K > x).
[[nodiscard]] double kolmogorov_sf(double x);

/// One-sample KS test; p-value from the limiting law with Stephens'
/// small-sample correction.
[[nodiscard]] TestResult ks_one_sample(std::vector<double> samples,
                                       const std::function<double(double)>& cdf);

[[nodiscard]] TestResult ks_two_sample(std::vector<double> a,
                                       std::vector<double> b);

/// Contiguous groups of bins, each with summed weight >= min_weight. A
/// trailing remainder is merged into the last group. Returns group start
/// indices; empty if the total weight cannot fill one group.
[[nodiscard]] std::vector<std::size_t> pool_bins(std::span<const double> weight,
                                                 double min_weight);

}  // namespace voss::stats
