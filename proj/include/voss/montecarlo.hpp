#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "voss/analytics.hpp"
#include "voss/rng.hpp"
#include "voss/schedule.hpp"
#include "voss/stats.hpp"

namespace voss {

/// Samples of xi(t) = N(S(t)) at a fixed time.
struct SimulationBatch {
  std::string schedule_digest;
  std::vector<std::uint64_t> counts;
  std::uint64_t n_overflow = 0;  // subordinator or Poisson mean out of range
  RngSpec rng;

  [[nodiscard]] std::uint64_t requested() const noexcept {
    return counts.size() + n_overflow;
  }
  [[nodiscard]] double overflow_fraction() const noexcept;
  /// More than 1% of draws overflowed; analytic comparisons are then only
  /// valid on the recorded conditional basis.
  [[nodiscard]] bool heavy_tail_warning() const noexcept;
};

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

struct HittingEstimate {
  double t = 0.0;
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t n_overflow = 0;  // counted as hits, never dropped
};

/// Worker count from VOSS_WORKERS, else 1.
[[nodiscard]] unsigned default_workers();

/// Samples per RNG stream. Streams are tied to blocks, not workers, so
/// results do not depend on the worker count.
inline constexpr std::size_t kBlockSize = 4096;

[[nodiscard]] std::string schedule_digest(const AlphaSchedule& schedule,
                                          Rate lambda, double t);

/// xi(t) = N(S(t)) with S drawn as a whole.
[[nodiscard]] SimulationBatch simulate_gsfpp(const AlphaSchedule& schedule,
                                             Rate lambda, double t,
                                             std::size_t n, RngSpec rng,
                                             unsigned workers = default_workers());

/// Sum over segments of independent N_k(S_k(dt_k)).
[[nodiscard]] SimulationBatch simulate_segment_sum(
    const AlphaSchedule& schedule, Rate lambda, double t, std::size_t n,
    RngSpec rng, unsigned workers = default_workers());

/// Frequencies of 0..m_max; trunc_bound holds the frequency of larger
/// counts plus overflowed draws, so probs and trunc_bound sum to 1.
[[nodiscard]] PmfTable empirical_pmf(const SimulationBatch& batch, int m_max);

/// Pearson goodness of fit. Bins 0..m_max plus a tail bin carrying
/// 1 - sum(analytic) (observed: empirical trunc_bound), pooled to expected
/// counts >= 5.
[[nodiscard]] stats::TestResult chi_square_compare(const PmfTable& empirical,
                                                   const PmfTable& analytic,
                                                   std::size_t n);

/// Two-sample homogeneity chi-square on counts 0..m_max plus a tail bin
/// (overflows included), expected counts from the pooled sample.
[[nodiscard]] stats::TestResult chi_square_two_sample(const SimulationBatch& a,
                                                      const SimulationBatch& b,
                                                      int m_max);

/// Mean and standard error of exp(-w S(t)).
[[nodiscard]] McEstimate laplace_mc(const AlphaSchedule& schedule, double t,
                                    double w, std::size_t n, RngSpec rng,
                                    unsigned workers = default_workers());

/// Frequencies of {xi(t) >= k} on an increasing grid from coupled paths.
[[nodiscard]] std::vector<HittingEstimate> hitting_mc(
    const AlphaSchedule& schedule, Rate lambda, std::span<const double> t_grid,
    int k, std::size_t n, RngSpec rng, unsigned workers = default_workers());

}  // namespace voss
