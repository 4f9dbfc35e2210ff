#pragma once

#include <complex>
#include <vector>

#include "voss/schedule.hpp"

namespace voss {

/// Truncation and tolerance control for the alternating series.
struct SeriesParams {
  int r_max = 60;     // outer truncation index
  double tol = 1e-10; // absolute tail tolerance for adaptive stopping
  int m_max = 32;     // largest state in table form

  void validate() const;
};

/// Per-segment lambda^alpha * dt above which the alternating series are
/// reported as low confidence.
inline constexpr double kSeriesValidityLimit = 1.5;

/// A single series evaluation with its certified truncation bound.
struct SeriesValue {
  double value = 0.0;
  double trunc_bound = 0.0;
  int terms_used = 0;
  bool converged = true;
  bool low_confidence = false;
};

/// Probabilities for states 0..m_max. trunc_bound bounds the mass not
/// represented in probs (states beyond m_max plus series truncation).
struct PmfTable {
  std::vector<double> probs;
  double trunc_bound = 0.0;
  bool converged = true;
  bool low_confidence = false;

  [[nodiscard]] double total() const;
};

struct LevySegmentMeasure {
  double alpha = 1.0;
  double lambda = 1.0;
  std::vector<double> masses;  // masses[j - 1] = nu({j})
  double total_mass = 0.0;

  /// lambda^alpha minus the represented mass; the jump intensity beyond J.
  [[nodiscard]] double omitted_mass() const;
};

/// z (z-1) ... (z-m+1), as a direct product.
[[nodiscard]] double falling_factorial(double z, int m);

/// Generalized binomial coefficient z choose m = (z)_m / m!.
[[nodiscard]] double binomial(double z, int m);

/// pmf at m of the constant-order process over a window dt.
[[nodiscard]] SeriesValue pmf_segment(double alpha, Rate lambda, double dt,
                                      int m, const SeriesParams& params);

/// pmf_segment for every m in 0..params.m_max.
[[nodiscard]] PmfTable pmf_segment_table(double alpha, Rate lambda, double dt,
                                         const SeriesParams& params);

/// pmf at m from the multinomial series over all segments of [0, t).
[[nodiscard]] SeriesValue pmf_series(const AlphaSchedule& schedule,
                                     Rate lambda, double t, int m,
                                     const SeriesParams& params);

/// pmf table as the discrete convolution of the per-segment tables.
[[nodiscard]] PmfTable pmf_convolution(const AlphaSchedule& schedule,
                                       Rate lambda, double t,
                                       const SeriesParams& params);

/// Certified upper bound on P(xi(t) > m_max) from the closed-form pgf.
[[nodiscard]] double tail_mass_bound(const AlphaSchedule& schedule, Rate lambda,
                                     double t, int m_max);

[[nodiscard]] double pgf(const AlphaSchedule& schedule, Rate lambda, double t,
                         double u);

[[nodiscard]] std::complex<double> pcf(const AlphaSchedule& schedule,
                                       Rate lambda, double t, double theta);

/// |d/dt psi + lambda^alpha (1-u)^alpha psi| by central differences.
[[nodiscard]] double pde_residual_pgf(const AlphaSchedule& schedule,
                                      Rate lambda, double t, double u,
                                      double h);

/// |d/dt p_m + lambda^alpha sum_r binom(alpha, r) (-1)^r p_{m-r}| by
/// central differences on convolution tables.
[[nodiscard]] double ode_residual_pmf(const AlphaSchedule& schedule,
                                      Rate lambda, double t, int m,
                                      const SeriesParams& params, double h);

/// P(tau_k < t) = P(xi(t) >= k).
[[nodiscard]] SeriesValue hitting_cdf(const AlphaSchedule& schedule,
                                      Rate lambda, double t, int k,
                                      const SeriesParams& params);

/// Discrete Levy measure of one constant-order segment:
/// nu({j}) = lambda^alpha (-1)^(j+1) binom(alpha, j), j = 1..J.
[[nodiscard]] LevySegmentMeasure levy_segment(double alpha, Rate lambda, int J);

/// exp(-dt sum_{j<=J} nu({j}) (1 - u^j)).
[[nodiscard]] double levy_reconstructed_pgf(const LevySegmentMeasure& measure,
                                            double dt, double u);

/// exp(-dt lambda^alpha (1-u)^alpha).
[[nodiscard]] double segment_pgf(double alpha, Rate lambda, double dt,
                                 double u);

}  // namespace voss
