#include "voss/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "voss/compensated_sum.hpp"

namespace voss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bound on sum_{r > R} 2 q^r / r!. Every outer term of either series is at
// most 2 q^r / r! with q = 2^alpha_max * sum_k lambda^alpha_k dt_k, because
// |binom(z, m)| <= max(1, 2^(z+1)) for z >= 0.
double series_tail_bound(double q, int last_r) {
  const double next = last_r + 1;
  if (q >= next + 1.0) return kInf;
  const double log_first =
      std::log(2.0) + next * std::log(q) - std::lgamma(next + 1.0);
  return std::exp(log_first) / (1.0 - q / (next + 1.0));
}

// Stopping rule shared by both series: three consecutive outer terms below
// tol and a certified tail below tol.
class StopRule {
 public:
  StopRule(double q, double tol) : q_(q), tol_(tol) {}

  bool done(int r, double term_magnitude) {
    small_run_ = term_magnitude < tol_ ? small_run_ + 1 : 0;
    bound_ = q_ == 0.0 ? 0.0 : series_tail_bound(q_, r);
    return small_run_ >= 3 && bound_ < tol_;
  }

  [[nodiscard]] double bound() const noexcept { return bound_; }

 private:
  double q_;
  double tol_;
  int small_run_ = 0;
  double bound_ = kInf;
};

struct SegmentSeries {
  std::vector<double> probs;  // m = 0..m_max
  double series_bound = 0.0;  // per-entry truncation bound
  int terms_used = 0;
  bool converged = true;
  bool low_confidence = false;
};

// p_m = ((-1)^m / m!) sum_r ((-x)^r / r!) (alpha r)_m, x = lambda^alpha dt,
// evaluated for all m <= m_max at once.
SegmentSeries segment_series(double alpha, double lambda, double dt,
                             const SeriesParams& params) {
  const double x = std::pow(lambda, alpha) * dt;
  const int m_max = params.m_max;
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(m_max) + 1);
  StopRule stop(std::pow(2.0, alpha) * x, params.tol);

  SegmentSeries out;
  out.low_confidence = x > kSeriesValidityLimit;
  out.converged = false;
  const double log_x = std::log(x);
  for (int r = 0; r <= params.r_max; ++r) {
    const double sign_r = (r % 2 == 0) ? 1.0 : -1.0;
    const double coeff =
        sign_r * std::exp(r * log_x - std::lgamma(r + 1.0));
    const double z = alpha * r;
    double b = 1.0;  // binom(z, m)
    double largest = 0.0;
    for (int m = 0; m <= m_max; ++m) {
      const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;
      const double term = sign_m * coeff * b;
      acc[static_cast<std::size_t>(m)].add(term);
      largest = std::max(largest, std::abs(term));
      b *= (z - m) / (m + 1.0);
    }
    out.terms_used = r + 1;
    if (stop.done(r, largest)) {
      out.converged = true;
      break;
    }
  }
  out.series_bound = stop.bound();
  if (!out.converged && out.series_bound < params.tol) out.converged = true;
  out.probs.reserve(acc.size());
  for (const auto& a : acc) out.probs.push_back(a.value());
  return out;
}

std::vector<double> convolve(const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t m = 0; m < out.size(); ++m) {
    CompensatedSum s;
    for (std::size_t i = 0; i <= m; ++i) s.add(a[i] * b[m - i]);
    out[m] = s.value();
  }
  return out;
}

struct ConvolutionResult {
  std::vector<double> probs;
  double series_bound = 0.0;  // bound on the error of each entry
  bool converged = true;
  bool low_confidence = false;
};

ConvolutionResult convolve_segments(const AlphaSchedule& schedule,
                                    double lambda, double t,
                                    const SeriesParams& params) {
  ConvolutionResult out;
  out.probs.assign(static_cast<std::size_t>(params.m_max) + 1, 0.0);
  out.probs[0] = 1.0;
  for (const auto& seg : schedule.clipped(t)) {
    const auto part = segment_series(seg.alpha, lambda, seg.length, params);
    out.probs = convolve(out.probs, part.probs);
    // entrywise error of a convolution of sub-stochastic tables
    out.series_bound += (params.m_max + 1.0) * part.series_bound;
    out.converged = out.converged && part.converged;
    out.low_confidence = out.low_confidence || part.low_confidence;
  }
  return out;
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::domain_error("evaluation time must be finite and >= 0");
  }
}

void check_state(int m) {
  if (m < 0) throw std::domain_error("state index must be >= 0");
}

}  // namespace

void SeriesParams::validate() const {
  if (r_max < 1) throw std::domain_error("r_max must be >= 1");
  if (!(tol > 0.0)) throw std::domain_error("tol must be > 0");
  if (m_max < 0) throw std::domain_error("m_max must be >= 0");
}

double PmfTable::total() const {
  CompensatedSum s;
  for (double p : probs) s.add(p);
  return s.value();
}

double LevySegmentMeasure::omitted_mass() const {
  return std::pow(lambda, alpha) - total_mass;
}

double falling_factorial(double z, int m) {
  double prod = 1.0;
  for (int i = 0; i < m; ++i) prod *= z - i;
  return prod;
}

double binomial(double z, int m) {
  double prod = 1.0;
  for (int i = 0; i < m; ++i) prod *= (z - i) / (i + 1.0);
  return prod;
}

SeriesValue pmf_segment(double alpha, Rate lambda, double dt, int m,
                        const SeriesParams& params) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::domain_error("order outside (0, 1]");
  }
  if (!(dt > 0.0)) throw std::domain_error("pmf_segment needs dt > 0");
  check_state(m);
  params.validate();
  SeriesParams local = params;
  local.m_max = m;
  const auto s = segment_series(alpha, lambda.value(), dt, local);
  return {s.probs[static_cast<std::size_t>(m)], s.series_bound, s.terms_used,
          s.converged, s.low_confidence};
}

PmfTable pmf_segment_table(double alpha, Rate lambda, double dt,
                           const SeriesParams& params) {
  return pmf_convolution(AlphaSchedule::constant(alpha, dt), lambda, dt,
                         params);
}

SeriesValue pmf_series(const AlphaSchedule& schedule, Rate lambda, double t,
                       int m, const SeriesParams& params) {
  check_time(t);
  check_state(m);
  params.validate();
  if (t == 0.0) return {m == 0 ? 1.0 : 0.0, 0.0, 0, true, false};

  const auto segments = schedule.clipped(t);
  const std::size_t n = segments.size();
  std::vector<double> log_y(n);
  std::vector<double> alphas(n);
  double y_total = 0.0;
  bool low_confidence = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double y =
        std::pow(lambda.value(), segments[i].alpha) * segments[i].length;
    log_y[i] = std::log(y);
    alphas[i] = segments[i].alpha;
    y_total += y;
    low_confidence = low_confidence || y > kSeriesValidityLimit;
  }
  const double log_m_fact = std::lgamma(m + 1.0);
  const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;

  // Outer term r: sum over compositions x_1 + ... + x_n = r of
  //   prod_i y_i^x_i / x_i!  *  (sum_i alpha_i x_i)_m / m!
  // with magnitudes carried in log space and signs tracked separately.
  CompensatedSum outer;
  auto enumerate = [&](auto&& self, std::size_t i, int remaining,
                       double log_mag, double z, CompensatedSum& acc) -> void {
    if (i + 1 == n) {
      const double x = remaining;
      log_mag += x * log_y[i] - std::lgamma(x + 1.0);
      z += alphas[i] * x;
      const double ff = falling_factorial(z, m);
      if (ff == 0.0) return;
      const double mag =
          std::exp(log_mag + std::log(std::abs(ff)) - log_m_fact);
      acc.add(ff < 0.0 ? -mag : mag);
      return;
    }
    for (int x = 0; x <= remaining; ++x) {
      self(self, i + 1, remaining - x,
           log_mag + x * log_y[i] - std::lgamma(x + 1.0), z + alphas[i] * x,
           acc);
    }
  };

  StopRule stop(std::pow(2.0, schedule.max_order()) * y_total, params.tol);
  SeriesValue out;
  out.low_confidence = low_confidence;
  out.converged = false;
  for (int r = 0; r <= params.r_max; ++r) {
    CompensatedSum inner;
    enumerate(enumerate, 0, r, 0.0, 0.0, inner);
    const double term = ((r % 2 == 0) ? 1.0 : -1.0) * sign_m * inner.value();
    outer.add(term);
    out.terms_used = r + 1;
    if (stop.done(r, std::abs(term))) {
      out.converged = true;
      break;
    }
  }
  out.trunc_bound = stop.bound();
  if (!out.converged && out.trunc_bound < params.tol) out.converged = true;
  out.value = outer.value();
  return out;
}

PmfTable pmf_convolution(const AlphaSchedule& schedule, Rate lambda, double t,
                         const SeriesParams& params) {
  check_time(t);
  params.validate();
  const auto conv = convolve_segments(schedule, lambda.value(), t, params);
  PmfTable table;
  table.probs = conv.probs;
  table.converged = conv.converged;
  table.low_confidence = conv.low_confidence;
  table.trunc_bound = tail_mass_bound(schedule, lambda, t, params.m_max) +
                      conv.series_bound;
  return table;
}

double tail_mass_bound(const AlphaSchedule& schedule, Rate lambda, double t,
                       int m_max) {
  check_time(t);
  check_state(m_max);
  if (t == 0.0) return 0.0;
  // 1 - u^xi >= (1 - u^(M+1)) 1{xi > M}, so
  // P(xi > M) <= (1 - psi(u)) / (1 - u^(M+1)) for every u in [0, 1).
  const auto segments = schedule.clipped(t);
  const double states = m_max + 1.0;
  double best = 1.0;
  constexpr int kSteps = 480;
  for (int i = 0; i <= kSteps; ++i) {
    const double v = std::pow(10.0, -12.0 + 12.0 * i / kSteps);  // v = 1 - u
    double exponent = 0.0;
    for (const auto& seg : segments) {
      exponent += seg.length * std::pow(lambda.value() * v, seg.alpha);
    }
    const double miss = -std::expm1(-exponent);
    const double denom = v >= 1.0 ? 1.0 : -std::expm1(states * std::log1p(-v));
    if (denom > 0.0) best = std::min(best, miss / denom);
  }
  return best;
}

double pgf(const AlphaSchedule& schedule, Rate lambda, double t, double u) {
  check_time(t);
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("pgf argument outside [0, 1]");
  }
  return std::exp(-exponent_integral(schedule, t, lambda.value() * (1.0 - u)));
}

std::complex<double> pcf(const AlphaSchedule& schedule, Rate lambda, double t,
                         double theta) {
  check_time(t);
  // 1 - e^{i theta} written to avoid cancellation near theta = 0
  const double half = std::sin(0.5 * theta);
  const std::complex<double> v(2.0 * half * half, -std::sin(theta));
  if (v == std::complex<double>(0.0, 0.0)) return {1.0, 0.0};
  std::complex<double> exponent(0.0, 0.0);
  for (const auto& seg : schedule.clipped(t)) {
    exponent += seg.length * std::pow(lambda.value(), seg.alpha) *
                std::pow(v, seg.alpha);
  }
  return std::exp(-exponent);
}

namespace {

void check_stencil(const AlphaSchedule& schedule, double t, double h) {
  if (!(h > 0.0)) throw std::domain_error("step h must be positive");
  if (!(t > h)) throw std::domain_error("stencil reaches below t = 0");
  const auto& b = schedule.boundaries();
  for (std::size_t k = 1; k + 1 < b.size(); ++k) {
    if (std::abs(t - b[k]) <= h) {
      throw std::domain_error("stencil crosses a schedule boundary");
    }
  }
}

}  // namespace

double pde_residual_pgf(const AlphaSchedule& schedule, Rate lambda, double t,
                        double u, double h) {
  check_stencil(schedule, t, h);
  const double alpha = alpha_at(schedule, t);
  const double derivative =
      (pgf(schedule, lambda, t + h, u) - pgf(schedule, lambda, t - h, u)) /
      (2.0 * h);
  const double rhs = -std::pow(lambda.value(), alpha) *
                     std::pow(1.0 - u, alpha) * pgf(schedule, lambda, t, u);
  return std::abs(derivative - rhs);
}

double ode_residual_pmf(const AlphaSchedule& schedule, Rate lambda, double t,
                        int m, const SeriesParams& params, double h) {
  check_stencil(schedule, t, h);
  check_state(m);
  SeriesParams local = params;
  local.m_max = m;
  const auto ahead = pmf_convolution(schedule, lambda, t + h, local);
  const auto behind = pmf_convolution(schedule, lambda, t - h, local);
  const auto here = pmf_convolution(schedule, lambda, t, local);
  const auto idx = static_cast<std::size_t>(m);
  const double derivative = (ahead.probs[idx] - behind.probs[idx]) / (2.0 * h);

  const double alpha = alpha_at(schedule, t);
  CompensatedSum fractional_difference;
  for (int r = 0; r <= m; ++r) {
    const double sign = (r % 2 == 0) ? 1.0 : -1.0;
    fractional_difference.add(sign * binomial(alpha, r) *
                              here.probs[static_cast<std::size_t>(m - r)]);
  }
  const double rhs =
      -std::pow(lambda.value(), alpha) * fractional_difference.value();
  return std::abs(derivative - rhs);
}

SeriesValue hitting_cdf(const AlphaSchedule& schedule, Rate lambda, double t,
                        int k, const SeriesParams& params) {
  check_time(t);
  if (k < 1) throw std::domain_error("hitting level k must be >= 1");
  params.validate();
  if (t == 0.0) return {0.0, 0.0, 0, true, false};
  SeriesParams local = params;
  local.m_max = k - 1;
  const auto conv = convolve_segments(schedule, lambda.value(), t, local);
  CompensatedSum below(1.0);
  for (double p : conv.probs) below.add(-p);
  SeriesValue out;
  out.value = std::clamp(below.value(), 0.0, 1.0);
  out.trunc_bound = k * conv.series_bound;
  out.converged = conv.converged;
  out.low_confidence = conv.low_confidence;
  return out;
}

LevySegmentMeasure levy_segment(double alpha, Rate lambda, int J) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::domain_error("order outside (0, 1]");
  }
  if (J < 1) throw std::domain_error("J must be >= 1");
  LevySegmentMeasure out;
  out.alpha = alpha;
  out.lambda = lambda.value();
  out.masses.reserve(static_cast<std::size_t>(J));
  const double scale = std::pow(lambda.value(), alpha);
  // (-1)^(j+1) binom(alpha, j) = alpha (1 - alpha) ... (j - 1 - alpha) / j!
  double weight = alpha;
  CompensatedSum total;
  for (int j = 1; j <= J; ++j) {
    out.masses.push_back(scale * weight);
    total.add(scale * weight);
    weight *= (j - alpha) / (j + 1.0);
  }
  out.total_mass = total.value();
  return out;
}

double levy_reconstructed_pgf(const LevySegmentMeasure& measure, double dt,
                              double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("pgf argument outside [0, 1]");
  }
  CompensatedSum exponent;
  double power = 1.0;
  for (double mass : measure.masses) {
    power *= u;
    exponent.add(mass * (1.0 - power));
  }
  return std::exp(-dt * exponent.value());
}

double segment_pgf(double alpha, Rate lambda, double dt, double u) {
  return pgf(AlphaSchedule::constant(alpha, dt), lambda, dt, u);
}

}  // namespace voss
