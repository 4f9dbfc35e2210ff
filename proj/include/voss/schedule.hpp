#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace voss {

/// Intensity of the driving Poisson process (events per unit time).
class Rate {
 public:
  explicit Rate(double lambda);

  [[nodiscard]] double value() const noexcept { return lambda_; }

 private:
  double lambda_;
};

/// One constant-order piece of a schedule after clipping.
struct Segment {
  double alpha;
  double length;
};

/**
 * Right-continuous, piecewise-constant order function alpha(t).
 *
 * Boundaries t_0 = 0 < t_1 < ... < t_n, with orders[k] in force on
 * [t_k, t_{k+1}). The last order extends past t_n to infinity. Orders lie
 * in (0, 1]; alpha = 1 is the deterministic drift S(t) = t.
 */
class AlphaSchedule {
 public:
  AlphaSchedule(std::vector<double> boundaries, std::vector<double> orders);

  /// Builds from consecutive (duration, alpha) pairs starting at 0.
  static AlphaSchedule from_segments(
      std::span<const std::pair<double, double>> segments);

  /// Single-segment schedule alpha on [0, horizon).
  static AlphaSchedule constant(double alpha, double horizon = 1.0);

  [[nodiscard]] const std::vector<double>& boundaries() const noexcept {
    return boundaries_;
  }
  [[nodiscard]] const std::vector<double>& orders() const noexcept {
    return orders_;
  }
  [[nodiscard]] std::size_t size() const noexcept { return orders_.size(); }
  [[nodiscard]] double horizon() const noexcept { return boundaries_.back(); }

  /// Index of the segment containing t (t >= 0); the last one past t_n.
  [[nodiscard]] std::size_t segment_index(double t) const;

  /// Segments of [0, t) as (alpha, length) pairs; empty when t == 0.
  [[nodiscard]] std::vector<Segment> clipped(double t) const;

  [[nodiscard]] double max_order() const noexcept;

  friend bool operator==(const AlphaSchedule&, const AlphaSchedule&) = default;

 private:
  std::vector<double> boundaries_;
  std::vector<double> orders_;
};

[[nodiscard]] double alpha_at(const AlphaSchedule& schedule, double t);

/// The part of the schedule on [s, r), shifted to start at 0.
[[nodiscard]] AlphaSchedule restrict(const AlphaSchedule& schedule, double s,
                                     double r);

/// Integral of w^alpha(s) over [0, t].
[[nodiscard]] double exponent_integral(const AlphaSchedule& schedule, double t,
                                       double w);

}  // namespace voss
