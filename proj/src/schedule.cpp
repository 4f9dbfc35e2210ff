#include "voss/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace voss {

Rate::Rate(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << "rate must be a positive finite number, got " << lambda;
    throw std::domain_error(msg.str());
  }
}

AlphaSchedule::AlphaSchedule(std::vector<double> boundaries,
                             std::vector<double> orders)
    : boundaries_(std::move(boundaries)), orders_(std::move(orders)) {
  if (orders_.empty() || boundaries_.size() != orders_.size() + 1) {
    throw std::domain_error(
        "schedule needs n >= 1 orders and exactly n + 1 boundaries");
  }
  if (boundaries_.front() != 0.0) {
    throw std::domain_error("schedule must start at t = 0");
  }
  for (std::size_t k = 1; k < boundaries_.size(); ++k) {
    if (!(boundaries_[k] > boundaries_[k - 1]) ||
        !std::isfinite(boundaries_[k])) {
      throw std::domain_error("schedule boundaries must be strictly increasing");
    }
  }
  for (double a : orders_) {
    if (!(a > 0.0 && a <= 1.0)) {
      std::ostringstream msg;
      msg << "order " << a << " outside (0, 1]";
      throw std::domain_error(msg.str());
    }
  }
}

AlphaSchedule AlphaSchedule::from_segments(
    std::span<const std::pair<double, double>> segments) {
  std::vector<double> boundaries{0.0};
  std::vector<double> orders;
  boundaries.reserve(segments.size() + 1);
  orders.reserve(segments.size());
  for (const auto& [duration, alpha] : segments) {
    if (!(duration > 0.0)) {
      throw std::domain_error("segment durations must be positive");
    }
    boundaries.push_back(boundaries.back() + duration);
    orders.push_back(alpha);
  }
  return {std::move(boundaries), std::move(orders)};
}

AlphaSchedule AlphaSchedule::constant(double alpha, double horizon) {
  return {{0.0, horizon}, {alpha}};
}

std::size_t AlphaSchedule::segment_index(double t) const {
  if (!(t >= 0.0)) {
    throw std::domain_error("schedule lookup at negative time");
  }
  // first boundary strictly greater than t; segment k covers [t_k, t_{k+1})
  const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), t);
  const auto idx = static_cast<std::size_t>(it - boundaries_.begin()) - 1;
  return std::min(idx, orders_.size() - 1);
}

std::vector<Segment> AlphaSchedule::clipped(double t) const {
  if (!(t >= 0.0)) {
    throw std::domain_error("cannot clip a schedule at negative time");
  }
  std::vector<Segment> out;
  if (t == 0.0) return out;
  const auto shifted = restrict(*this, 0.0, t);
  const auto& b = shifted.boundaries();
  out.reserve(shifted.size());
  for (std::size_t k = 0; k < shifted.size(); ++k) {
    out.push_back({shifted.orders()[k], b[k + 1] - b[k]});
  }
  return out;
}

double AlphaSchedule::max_order() const noexcept {
  return *std::max_element(orders_.begin(), orders_.end());
}

double alpha_at(const AlphaSchedule& schedule, double t) {
  return schedule.orders()[schedule.segment_index(t)];
}

AlphaSchedule restrict(const AlphaSchedule& schedule, double s, double r) {
  if (!(s >= 0.0) || !(s < r)) {
    throw std::domain_error("restrict needs 0 <= s < r");
  }
  const auto& b = schedule.boundaries();
  std::vector<double> boundaries{0.0};
  std::vector<double> orders{alpha_at(schedule, s)};
  // interior boundaries of the original partition that fall inside (s, r)
  for (std::size_t k = 1; k + 1 < b.size(); ++k) {
    if (b[k] > s && b[k] < r) {
      boundaries.push_back(b[k] - s);
      orders.push_back(schedule.orders()[k]);
    }
  }
  boundaries.push_back(r - s);
  return {std::move(boundaries), std::move(orders)};
}

double exponent_integral(const AlphaSchedule& schedule, double t, double w) {
  if (!(t >= 0.0) || !(w >= 0.0)) {
    throw std::domain_error("exponent_integral needs t >= 0 and w >= 0");
  }
  if (w == 0.0) return 0.0;
  double total = 0.0;
  for (const auto& seg : schedule.clipped(t)) {
    total += seg.length * std::pow(w, seg.alpha);
  }
  return total;
}

}  // namespace voss
