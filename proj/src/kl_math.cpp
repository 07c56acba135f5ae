#include "clickbandit/kl_math.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "clickbandit/error.hpp"

namespace clickbandit::kl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_probability(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    fail(ErrorCode::kDomain, std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
  }
}

void require_bound_inputs(double mean, std::uint64_t count, double radius) {
  require_probability(mean, "mean");
  if (count == 0) fail(ErrorCode::kDomain, "observation count must be positive");
  if (!(radius >= 0.0)) fail(ErrorCode::kDomain, "confidence radius must be nonnegative");
}

// x log(x / y) with the 0 log 0 = 0 convention; y == 0 < x gives +inf.
double xlogx_over_y(double x, double y) {
  if (x == 0.0) return 0.0;
  if (y == 0.0) return kInf;
  return x * std::log(x / y);
}

}  // namespace

double bernoulli_kl(double p, double q) {
  require_probability(p, "p");
  require_probability(q, "q");
  if (p == q) return 0.0;
  const double value = xlogx_over_y(p, q) + xlogx_over_y(1.0 - p, 1.0 - q);
  // Rounding can push the sum of two nearly-cancelling terms below zero.
  return value < 0.0 ? 0.0 : value;
}

double kl_ucb_upper(double mean, std::uint64_t count, double radius) {
  require_bound_inputs(mean, count, radius);
  if (mean >= 1.0) return 1.0;
  if (radius == 0.0) return mean;
  const auto n = static_cast<double>(count);
  double feasible = mean;
  double infeasible = 1.0;  // n kl(mean || 1) = inf for mean < 1
  for (int i = 0; i < kMaxBisections && infeasible - feasible > kBisectionTolerance; ++i) {
    const double mid = 0.5 * (feasible + infeasible);
    if (n * bernoulli_kl(mean, mid) <= radius) {
      feasible = mid;
    } else {
      infeasible = mid;
    }
  }
  return feasible;
}

double kl_ucb_lower(double mean, std::uint64_t count, double radius) {
  require_bound_inputs(mean, count, radius);
  if (mean <= 0.0) return 0.0;
  if (radius == 0.0) return mean;
  const auto n = static_cast<double>(count);
  double feasible = mean;
  double infeasible = 0.0;
  for (int i = 0; i < kMaxBisections && feasible - infeasible > kBisectionTolerance; ++i) {
    const double mid = 0.5 * (feasible + infeasible);
    if (n * bernoulli_kl(mean, mid) <= radius) {
      feasible = mid;
    } else {
      infeasible = mid;
    }
  }
  return feasible;
}

ConfidenceBounds kl_ucb_bounds(double mean, std::uint64_t count, double radius) {
  return {kl_ucb_lower(mean, count, radius), kl_ucb_upper(mean, count, radius)};
}

double horizon_radius(double horizon) {
  if (!(horizon >= 5.0)) {
    fail(ErrorCode::kDomain, "horizon must be at least 5, got " + std::to_string(horizon));
  }
  const double log_t = std::log(horizon);
  return log_t + 3.0 * std::log(log_t);
}

}  // namespace clickbandit::kl
