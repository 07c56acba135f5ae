#pragma once

#include <cstdint>

namespace clickbandit::kl {

// Confidence interval [lower, upper] on a Bernoulli mean.
struct ConfidenceBounds {
  double lower = 0.0;
  double upper = 1.0;
};

// Bernoulli KL divergence kl(p || q) in nats, with 0 log 0 = 0.
// Returns +infinity when q is 0 or 1 and p differs from q.
// Throws Error(kDomain) when p or q lies outside [0, 1].
double bernoulli_kl(double p, double q);

// Largest q in [mean, 1] with count * kl(mean || q) <= radius.
double kl_ucb_upper(double mean, std::uint64_t count, double radius);

// Smallest q in [0, mean] with count * kl(mean || q) <= radius.
double kl_ucb_lower(double mean, std::uint64_t count, double radius);

ConfidenceBounds kl_ucb_bounds(double mean, std::uint64_t count, double radius);

// Confidence radius log T + 3 log log T used for a horizon of T steps.
// Requires T >= 5.
double horizon_radius(double horizon);

// Bisection stops once the bracket is this narrow, or after kMaxBisections.
inline constexpr double kBisectionTolerance = 1e-9;
inline constexpr int kMaxBisections = 100;

}  // namespace clickbandit::kl
