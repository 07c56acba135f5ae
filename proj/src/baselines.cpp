#include "clickbandit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "clickbandit/error.hpp"
#include "clickbandit/kl_math.hpp"

namespace clickbandit {
namespace {

void check_dimensions(std::size_t num_items, std::size_t num_positions) {
  if (num_positions < 1 || num_positions > num_items) {
    fail(ErrorCode::kDimension, "learner needs 1 <= K <= L");
  }
}

void check_feedback(bool has_pending, const RankedList& pending, const RankedList& list,
                    std::size_t num_clicks, std::size_t num_positions) {
  if (!has_pending) fail(ErrorCode::kState, "update called without a preceding choose");
  if (!(list == pending)) fail(ErrorCode::kState, "list differs from the last chosen list");
  if (num_clicks != num_positions) {
    fail(ErrorCode::kDimension, "click vector must have one entry per position");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// CascadeKL-UCB

CascadeKlUcb::CascadeKlUcb(std::size_t num_items, std::size_t num_positions)
    : num_items_(num_items),
      num_positions_(num_positions),
      observations_(num_items, 0),
      clicks_(num_items, 0),
      indices_(num_items, 1.0),
      order_(num_items) {
  check_dimensions(num_items, num_positions);
}

double CascadeKlUcb::step_radius(std::uint64_t step) {
  return kl::horizon_radius(static_cast<double>(std::max<std::uint64_t>(step, 5)));
}

double CascadeKlUcb::upper_bound(ItemId item) const {
  const std::uint64_t n = observations_[item - 1];
  if (n == 0) return 1.0;
  const double mean = static_cast<double>(clicks_[item - 1]) / static_cast<double>(n);
  return kl::kl_ucb_upper(mean, n, step_radius(step_));
}

RankedList CascadeKlUcb::choose(Rng& rng) {
  for (std::size_t d = 0; d < num_items_; ++d) {
    indices_[d] = upper_bound(static_cast<ItemId>(d + 1));
  }
  std::iota(order_.begin(), order_.end(), ItemId{1});
  rng.shuffle(std::span(order_));
  std::stable_sort(order_.begin(), order_.end(),
                   [&](ItemId a, ItemId b) { return indices_[a - 1] > indices_[b - 1]; });
  pending_ = RankedList(std::vector<ItemId>(order_.begin(), order_.begin() + num_positions_));
  has_pending_ = true;
  return pending_;
}

void CascadeKlUcb::update(const RankedList& list, std::span<const std::uint8_t> clicks, Rng&) {
  check_feedback(has_pending_, pending_, list, clicks.size(), num_positions_);
  has_pending_ = false;
  for (std::size_t k = 1; k <= num_positions_; ++k) {
    const ItemId item = list.at_position(k);
    observations_[item - 1] += 1;
    if (clicks[k - 1]) {
      clicks_[item - 1] += 1;
      break;
    }
  }
  ++step_;
}

// ---------------------------------------------------------------------------
// RankedExp3

RankedExp3::RankedExp3(std::size_t num_items, std::size_t num_positions, double gamma)
    : num_items_(num_items),
      num_positions_(num_positions),
      gamma_(gamma),
      log_weights_(num_positions, std::vector<double>(num_items, 0.0)),
      weights_(num_positions, std::vector<double>(num_items, 1.0)),
      weight_sums_(num_positions, static_cast<double>(num_items)),
      sampled_prob_(num_positions, 0.0),
      placed_(num_items, 0) {
  check_dimensions(num_items, num_positions);
  if (!(gamma > 0.0 && gamma <= 1.0)) fail(ErrorCode::kDomain, "gamma must lie in (0, 1]");
}

double RankedExp3::default_gamma(std::size_t num_items, std::uint64_t horizon) {
  const auto l = static_cast<double>(num_items);
  const auto t = static_cast<double>(horizon);
  if (num_items < 2 || horizon == 0) return 1.0;
  return std::min(1.0, std::sqrt(l * std::log(l) / ((std::numbers::e - 1.0) * t)));
}

void RankedExp3::refresh(std::size_t position) {
  auto& log_w = log_weights_[position - 1];
  auto& w = weights_[position - 1];
  const double top = *std::max_element(log_w.begin(), log_w.end());
  double sum = 0.0;
  for (std::size_t d = 0; d < num_items_; ++d) {
    w[d] = std::exp(log_w[d] - top);
    sum += w[d];
  }
  weight_sums_[position - 1] = sum;
}

std::vector<double> RankedExp3::distribution(std::size_t position) const {
  const auto& w = weights_.at(position - 1);
  const double sum = weight_sums_[position - 1];
  const double floor = gamma_ / static_cast<double>(num_items_);
  std::vector<double> p(num_items_);
  for (std::size_t d = 0; d < num_items_; ++d) p[d] = (1.0 - gamma_) * w[d] / sum + floor;
  return p;
}

double RankedExp3::relative_weight(std::size_t position, ItemId item) const {
  return weights_.at(position - 1).at(item - 1);
}

RankedList RankedExp3::choose(Rng& rng) {
  std::fill(placed_.begin(), placed_.end(), 0);
  std::vector<ItemId> items(num_positions_);
  const double floor = gamma_ / static_cast<double>(num_items_);
  for (std::size_t k = 1; k <= num_positions_; ++k) {
    const auto& w = weights_[k - 1];
    const double scale = (1.0 - gamma_) / weight_sums_[k - 1];
    double mass = 0.0;
    for (std::size_t d = 0; d < num_items_; ++d) {
      if (!placed_[d]) mass += scale * w[d] + floor;
    }
    const double target = rng.uniform01() * mass;
    double cumulative = 0.0;
    std::size_t chosen = num_items_;
    std::size_t last_free = num_items_;
    for (std::size_t d = 0; d < num_items_; ++d) {
      if (placed_[d]) continue;
      last_free = d;
      cumulative += scale * w[d] + floor;
      if (target < cumulative) {
        chosen = d;
        break;
      }
    }
    if (chosen == num_items_) chosen = last_free;  // rounding at the top end
    placed_[chosen] = 1;
    items[k - 1] = static_cast<ItemId>(chosen + 1);
    sampled_prob_[k - 1] = (scale * w[chosen] + floor) / mass;
  }
  pending_ = RankedList(std::move(items));
  has_pending_ = true;
  return pending_;
}

void RankedExp3::update(const RankedList& list, std::span<const std::uint8_t> clicks, Rng&) {
  check_feedback(has_pending_, pending_, list, clicks.size(), num_positions_);
  has_pending_ = false;
  const auto l = static_cast<double>(num_items_);
  for (std::size_t k = 1; k <= num_positions_; ++k) {
    if (!clicks[k - 1]) continue;  // x = 0 leaves the weights unchanged
    const ItemId item = list.at_position(k);
    log_weights_[k - 1][item - 1] += gamma_ / (sampled_prob_[k - 1] * l);
    refresh(k);
  }
}

}  // namespace clickbandit
