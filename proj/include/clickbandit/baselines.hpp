#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clickbandit/click_models.hpp"
#include "clickbandit/learner.hpp"

namespace clickbandit {

// CascadeKL-UCB: ranks items by KL-UCB indices on lifetime click rates,
// interpreting feedback as a cascade (the scan stops at the first click).
class CascadeKlUcb final : public Learner {
 public:
  CascadeKlUcb(std::size_t num_items, std::size_t num_positions);

  std::string_view name() const override { return "cascadeklucb"; }
  RankedList choose(Rng& rng) override;
  // Positions after the first click are ignored.
  void update(const RankedList& list, std::span<const std::uint8_t> clicks, Rng& rng) override;

  // Index of `item` at the current step; 1 for unobserved items.
  double upper_bound(ItemId item) const;
  // ln t + 3 ln ln t, held at its t = 5 value for earlier steps.
  static double step_radius(std::uint64_t step);

  std::uint64_t step() const { return step_; }
  std::span<const std::uint64_t> observations() const { return observations_; }
  std::span<const std::uint64_t> clicks() const { return clicks_; }

 private:
  std::size_t num_items_;
  std::size_t num_positions_;
  std::uint64_t step_ = 1;
  std::vector<std::uint64_t> observations_;  // indexed item - 1
  std::vector<std::uint64_t> clicks_;
  std::vector<double> indices_;
  std::vector<ItemId> order_;
  RankedList pending_;
  bool has_pending_ = false;
};

// Ranked bandits with one Exp3 instance per position. Items already placed
// at higher positions are excluded and the remaining probabilities
// renormalized; the effective probability drives the importance weight.
class RankedExp3 final : public Learner {
 public:
  RankedExp3(std::size_t num_items, std::size_t num_positions, double gamma);

  // min(1, sqrt(L ln L / ((e - 1) T))).
  static double default_gamma(std::size_t num_items, std::uint64_t horizon);

  std::string_view name() const override { return "rankedexp3"; }
  RankedList choose(Rng& rng) override;
  void update(const RankedList& list, std::span<const std::uint8_t> clicks, Rng& rng) override;

  double gamma() const { return gamma_; }
  // gamma-mixed distribution of the Exp3 instance at `position`, over all items.
  std::vector<double> distribution(std::size_t position) const;
  // Effective probabilities with which the last chosen items were sampled.
  std::span<const double> sampling_probabilities() const { return sampled_prob_; }
  // Weight of `item` at `position`, relative to the largest weight there.
  double relative_weight(std::size_t position, ItemId item) const;

 private:
  void refresh(std::size_t position);

  std::size_t num_items_;
  std::size_t num_positions_;
  double gamma_;
  // Per position: log-weights, exp(log_w - max) and their sum.
  std::vector<std::vector<double>> log_weights_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> weight_sums_;
  std::vector<double> sampled_prob_;
  std::vector<std::uint8_t> placed_;
  RankedList pending_;
  bool has_pending_ = false;
};

// Always shows a fixed list. Used as a zero-regret reference.
class FixedListLearner final : public Learner {
 public:
  explicit FixedListLearner(RankedList list) : list_(std::move(list)) {}

  std::string_view name() const override { return "optimal"; }
  RankedList choose(Rng&) override { return list_; }
  void update(const RankedList&, std::span<const std::uint8_t>, Rng&) override {}

 private:
  RankedList list_;
};

}  // namespace clickbandit
