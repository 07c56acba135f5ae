#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "clickbandit/rng.hpp"

namespace clickbandit {

// Items are identified by 1..L; positions are numbered 1..K.
using ItemId = std::uint32_t;

// Attraction probabilities alpha(d) of items d = 1..L.
class AttractionParams {
 public:
  AttractionParams() = default;
  explicit AttractionParams(std::vector<double> alpha);

  std::size_t num_items() const { return alpha_.size(); }
  double operator()(ItemId item) const { return alpha_[item - 1]; }
  std::span<const double> values() const { return alpha_; }
  double max() const;
  // alpha(1) >= ... >= alpha(L), the canonical instance ordering.
  bool is_sorted() const;

 private:
  std::vector<double> alpha_;
};

// Ordered K-tuple of distinct item ids.
class RankedList {
 public:
  RankedList() = default;
  explicit RankedList(std::vector<ItemId> items) : items_(std::move(items)) {}

  std::size_t size() const { return items_.size(); }
  // Item at position k, 1 <= k <= K.
  ItemId at_position(std::size_t k) const { return items_[k - 1]; }
  std::span<const ItemId> items() const { return items_; }
  std::span<ItemId> mutable_items() { return items_; }

  // Distinct ids in 1..num_items and exactly num_positions entries.
  bool is_valid(std::size_t num_items, std::size_t num_positions) const;

  friend bool operator==(const RankedList&, const RankedList&) = default;

 private:
  std::vector<ItemId> items_;
};

struct CmParams {
  AttractionParams attraction;
  std::size_t num_positions = 0;
};

struct PbmParams {
  AttractionParams attraction;
  std::vector<double> chi;  // chi[k - 1] = examination probability of position k
};

// One step of user randomness and the clicks it produced on a list.
struct SampleOutcome {
  std::vector<std::uint8_t> attraction;   // A_t(d), indexed d - 1, all L items
  std::vector<std::uint8_t> examination;  // X_t(R_t, k), indexed k - 1
  std::vector<std::uint8_t> clicks;       // c_t(k), indexed k - 1
};

enum class ModelKind { kCascade, kPositionBased };

std::string_view to_string(ModelKind kind);

// Cascade or position-based click model. Immutable after construction.
class ClickModel {
 public:
  explicit ClickModel(CmParams params);
  explicit ClickModel(PbmParams params);

  ModelKind kind() const;
  std::size_t num_items() const { return attraction().num_items(); }
  std::size_t num_positions() const { return num_positions_; }
  const AttractionParams& attraction() const;
  // Position examination probabilities; empty for the cascade model.
  std::span<const double> chi() const;

  // Draws A_t for all items, X_t for the displayed list, and the clicks.
  void sample_step(const RankedList& list, Rng& rng, SampleOutcome& out) const;
  SampleOutcome sample_step(const RankedList& list, Rng& rng) const;

  // r(R, alpha, chi): expected number of clicks on the list.
  double expected_reward(const RankedList& list) const;

  // chi(R, k) for 1 <= k <= K.
  double examination_prob(const RankedList& list, std::size_t position) const;

  // The K most attractive items in decreasing attraction order.
  // Throws Error(kAmbiguous) when the optimal set is not unique.
  RankedList optimal_list() const;

  // r(list, A_t, X_t) for the attraction draw in `outcome`. For the cascade
  // model X_t is recomputed from A_t; for the position-based model the
  // position examination draw in `outcome` is reused.
  double realized_reward(const RankedList& list, const SampleOutcome& outcome) const;

  // r(R*, A_t, X_t) - r(chosen, A_t, X_t) on a shared draw.
  double realized_regret(const RankedList& chosen, const SampleOutcome& outcome) const;

 private:
  void check_list(const RankedList& list) const;

  std::variant<CmParams, PbmParams> params_;
  std::size_t num_positions_ = 0;
};

}  // namespace clickbandit
