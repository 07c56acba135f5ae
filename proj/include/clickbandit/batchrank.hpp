#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "clickbandit/click_models.hpp"
#include "clickbandit/kl_math.hpp"
#include "clickbandit/learner.hpp"
#include "clickbandit/rng.hpp"

namespace clickbandit {

using BatchId = std::uint32_t;

// A group of items explored together over a contiguous range of positions.
// Counters are per stage and are parallel to `items`.
struct Batch {
  BatchId id = 0;
  std::size_t first_position = 1;  // highest position, I_b(1)
  std::size_t last_position = 1;   // lowest position, I_b(2)
  std::uint32_t stage = 0;
  std::vector<ItemId> items;
  std::vector<std::uint64_t> clicks;
  std::vector<std::uint64_t> observations;

  std::size_t length() const { return last_position - first_position + 1; }
  std::uint64_t min_observations() const;
  std::uint64_t max_observations() const;
};

// Number of observations per item in stage `stage`: ceil(16 * 4^stage * ln T).
// A value above T is a stage that never completes within the horizon.
std::uint64_t stage_length(std::uint32_t stage, std::uint64_t horizon);

// End-of-stage decision for a batch.
struct AdvanceStage {
  std::vector<ItemId> survivors;   // item set of the next stage
  std::vector<ItemId> eliminated;  // items dropped from the batch
};
struct SplitBatch {
  std::size_t split = 0;            // s: number of items that move up
  std::vector<ItemId> upper_items;  // top s items by lower confidence bound
  std::vector<ItemId> lower_items;
};
using BatchOutcome = std::variant<AdvanceStage, SplitBatch>;

// Computes KL-UCB bounds for every item of a batch whose stage is complete
// and decides between splitting at the highest separable s and eliminating
// items that cannot reach the batch's lowest position. Ties in the lower
// bound ordering are broken uniformly at random.
// Throws Error(kState) when some item has fewer than n_stage observations.
BatchOutcome split_or_eliminate(const Batch& batch, std::uint64_t horizon, Rng& rng);

// One credited observation, as counted by the click estimator.
struct ObservationRecord {
  BatchId batch_id;
  std::uint32_t stage;
  ItemId item;
  std::uint8_t click;
};

// BatchRank learner. Explores active batches uniformly, splits them once
// their items separate and eliminates items that cannot be ranked within
// the batch.
class BatchRank final : public Learner {
 public:
  BatchRank(std::size_t num_items, std::size_t num_positions, std::uint64_t horizon);

  std::string_view name() const override { return "batchrank"; }
  RankedList choose(Rng& rng) override { return display(rng); }
  void update(const RankedList& list, std::span<const std::uint8_t> clicks, Rng& rng) override;
  void drain_events(std::vector<LearnerEvent>& out) override;

  // Assembles the list from all active batches: in each batch the least
  // observed items are shown in a uniformly random arrangement.
  RankedList display(Rng& rng);

  // Credits clicks to displayed items at their batch's minimum count, then
  // runs end-of-stage updates. Returns the structural changes.
  std::vector<LearnerEvent> feed_clicks(const RankedList& list,
                                        std::span<const std::uint8_t> clicks, Rng& rng);

  std::size_t num_items() const { return num_items_; }
  std::size_t num_positions() const { return num_positions_; }
  std::uint64_t horizon() const { return horizon_; }
  BatchId max_batch_id() const { return static_cast<BatchId>(batches_.size()); }
  // Active batch ids ordered by position.
  std::span<const BatchId> active() const { return active_; }
  const Batch& batch(BatchId id) const { return batches_.at(id - 1); }

  void set_observation_hook(std::function<void(const ObservationRecord&)> hook) {
    observation_hook_ = std::move(hook);
  }

 private:
  struct Slot {
    BatchId batch_id;
    std::size_t index;  // into Batch::items
  };

  void end_of_stage(BatchId id, Rng& rng, std::vector<LearnerEvent>& events);

  std::size_t num_items_;
  std::size_t num_positions_;
  std::uint64_t horizon_;
  std::vector<Batch> batches_;  // batches_[id - 1]
  std::vector<BatchId> active_;
  std::vector<Slot> slots_;     // per position of the pending list
  RankedList pending_;
  bool has_pending_ = false;
  std::vector<LearnerEvent> events_;
  std::vector<std::size_t> scratch_;
  std::function<void(const ObservationRecord&)> observation_hook_;
};

}  // namespace clickbandit
