#include "clickbandit/batchrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "clickbandit/error.hpp"

namespace clickbandit {
namespace {

std::string join_ids(std::span<const ItemId> items) {
  std::string out;
  for (ItemId item : items) {
    if (!out.empty()) out += ' ';
    out += std::to_string(item);
  }
  return out;
}

void reset_counters(Batch& batch) {
  batch.clicks.assign(batch.items.size(), 0);
  batch.observations.assign(batch.items.size(), 0);
}

}  // namespace

std::uint64_t Batch::min_observations() const {
  return *std::min_element(observations.begin(), observations.end());
}

std::uint64_t Batch::max_observations() const {
  return *std::max_element(observations.begin(), observations.end());
}

std::uint64_t stage_length(std::uint32_t stage, std::uint64_t horizon) {
  if (horizon < 5) fail(ErrorCode::kDomain, "horizon must be at least 5");
  const auto t = static_cast<double>(horizon);
  // 16 * 4^stage * ln T; ldexp saturates to inf for absurd stages.
  const double value = std::ldexp(16.0 * std::log(t), 2 * static_cast<int>(std::min(stage, 4096u)));
  constexpr double kCap = 0x1p63;
  if (!(value < kCap)) return std::uint64_t{1} << 63;
  return static_cast<std::uint64_t>(std::ceil(value));
}

BatchOutcome split_or_eliminate(const Batch& batch, std::uint64_t horizon, Rng& rng) {
  const std::size_t size = batch.items.size();
  const std::size_t length = batch.length();
  const std::uint64_t n = stage_length(batch.stage, horizon);
  if (size < length || batch.min_observations() < n) {
    fail(ErrorCode::kState, "batch " + std::to_string(batch.id) + " has not completed stage " +
                                std::to_string(batch.stage));
  }

  const double radius = kl::horizon_radius(static_cast<double>(horizon));
  std::vector<kl::ConfidenceBounds> bounds(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double mean = static_cast<double>(batch.clicks[i]) / static_cast<double>(n);
    bounds[i] = kl::kl_ucb_bounds(mean, n, radius);
  }

  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span(order));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return bounds[a].lower > bounds[b].lower;
  });

  // suffix_upper[k] = max upper bound among order[k..size-1]
  std::vector<double> suffix_upper(size + 1, -1.0);
  for (std::size_t k = size; k-- > 0;) {
    suffix_upper[k] = std::max(suffix_upper[k + 1], bounds[order[k]].upper);
  }

  std::size_t split = 0;
  for (std::size_t k = 1; k < length; ++k) {
    if (bounds[order[k - 1]].lower > suffix_upper[k]) split = k;
  }

  if (split > 0) {
    SplitBatch out;
    out.split = split;
    for (std::size_t k = 0; k < size; ++k) {
      (k < split ? out.upper_items : out.lower_items).push_back(batch.items[order[k]]);
    }
    return out;
  }

  AdvanceStage out;
  const double threshold = bounds[order[length - 1]].lower;
  for (std::size_t i = 0; i < size; ++i) {
    (bounds[i].upper >= threshold ? out.survivors : out.eliminated).push_back(batch.items[i]);
  }
  return out;
}

BatchRank::BatchRank(std::size_t num_items, std::size_t num_positions, std::uint64_t horizon)
    : num_items_(num_items), num_positions_(num_positions), horizon_(horizon) {
  if (num_positions < 1 || num_positions > num_items) {
    fail(ErrorCode::kDimension, "BatchRank needs 1 <= K <= L");
  }
  if (horizon < 5) fail(ErrorCode::kDomain, "BatchRank needs a horizon of at least 5");
  Batch root;
  root.id = 1;
  root.first_position = 1;
  root.last_position = num_positions;
  root.items.resize(num_items);
  std::iota(root.items.begin(), root.items.end(), ItemId{1});
  reset_counters(root);
  batches_.push_back(std::move(root));
  active_.push_back(1);
  slots_.resize(num_positions);
}

RankedList BatchRank::display(Rng& rng) {
  std::vector<ItemId> items(num_positions_);
  for (BatchId id : active_) {
    Batch& b = batches_[id - 1];
    scratch_.resize(b.items.size());
    std::iota(scratch_.begin(), scratch_.end(), std::size_t{0});
    rng.shuffle(std::span(scratch_));
    std::stable_sort(scratch_.begin(), scratch_.end(), [&](std::size_t x, std::size_t y) {
      return b.observations[x] < b.observations[y];
    });
    const std::size_t length = b.length();
    rng.shuffle(std::span(scratch_).first(length));
    for (std::size_t j = 0; j < length; ++j) {
      const std::size_t position = b.first_position + j;
      items[position - 1] = b.items[scratch_[j]];
      slots_[position - 1] = Slot{id, scratch_[j]};
    }
  }
  pending_ = RankedList(std::move(items));
  has_pending_ = true;
  return pending_;
}

std::vector<LearnerEvent> BatchRank::feed_clicks(const RankedList& list,
                                                 std::span<const std::uint8_t> clicks,
                                                 Rng& rng) {
  if (!has_pending_) fail(ErrorCode::kState, "feed_clicks called without a preceding display");
  if (!(list == pending_)) fail(ErrorCode::kState, "list differs from the last displayed list");
  if (clicks.size() != num_positions_) {
    fail(ErrorCode::kDimension, "click vector must have one entry per position");
  }
  has_pending_ = false;

  const std::vector<BatchId> snapshot = active_;
  for (BatchId id : snapshot) {
    Batch& b = batches_[id - 1];
    const std::uint64_t n_min = b.min_observations();
    for (std::size_t position = b.first_position; position <= b.last_position; ++position) {
      const std::size_t index = slots_[position - 1].index;
      if (b.observations[index] != n_min) continue;
      const std::uint8_t click = clicks[position - 1] ? 1 : 0;
      b.clicks[index] += click;
      b.observations[index] += 1;
      if (observation_hook_) observation_hook_({id, b.stage, b.items[index], click});
    }
  }

  std::vector<LearnerEvent> events;
  for (BatchId id : snapshot) {
    const Batch& b = batches_[id - 1];
    if (b.min_observations() >= stage_length(b.stage, horizon_)) end_of_stage(id, rng, events);
  }
  return events;
}

void BatchRank::end_of_stage(BatchId id, Rng& rng, std::vector<LearnerEvent>& events) {
  BatchOutcome outcome = split_or_eliminate(batches_[id - 1], horizon_, rng);

  if (auto* advance = std::get_if<AdvanceStage>(&outcome)) {
    Batch& b = batches_[id - 1];
    if (!advance->eliminated.empty()) {
      events.push_back({EventType::kEliminate, id,
                        "stage=" + std::to_string(b.stage) +
                            ";removed=" + join_ids(advance->eliminated)});
    }
    // A batch with as many items as positions has nothing to eliminate; it
    // still moves on to the next, longer stage.
    b.items = std::move(advance->survivors);
    b.stage += 1;
    reset_counters(b);
    events.push_back({EventType::kStageAdvance, id,
                      "stage=" + std::to_string(b.stage) + ";items=" + join_ids(b.items)});
    return;
  }

  auto& split = std::get<SplitBatch>(outcome);
  const Batch& parent = batches_[id - 1];
  Batch upper;
  upper.id = static_cast<BatchId>(batches_.size() + 1);
  upper.first_position = parent.first_position;
  upper.last_position = parent.first_position + split.split - 1;
  upper.items = std::move(split.upper_items);
  reset_counters(upper);

  Batch lower;
  lower.id = upper.id + 1;
  lower.first_position = parent.first_position + split.split;
  lower.last_position = parent.last_position;
  lower.items = std::move(split.lower_items);
  reset_counters(lower);

  events.push_back({EventType::kSplit, id,
                    "s=" + std::to_string(split.split) + ";children=" + std::to_string(upper.id) +
                        " " + std::to_string(lower.id) + ";upper=" + join_ids(upper.items) +
                        ";lower=" + join_ids(lower.items)});

  auto it = std::find(active_.begin(), active_.end(), id);
  *it = lower.id;
  active_.insert(it, upper.id);
  batches_.push_back(std::move(upper));
  batches_.push_back(std::move(lower));
}

void BatchRank::update(const RankedList& list, std::span<const std::uint8_t> clicks, Rng& rng) {
  auto events = feed_clicks(list, clicks, rng);
  for (auto& e : events) events_.push_back(std::move(e));
}

void BatchRank::drain_events(std::vector<LearnerEvent>& out) {
  for (auto& e : events_) out.push_back(std::move(e));
  events_.clear();
}

std::string_view to_string(EventType type) {
  switch (type) {
    case EventType::kSplit: return "split";
    case EventType::kEliminate: return "eliminate";
    case EventType::kStageAdvance: return "stage_advance";
  }
  return "unknown";
}

}  // namespace clickbandit
