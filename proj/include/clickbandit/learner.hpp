#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clickbandit/click_models.hpp"
#include "clickbandit/rng.hpp"

namespace clickbandit {

enum class EventType { kSplit, kEliminate, kStageAdvance };

std::string_view to_string(EventType type);

// Structural change reported by a learner, for the harness event log.
struct LearnerEvent {
  EventType type;
  std::uint32_t batch_id = 0;
  std::string detail;
};

// Online learning-to-rank agent: choose a list, then observe its clicks.
// Each instance is owned by a single run.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual std::string_view name() const = 0;
  virtual RankedList choose(Rng& rng) = 0;
  // `list` must be the result of the immediately preceding choose().
  virtual void update(const RankedList& list, std::span<const std::uint8_t> clicks, Rng& rng) = 0;

  // Moves the events recorded since the last call into `out`.
  virtual void drain_events(std::vector<LearnerEvent>& out) { (void)out; }
};

}  // namespace clickbandit
