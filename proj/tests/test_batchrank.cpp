#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "clickbandit/batchrank.hpp"
#include "clickbandit/click_models.hpp"
#include "clickbandit/error.hpp"
#include "clickbandit/kl_math.hpp"

namespace {

using namespace clickbandit;

std::vector<std::uint8_t> no_clicks(std::size_t k) { return std::vector<std::uint8_t>(k, 0); }

// Checks the batch structure after an update; returns a failure message or "".
std::string structure_error(const BatchRank& learner) {
  std::size_t next = 1;
  for (BatchId id : learner.active()) {
    const Batch& b = learner.batch(id);
    if (b.first_position != next) return "positions do not tile [K]";
    next = b.last_position + 1;
    if (b.items.size() < b.length()) return "batch has fewer items than positions";
    if (b.last_position < learner.num_positions() && b.items.size() != b.length()) {
      return "inner batch has spare items";
    }
    if (b.max_observations() - b.min_observations() > 1) return "counts differ by more than 1";
    const auto n = stage_length(b.stage, learner.horizon());
    for (std::size_t i = 0; i < b.items.size(); ++i) {
      if (b.clicks[i] > b.observations[i] || b.observations[i] > n) return "counter out of range";
    }
  }
  if (next != learner.num_positions() + 1) return "positions do not cover [K]";
  if (learner.max_batch_id() > 2 * learner.num_positions()) return "too many batches";
  return "";
}

TEST(StageLength, Values) {
  EXPECT_EQ(stage_length(0, 100), 74u);
  EXPECT_EQ(stage_length(1, 100), 295u);
  // Longer than the horizon: the stage never completes.
  EXPECT_EQ(stage_length(2, 100), 1179u);
  EXPECT_GT(stage_length(60, 1000000), 1000000u);
  for (std::uint32_t l = 0; l < 6; ++l) {
    const double ratio = double(stage_length(l + 1, 10000000)) / double(stage_length(l, 10000000));
    EXPECT_NEAR(ratio, 4.0, 0.02);
  }
  EXPECT_THROW(stage_length(0, 4), Error);
}

TEST(Display, FreshStateShowsAPermutation) {
  BatchRank learner(4, 4, 1000);
  Rng rng(1);
  auto l = learner.choose(rng);
  auto items = std::vector<ItemId>(l.items().begin(), l.items().end());
  std::sort(items.begin(), items.end());
  EXPECT_EQ(items, (std::vector<ItemId>{1, 2, 3, 4}));
}

TEST(Display, OrderIsUniform) {
  BatchRank learner(3, 3, 1000000);
  Rng rng(7);
  std::map<std::vector<ItemId>, int> counts;
  constexpr int kDraws = 120000;
  for (int i = 0; i < kDraws; ++i) {
    const auto l = learner.display(rng);
    counts[std::vector<ItemId>(l.items().begin(), l.items().end())]++;
  }
  ASSERT_EQ(counts.size(), 6u);
  double chi2 = 0.0;
  const double expected = kDraws / 6.0;
  for (const auto& [_, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 20.52);  // chi-square, 5 dof, p = 0.001
}

TEST(Display, SubsetIsUniformWhenCountsTie) {
  BatchRank learner(5, 2, 1000000);
  Rng rng(9);
  std::vector<int> shown(6, 0);
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const auto l = learner.display(rng);
    for (ItemId d : l.items()) shown[d]++;
  }
  double chi2 = 0.0;
  const double expected = kDraws * 2.0 / 5.0;
  for (ItemId d = 1; d <= 5; ++d) chi2 += (shown[d] - expected) * (shown[d] - expected) / expected;
  EXPECT_LT(chi2, 18.47);  // 4 dof, p = 0.001
}

TEST(Display, LeastObservedItemsAreShown) {
  BatchRank learner(5, 2, 1000000);
  Rng rng(4);
  for (int step = 0; step < 200; ++step) {
    const Batch& b = learner.batch(1);
    const auto n_min = b.min_observations();
    std::size_t at_min = 0;
    for (auto n : b.observations) at_min += n == n_min;
    const auto l = learner.choose(rng);
    std::size_t shown_at_min = 0;
    for (ItemId d : l.items()) {
      const auto idx = std::find(b.items.begin(), b.items.end(), d) - b.items.begin();
      shown_at_min += b.observations[idx] == n_min;
    }
    EXPECT_EQ(shown_at_min, std::min<std::size_t>(at_min, 2));
    learner.update(l, no_clicks(2), rng);
  }
}

TEST(FeedClicks, OnlyMinimumCountItemsAreCredited) {
  BatchRank learner(3, 2, 1000000);
  Rng rng(2);
  std::vector<ObservationRecord> log;
  learner.set_observation_hook([&](const ObservationRecord& r) { log.push_back(r); });
  // Step 1: two of three items are shown and credited.
  auto l = learner.choose(rng);
  learner.update(l, std::vector<std::uint8_t>{1, 1}, rng);
  ASSERT_EQ(log.size(), 2u);
  // Step 2: the unseen item is shown together with an item already at count 1.
  log.clear();
  l = learner.choose(rng);
  learner.update(l, std::vector<std::uint8_t>{1, 1}, rng);
  ASSERT_EQ(log.size(), 1u);
  const Batch& b = learner.batch(1);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(b.observations[i], 1u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(b.clicks[i], 1u);
}

TEST(FeedClicks, RejectsMisuse) {
  BatchRank learner(3, 2, 1000);
  Rng rng(1);
  try {
    learner.update(RankedList({1, 2}), no_clicks(2), rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kState);
  }
  const auto l = learner.choose(rng);
  try {
    learner.update(l, no_clicks(3), rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimension);
  }
  auto other = l;
  std::swap(other.mutable_items()[0], other.mutable_items()[1]);
  EXPECT_THROW(learner.update(other, no_clicks(2), rng), Error);
  EXPECT_THROW(BatchRank(2, 3, 1000), Error);
}

TEST(FeedClicks, StageEndsExactlyWhenAllItemsReachStageLength) {
  constexpr std::uint64_t kHorizon = 1000;
  BatchRank learner(3, 2, kHorizon);
  Rng rng(3);
  const auto n0 = stage_length(0, kHorizon);  // 111
  std::uint64_t step = 0;
  std::vector<LearnerEvent> events;
  while (events.empty()) {
    const auto l = learner.choose(rng);
    learner.update(l, no_clicks(2), rng);
    learner.drain_events(events);
    ++step;
  }
  // Three items, two slots: each sweep of one fresh observation per item takes two steps,
  // since the second step only credits the item still at the minimum.
  EXPECT_EQ(step, 2 * n0);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].type, EventType::kStageAdvance);
  EXPECT_EQ(learner.batch(1).stage, 1u);
  EXPECT_EQ(learner.batch(1).items.size(), 3u);
}

TEST(FeedClicks, ZeroClicksNeverSplit) {
  BatchRank learner(2, 1, 100000);
  Rng rng(5);
  std::vector<LearnerEvent> events;
  for (int t = 0; t < 20000; ++t) {
    const auto l = learner.choose(rng);
    learner.update(l, no_clicks(1), rng);
  }
  learner.drain_events(events);
  ASSERT_FALSE(events.empty());
  for (const auto& e : events) EXPECT_EQ(e.type, EventType::kStageAdvance);
  EXPECT_EQ(learner.active().size(), 1u);
  EXPECT_EQ(learner.batch(1).items.size(), 2u);
}

Batch make_batch(std::size_t first, std::size_t last, std::vector<ItemId> items,
                 std::vector<std::uint64_t> clicks, std::uint64_t n, std::uint32_t stage = 0) {
  Batch b;
  b.id = 1;
  b.stage = stage;
  b.first_position = first;
  b.last_position = last;
  b.items = std::move(items);
  b.clicks = std::move(clicks);
  b.observations.assign(b.items.size(), n);
  return b;
}

TEST(SplitOrEliminate, EliminatesItemsThatCannotReachLowestPosition) {
  constexpr std::uint64_t kHorizon = 1000;
  const auto n = stage_length(0, kHorizon);
  const auto b = make_batch(1, 2, {1, 2, 3}, {n * 6 / 10, n * 6 / 10, 0}, n);
  // Hand check: the zero-click item's upper bound sits below the second lower bound.
  const double radius = kl::horizon_radius(kHorizon);
  const double mean = double(n * 6 / 10) / double(n);
  ASSERT_LT(kl::kl_ucb_upper(0.0, n, radius), kl::kl_ucb_lower(mean, n, radius));
  Rng rng(1);
  const auto outcome = split_or_eliminate(b, kHorizon, rng);
  const auto* advance = std::get_if<AdvanceStage>(&outcome);
  ASSERT_NE(advance, nullptr);
  EXPECT_EQ(advance->survivors, (std::vector<ItemId>{1, 2}));
  EXPECT_EQ(advance->eliminated, (std::vector<ItemId>{3}));
}

TEST(SplitOrEliminate, ChoosesHighestSeparableSplit) {
  constexpr std::uint64_t kHorizon = 1000000;
  const auto n = stage_length(3, kHorizon);
  const auto b = make_batch(1, 3, {4, 5, 6}, {n * 9 / 10, n / 2, n / 10}, n, 3);
  Rng rng(1);
  const auto outcome = split_or_eliminate(b, kHorizon, rng);
  const auto* split = std::get_if<SplitBatch>(&outcome);
  ASSERT_NE(split, nullptr);
  EXPECT_EQ(split->split, 2u);
  EXPECT_EQ(split->upper_items, (std::vector<ItemId>{4, 5}));
  EXPECT_EQ(split->lower_items, (std::vector<ItemId>{6}));
}

TEST(SplitOrEliminate, EqualEstimatesKeepEveryItem) {
  constexpr std::uint64_t kHorizon = 100000;
  const auto n = stage_length(2, kHorizon);
  const auto b = make_batch(2, 3, {1, 2, 3, 4}, {n / 3, n / 3, n / 3, n / 3}, n, 2);
  Rng rng(1);
  const auto outcome = split_or_eliminate(b, kHorizon, rng);
  const auto* advance = std::get_if<AdvanceStage>(&outcome);
  ASSERT_NE(advance, nullptr);
  EXPECT_EQ(advance->survivors.size(), 4u);
  EXPECT_TRUE(advance->eliminated.empty());
}

TEST(SplitOrEliminate, RequiresCompleteStage) {
  const auto b = make_batch(1, 1, {1, 2}, {0, 0}, 3);
  Rng rng(1);
  try {
    split_or_eliminate(b, 1000, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kState);
  }
}

TEST(BatchRankRun, ChildrenAreFreshAndAbut) {
  const ClickModel model(CmParams{AttractionParams({0.9, 0.6, 0.3, 0.1}), 3});
  BatchRank learner(4, 3, 200000);
  Rng env = Rng::for_stream(1, 0), rng = Rng::for_stream(1, 1);
  std::vector<LearnerEvent> events;
  for (int t = 0; t < 200000; ++t) {
    const auto l = learner.choose(rng);
    learner.update(l, model.sample_step(l, env).clicks, rng);
    learner.drain_events(events);
    for (const auto& e : events) {
      if (e.type != EventType::kSplit) continue;
      const Batch& parent = learner.batch(e.batch_id);
      const Batch& up = learner.batch(learner.max_batch_id() - 1);
      const Batch& down = learner.batch(learner.max_batch_id());
      EXPECT_EQ(up.first_position, parent.first_position);
      EXPECT_EQ(up.last_position + 1, down.first_position);
      EXPECT_EQ(down.last_position, parent.last_position);
      EXPECT_EQ(up.items.size(), up.length());
      EXPECT_EQ(up.items.size() + down.items.size(), parent.items.size());
      for (const Batch* c : {&up, &down}) {
        EXPECT_EQ(c->stage, 0u);
        for (auto v : c->observations) EXPECT_EQ(v, 0u);
        for (auto v : c->clicks) EXPECT_EQ(v, 0u);
      }
      EXPECT_EQ(std::count(learner.active().begin(), learner.active().end(), e.batch_id), 0);
    }
    events.clear();
    ASSERT_EQ(structure_error(learner), "") << "step " << t;
  }
  EXPECT_GT(learner.max_batch_id(), 1u);
}

// At each stage end the learner's click estimate is the mean of the credited
// observations of that stage.
TEST(BatchRankRun, EstimatorIsMeanOfCreditedObservations) {
  const ClickModel model(PbmParams{AttractionParams({0.8, 0.5, 0.4, 0.2}), {1.0, 0.6}});
  constexpr std::uint64_t kHorizon = 20000;
  BatchRank learner(4, 2, kHorizon);
  std::map<std::tuple<BatchId, std::uint32_t, ItemId>, std::pair<std::uint64_t, std::uint64_t>> log;
  learner.set_observation_hook([&](const ObservationRecord& r) {
    auto& [clicks, count] = log[{r.batch_id, r.stage, r.item}];
    clicks += r.click;
    count += 1;
  });
  Rng env(3), rng(4);
  for (std::uint64_t t = 0; t < kHorizon; ++t) {
    // Snapshot counters before the update to compare with the log afterwards.
    const auto l = learner.choose(rng);
    learner.update(l, model.sample_step(l, env).clicks, rng);
    for (BatchId id : learner.active()) {
      const Batch& b = learner.batch(id);
      for (std::size_t i = 0; i < b.items.size(); ++i) {
        const auto it = log.find({id, b.stage, b.items[i]});
        const std::uint64_t logged_clicks = it == log.end() ? 0 : it->second.first;
        const std::uint64_t logged_count = it == log.end() ? 0 : it->second.second;
        ASSERT_EQ(b.clicks[i], logged_clicks);
        ASSERT_EQ(b.observations[i], logged_count);
      }
    }
  }
  // Every completed stage logged exactly n_stage observations per item.
  for (const auto& [key, value] : log) {
    const auto& [id, stage, item] = key;
    const Batch& b = learner.batch(id);
    const bool completed = b.stage > stage || std::find(learner.active().begin(),
                                                        learner.active().end(), id) ==
                                                  learner.active().end();
    if (completed) {
      EXPECT_EQ(value.second, stage_length(stage, kHorizon));
    }
  }
}

TEST(BatchRankRun, ConvergesOnSmallCascadeInstance) {
  const ClickModel model(CmParams{AttractionParams({0.9, 0.5, 0.1}), 2});
  const RankedList best = model.optimal_list();
  const double best_reward = model.expected_reward(best);
  for (std::uint64_t seed : {0, 1, 2}) {
    constexpr std::uint64_t kHorizon = 100000;
    BatchRank learner(3, 2, kHorizon);
    Rng env = Rng::for_stream(seed, 0), rng = Rng::for_stream(seed, 1);
    double first = 0.0, last = 0.0;
    for (std::uint64_t t = 0; t < kHorizon; ++t) {
      const auto l = learner.choose(rng);
      const double regret = best_reward - model.expected_reward(l);
      if (t < kHorizon / 10) first += regret;
      if (t >= kHorizon - kHorizon / 10) last += regret;
      learner.update(l, model.sample_step(l, env).clicks, rng);
    }
    EXPECT_LT(last, 0.1 * first) << "seed " << seed;
    std::set<ItemId> shown;
    for (BatchId id : learner.active()) {
      for (ItemId d : learner.batch(id).items) shown.insert(d);
    }
    EXPECT_EQ(shown, (std::set<ItemId>{1, 2})) << "seed " << seed;
  }
}

// On well-separated instances no optimal item is eliminated from a batch
// covering its optimal position.
TEST(BatchRankRun, EliminationsAreSound) {
  const std::vector<ClickModel> models{
      ClickModel(CmParams{AttractionParams({0.9, 0.6, 0.3, 0.1, 0.05}), 3}),
      ClickModel(PbmParams{AttractionParams({0.9, 0.6, 0.3, 0.1, 0.05}), {1.0, 0.7, 0.5}})};
  constexpr std::uint64_t kHorizon = 100000;
  int violations = 0;
  int runs = 0;
  for (const auto& model : models) {
    const auto best = model.optimal_list();
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      ++runs;
      BatchRank learner(5, 3, kHorizon);
      Rng env = Rng::for_stream(seed, 0), rng = Rng::for_stream(seed, 1);
      std::vector<LearnerEvent> events;
      for (std::uint64_t t = 0; t < kHorizon; ++t) {
        const auto l = learner.choose(rng);
        learner.update(l, model.sample_step(l, env).clicks, rng);
        learner.drain_events(events);
      }
      bool bad = false;
      for (BatchId id : learner.active()) {
        const Batch& b = learner.batch(id);
        for (std::size_t k = b.first_position; k <= b.last_position; ++k) {
          const ItemId d = best.at_position(k);
          bad = bad || std::find(b.items.begin(), b.items.end(), d) == b.items.end();
        }
      }
      violations += bad;
    }
  }
  // Failure envelope 4KL(3e + K)/T per run.
  const double envelope = runs * 4.0 * 3 * 5 * (3 * std::exp(1.0) + 3) / double(kHorizon);
  EXPECT_LE(violations, std::max(0.0, std::floor(envelope)));
}

TEST(BatchRankRun, DeterministicForSeed) {
  const ClickModel model(PbmParams{AttractionParams({0.7, 0.5, 0.3, 0.2}), {1.0, 0.5}});
  auto trace = [&](std::uint64_t seed) {
    BatchRank learner(4, 2, 5000);
    Rng env = Rng::for_stream(seed, 0), rng = Rng::for_stream(seed, 1);
    std::vector<ItemId> out;
    for (int t = 0; t < 5000; ++t) {
      const auto l = learner.choose(rng);
      out.insert(out.end(), l.items().begin(), l.items().end());
      learner.update(l, model.sample_step(l, env).clicks, rng);
    }
    return out;
  };
  EXPECT_EQ(trace(12), trace(12));
  EXPECT_NE(trace(12), trace(13));
}

}  // namespace
