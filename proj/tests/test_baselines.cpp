#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "clickbandit/baselines.hpp"
#include "clickbandit/click_models.hpp"
#include "clickbandit/error.hpp"
#include "clickbandit/kl_math.hpp"

namespace {

using namespace clickbandit;

using Clicks = std::vector<std::uint8_t>;

TEST(CascadeKlUcb, FirstListIsRandomSubset) {
  std::set<std::vector<ItemId>> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CascadeKlUcb learner(4, 2);
    Rng rng(seed);
    const auto l = learner.choose(rng);
    ASSERT_TRUE(l.is_valid(4, 2));
    seen.insert({l.items().begin(), l.items().end()});
  }
  EXPECT_EQ(seen.size(), 12u);
}

TEST(CascadeKlUcb, FeedbackIsReadAsCascade) {
  CascadeKlUcb learner(5, 4);
  Rng rng(1);
  auto l = learner.choose(rng);
  learner.update(l, Clicks{0, 1, 0, 1}, rng);
  const auto obs = learner.observations();
  const auto clicks = learner.clicks();
  EXPECT_EQ(obs[l.at_position(1) - 1], 1u);
  EXPECT_EQ(obs[l.at_position(2) - 1], 1u);
  EXPECT_EQ(obs[l.at_position(3) - 1], 0u);
  EXPECT_EQ(obs[l.at_position(4) - 1], 0u);
  EXPECT_EQ(clicks[l.at_position(2) - 1], 1u);
  EXPECT_EQ(clicks[l.at_position(4) - 1], 0u);
  EXPECT_EQ(std::accumulate(clicks.begin(), clicks.end(), 0u), 1u);

  l = learner.choose(rng);
  const auto before = std::vector<std::uint64_t>(obs.begin(), obs.end());
  learner.update(l, Clicks{0, 0, 0, 0}, rng);
  for (std::size_t k = 1; k <= 4; ++k) {
    EXPECT_EQ(learner.observations()[l.at_position(k) - 1], before[l.at_position(k) - 1] + 1);
  }

  l = learner.choose(rng);
  const auto before2 = std::vector<std::uint64_t>(learner.observations().begin(),
                                                  learner.observations().end());
  learner.update(l, Clicks{1, 1, 1, 1}, rng);
  std::uint64_t increments = 0;
  for (std::size_t d = 0; d < 5; ++d) increments += learner.observations()[d] - before2[d];
  EXPECT_EQ(increments, 1u);
  EXPECT_EQ(learner.step(), 4u);
}

TEST(CascadeKlUcb, HighClickRateRanksFirst) {
  CascadeKlUcb learner(3, 1);
  Rng rng(3);
  // Item shown alone at position 1 always clicks; others never do.
  for (int t = 0; t < 300; ++t) {
    const auto l = learner.choose(rng);
    learner.update(l, Clicks{static_cast<std::uint8_t>(l.at_position(1) == 2 ? 1 : 0)}, rng);
  }
  EXPECT_GT(learner.upper_bound(2), learner.upper_bound(1));
  EXPECT_GT(learner.upper_bound(2), learner.upper_bound(3));
  EXPECT_EQ(learner.choose(rng).at_position(1), 2u);
  const double radius = CascadeKlUcb::step_radius(learner.step());
  const auto n = learner.observations()[0];
  EXPECT_DOUBLE_EQ(learner.upper_bound(1), kl::kl_ucb_upper(0.0, n, radius));
}

TEST(CascadeKlUcb, RadiusIsClampedEarly) {
  EXPECT_EQ(CascadeKlUcb::step_radius(1), kl::horizon_radius(5.0));
  EXPECT_EQ(CascadeKlUcb::step_radius(4), kl::horizon_radius(5.0));
  EXPECT_EQ(CascadeKlUcb::step_radius(100), kl::horizon_radius(100.0));
}

TEST(CascadeKlUcb, RejectsUpdateWithoutChoose) {
  CascadeKlUcb learner(3, 2);
  Rng rng(1);
  EXPECT_THROW(learner.update(RankedList({1, 2}), Clicks{0, 0}, rng), Error);
}

TEST(RankedExp3, DefaultGamma) {
  EXPECT_NEAR(RankedExp3::default_gamma(10, 1000000),
              std::sqrt(10 * std::log(10.0) / ((std::exp(1.0) - 1) * 1e6)), 1e-15);
  EXPECT_EQ(RankedExp3::default_gamma(10, 5), 1.0);
}

TEST(RankedExp3, FullExplorationIsUniformOverRemainingItems) {
  RankedExp3 learner(4, 3, 1.0);
  Rng rng(5);
  // Weights far from uniform; gamma = 1 must ignore them.
  for (int t = 0; t < 50; ++t) {
    const auto l = learner.choose(rng);
    learner.update(l, Clicks{1, 1, 1}, rng);
  }
  for (int t = 0; t < 20; ++t) {
    learner.choose(rng);
    const auto p = learner.sampling_probabilities();
    EXPECT_NEAR(p[0], 1.0 / 4, 1e-15);
    EXPECT_NEAR(p[1], 1.0 / 3, 1e-15);
    EXPECT_NEAR(p[2], 1.0 / 2, 1e-15);
  }
}

TEST(RankedExp3, ZeroClicksKeepWeightsUniform) {
  RankedExp3 learner(5, 2, 0.1);
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    const auto l = learner.choose(rng);
    learner.update(l, Clicks{0, 0}, rng);
  }
  for (std::size_t k = 1; k <= 2; ++k) {
    for (double p : learner.distribution(k)) EXPECT_DOUBLE_EQ(p, 0.2);
  }
}

TEST(RankedExp3, DistributionHasExplorationFloor) {
  RankedExp3 learner(4, 2, 0.2);
  Rng rng(6);
  for (int t = 0; t < 2000; ++t) {
    const auto l = learner.choose(rng);
    learner.update(l, Clicks{static_cast<std::uint8_t>(l.at_position(1) == 1), 0}, rng);
    for (std::size_t k = 1; k <= 2; ++k) {
      const auto p = learner.distribution(k);
      EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
      for (double v : p) EXPECT_GE(v, 0.2 / 4 - 1e-15);
    }
  }
  EXPECT_EQ(learner.relative_weight(1, 1), 1.0);
}

TEST(RankedExp3, UpdateUsesRecordedProbability) {
  RankedExp3 learner(3, 1, 0.5);
  Rng rng(8);
  const auto l = learner.choose(rng);
  const double p = learner.sampling_probabilities()[0];
  EXPECT_DOUBLE_EQ(p, 1.0 / 3);
  learner.update(l, Clicks{1}, rng);
  const ItemId other = l.at_position(1) == 1 ? 2 : 1;
  EXPECT_NEAR(learner.relative_weight(1, other), std::exp(-0.5 / (p * 3)), 1e-15);
}

TEST(RankedExp3, ConvergesOnEasyInstance) {
  const ClickModel model(PbmParams{AttractionParams({0.9, 0.1, 0.1}), {1.0}});
  constexpr std::uint64_t kHorizon = 100000;
  RankedExp3 learner(3, 1, RankedExp3::default_gamma(3, kHorizon));
  Rng env = Rng::for_stream(0, 0), rng = Rng::for_stream(0, 1);
  std::uint64_t best = 0;
  for (std::uint64_t t = 0; t < kHorizon; ++t) {
    const auto l = learner.choose(rng);
    if (t >= kHorizon - kHorizon / 10 && l.at_position(1) == 1) ++best;
    learner.update(l, model.sample_step(l, env).clicks, rng);
  }
  EXPECT_GT(double(best) / (kHorizon / 10), 0.8);
}

TEST(Learners, DeterministicAndInterchangeable) {
  const ClickModel model(PbmParams{AttractionParams({0.7, 0.5, 0.3, 0.2}), {1.0, 0.5}});
  auto trace = [&](auto make) {
    std::unique_ptr<Learner> learner = make();
    Rng env(1), rng(2);
    std::vector<ItemId> out;
    for (int t = 0; t < 3000; ++t) {
      const auto l = learner->choose(rng);
      out.insert(out.end(), l.items().begin(), l.items().end());
      learner->update(l, model.sample_step(l, env).clicks, rng);
    }
    return out;
  };
  auto ucb = [] { return std::make_unique<CascadeKlUcb>(4, 2); };
  auto exp3 = [] { return std::make_unique<RankedExp3>(4, 2, 0.05); };
  EXPECT_EQ(trace(ucb), trace(ucb));
  EXPECT_EQ(trace(exp3), trace(exp3));
}

}  // namespace
