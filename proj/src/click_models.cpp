#include "clickbandit/click_models.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "clickbandit/error.hpp"

namespace clickbandit {
namespace {

void require_probabilities(std::span<const double> values, const char* name) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      fail(ErrorCode::kDomain, std::string(name) + "[" + std::to_string(i + 1) +
                                   "] must lie in [0, 1], got " + std::to_string(values[i]));
    }
  }
}

}  // namespace

AttractionParams::AttractionParams(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) fail(ErrorCode::kDomain, "at least one item is required");
  require_probabilities(alpha_, "alpha");
}

double AttractionParams::max() const { return *std::max_element(alpha_.begin(), alpha_.end()); }

bool AttractionParams::is_sorted() const {
  return std::is_sorted(alpha_.begin(), alpha_.end(), std::greater<>());
}

bool RankedList::is_valid(std::size_t num_items, std::size_t num_positions) const {
  if (items_.size() != num_positions) return false;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i] < 1 || items_[i] > num_items) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if (items_[j] == items_[i]) return false;
    }
  }
  return true;
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::kCascade ? "cm" : "pbm";
}

ClickModel::ClickModel(CmParams params) : params_(std::move(params)) {
  const auto& cm = std::get<CmParams>(params_);
  if (cm.attraction.num_items() == 0) fail(ErrorCode::kDomain, "at least one item is required");
  if (cm.num_positions < 1 || cm.num_positions > cm.attraction.num_items()) {
    fail(ErrorCode::kDimension, "cascade model needs 1 <= K <= L");
  }
  num_positions_ = cm.num_positions;
}

ClickModel::ClickModel(PbmParams params) : params_(std::move(params)) {
  const auto& pbm = std::get<PbmParams>(params_);
  if (pbm.attraction.num_items() == 0) fail(ErrorCode::kDomain, "at least one item is required");
  if (pbm.chi.empty() || pbm.chi.size() > pbm.attraction.num_items()) {
    fail(ErrorCode::kDimension, "position-based model needs 1 <= K <= L");
  }
  require_probabilities(pbm.chi, "chi");
  if (!std::is_sorted(pbm.chi.begin(), pbm.chi.end(), std::greater<>())) {
    fail(ErrorCode::kDomain, "chi must be nonincreasing in the position");
  }
  num_positions_ = pbm.chi.size();
}

ModelKind ClickModel::kind() const {
  return std::holds_alternative<CmParams>(params_) ? ModelKind::kCascade
                                                   : ModelKind::kPositionBased;
}

const AttractionParams& ClickModel::attraction() const {
  return std::visit([](const auto& p) -> const AttractionParams& { return p.attraction; },
                    params_);
}

std::span<const double> ClickModel::chi() const {
  if (const auto* pbm = std::get_if<PbmParams>(&params_)) return pbm->chi;
  return {};
}

void ClickModel::check_list(const RankedList& list) const {
  if (!list.is_valid(num_items(), num_positions_)) {
    fail(ErrorCode::kDimension, "ranked list must hold " + std::to_string(num_positions_) +
                                    " distinct items from 1.." + std::to_string(num_items()));
  }
}

void ClickModel::sample_step(const RankedList& list, Rng& rng, SampleOutcome& out) const {
  check_list(list);
  const auto& alpha = attraction().values();
  const std::size_t num_positions = num_positions_;
  out.attraction.resize(alpha.size());
  out.examination.resize(num_positions);
  out.clicks.resize(num_positions);
  for (std::size_t d = 0; d < alpha.size(); ++d) {
    out.attraction[d] = rng.bernoulli(alpha[d]) ? 1 : 0;
  }

  if (const auto* pbm = std::get_if<PbmParams>(&params_)) {
    for (std::size_t k = 0; k < num_positions; ++k) {
      out.examination[k] = rng.bernoulli(pbm->chi[k]) ? 1 : 0;
    }
  } else {
    std::uint8_t examined = 1;
    for (std::size_t k = 0; k < num_positions; ++k) {
      out.examination[k] = examined;
      if (out.attraction[list.items()[k] - 1]) examined = 0;
    }
  }

  for (std::size_t k = 0; k < num_positions; ++k) {
    out.clicks[k] = out.examination[k] & out.attraction[list.items()[k] - 1];
  }
}

SampleOutcome ClickModel::sample_step(const RankedList& list, Rng& rng) const {
  SampleOutcome out;
  sample_step(list, rng, out);
  return out;
}

double ClickModel::expected_reward(const RankedList& list) const {
  check_list(list);
  const auto& alpha = attraction();
  if (const auto* pbm = std::get_if<PbmParams>(&params_)) {
    double reward = 0.0;
    for (std::size_t k = 0; k < num_positions_; ++k) {
      reward += pbm->chi[k] * alpha(list.items()[k]);
    }
    return reward;
  }
  // The product runs in item-id order so that every arrangement of the same
  // set yields the same rounding.
  std::vector<ItemId> items(list.items().begin(), list.items().end());
  std::sort(items.begin(), items.end());
  double none_attractive = 1.0;
  for (ItemId item : items) none_attractive *= 1.0 - alpha(item);
  return 1.0 - none_attractive;
}

double ClickModel::examination_prob(const RankedList& list, std::size_t position) const {
  check_list(list);
  if (position < 1 || position > num_positions_) {
    fail(ErrorCode::kDimension, "position " + std::to_string(position) + " outside 1.." +
                                    std::to_string(num_positions_));
  }
  if (const auto* pbm = std::get_if<PbmParams>(&params_)) return pbm->chi[position - 1];
  const auto& alpha = attraction();
  double examined = 1.0;
  for (std::size_t i = 1; i < position; ++i) examined *= 1.0 - alpha(list.at_position(i));
  return examined;
}

RankedList ClickModel::optimal_list() const {
  const auto& alpha = attraction();
  std::vector<ItemId> order(num_items());
  std::iota(order.begin(), order.end(), ItemId{1});
  std::stable_sort(order.begin(), order.end(),
                   [&](ItemId a, ItemId b) { return alpha(a) > alpha(b); });
  if (num_positions_ < num_items() &&
      alpha(order[num_positions_ - 1]) == alpha(order[num_positions_])) {
    fail(ErrorCode::kAmbiguous, "items " + std::to_string(order[num_positions_ - 1]) + " and " +
                                    std::to_string(order[num_positions_]) +
                                    " tie at the boundary of the optimal set");
  }
  order.resize(num_positions_);
  return RankedList(std::move(order));
}

double ClickModel::realized_reward(const RankedList& list, const SampleOutcome& outcome) const {
  check_list(list);
  if (outcome.attraction.size() != num_items() || outcome.examination.size() != num_positions_) {
    fail(ErrorCode::kDimension, "sample outcome does not match the model dimensions");
  }
  if (kind() == ModelKind::kCascade) {
    for (ItemId item : list.items()) {
      if (outcome.attraction[item - 1]) return 1.0;
    }
    return 0.0;
  }
  double reward = 0.0;
  for (std::size_t k = 0; k < num_positions_; ++k) {
    reward += outcome.examination[k] * outcome.attraction[list.items()[k] - 1];
  }
  return reward;
}

double ClickModel::realized_regret(const RankedList& chosen, const SampleOutcome& outcome) const {
  return realized_reward(optimal_list(), outcome) - realized_reward(chosen, outcome);
}

}  // namespace clickbandit
