#include "clickbandit/queries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "clickbandit/error.hpp"
#include "clickbandit/rng.hpp"

namespace clickbandit {
namespace {

// Four decimals keep the generated files readable.
double round4(double x) { return std::round(x * 1e4) / 1e4; }

std::vector<double> draw_alpha(std::size_t num_items, Rng& rng) {
  while (true) {
    std::vector<double> alpha(num_items);
    for (double& a : alpha) a = round4(0.05 + 0.85 * rng.uniform01());
    std::sort(alpha.begin(), alpha.end(), std::greater<>());
    if (std::adjacent_find(alpha.begin(), alpha.end()) == alpha.end()) return alpha;
  }
}

}  // namespace

std::vector<ExperimentConfig> generate_queries(const QueryFamily& family) {
  if (family.num_positions < 1 || family.num_positions > family.num_items) {
    fail(ErrorCode::kConfig, "query family needs 1 <= K <= L");
  }
  if (family.algorithms.empty()) fail(ErrorCode::kConfig, "query family needs an algorithm");
  if (!(family.geometric_ratio > 0.0 && family.geometric_ratio <= 1.0)) {
    fail(ErrorCode::kConfig, "geometric ratio must lie in (0, 1]");
  }
  Rng rng = Rng::for_stream(family.seed, 7);
  std::vector<ExperimentConfig> out;
  for (std::size_t q = 0; q < family.count; ++q) {
    const auto alpha = draw_alpha(family.num_items, rng);
    std::vector<double> chi;
    if (family.model == ModelKind::kPositionBased) {
      for (std::size_t k = 1; k <= family.num_positions; ++k) {
        chi.push_back(round4(family.decay == ChiDecay::kHarmonic
                                 ? 1.0 / static_cast<double>(k)
                                 : std::pow(family.geometric_ratio, static_cast<double>(k - 1))));
      }
    }
    char label[64];
    std::snprintf(label, sizeof(label), "%s%03zu", family.label_prefix.c_str(), q);
    for (Algorithm algorithm : family.algorithms) {
      ExperimentConfig c;
      c.label = label;
      c.model = family.model;
      c.alpha = alpha;
      c.chi = chi;
      c.num_positions = family.num_positions;
      c.horizon = family.horizon;
      c.algorithm = algorithm;
      c.seeds = family.run_seeds;
      c.window = family.window;
      c.validate();
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace clickbandit
