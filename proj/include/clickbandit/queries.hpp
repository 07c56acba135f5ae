#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clickbandit/config.hpp"

namespace clickbandit {

enum class ChiDecay { kGeometric, kHarmonic };

// Family of synthetic queries: alpha drawn uniformly from [0.05, 0.9] and
// sorted in decreasing order; chi(k) = ratio^(k-1) or 1/k.
struct QueryFamily {
  std::size_t count = 60;
  std::size_t num_items = 10;
  std::size_t num_positions = 5;
  ModelKind model = ModelKind::kCascade;
  ChiDecay decay = ChiDecay::kGeometric;
  double geometric_ratio = 0.7;
  std::uint64_t horizon = 10000000;
  std::uint64_t window = kDefaultWindow;
  std::vector<Algorithm> algorithms{Algorithm::kBatchRank};
  std::vector<std::uint64_t> run_seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::uint64_t seed = 0;  // generator seed
  std::string label_prefix = "q";
};

// One config per (query, algorithm); the queries themselves depend only on
// the generator seed, so every algorithm sees identical parameters.
std::vector<ExperimentConfig> generate_queries(const QueryFamily& family);

}  // namespace clickbandit
