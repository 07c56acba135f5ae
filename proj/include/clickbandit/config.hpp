#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "clickbandit/click_models.hpp"

namespace clickbandit {

enum class Algorithm {
  kBatchRank,
  kCascadeKlUcb,
  kRankedExp3,
  kOptimal,  // always plays the optimal list; zero-regret reference
};

std::string_view to_string(Algorithm algorithm);
// Accepts batchrank | cascadeklucb | rankedexp3 | optimal.
Algorithm parse_algorithm(std::string_view name);
ModelKind parse_model_kind(std::string_view name);

inline constexpr std::uint64_t kDefaultWindow = 100000;

struct ExperimentConfig {
  std::string label = "run";
  ModelKind model = ModelKind::kCascade;
  std::vector<double> alpha;
  std::vector<double> chi;  // position-based model only
  std::size_t num_positions = 0;
  std::uint64_t horizon = 0;
  Algorithm algorithm = Algorithm::kBatchRank;
  std::vector<std::uint64_t> seeds{0};
  std::uint64_t window = kDefaultWindow;

  // Throws Error(kConfig) describing the first violated constraint.
  void validate() const;
  ClickModel make_model() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Flat "key = value" text, one entry per line, '#' starts a comment. Lists
// are comma separated. Keys: label, model, alpha, chi, K, T, algorithm,
// seeds, window. For pbm, K defaults to the length of chi.
// Errors carry "<source>:<line>: <message>".
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

// Inverse of parse_config; doubles are written with round-trip precision.
std::string serialize_config(const ExperimentConfig& config);
void save_config(const ExperimentConfig& config, const std::filesystem::path& path);

}  // namespace clickbandit
