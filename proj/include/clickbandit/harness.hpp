#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "clickbandit/click_models.hpp"
#include "clickbandit/config.hpp"
#include "clickbandit/learner.hpp"

namespace clickbandit {

struct WindowStat {
  std::size_t index = 0;       // 0-based
  std::uint64_t start = 0;     // first step, 1-based
  std::uint64_t end = 0;       // last step, inclusive
  double avg_per_step_regret = 0.0;
  double cumulative_regret = 0.0;  // through `end`
};

struct TimedEvent {
  std::uint64_t step = 0;
  LearnerEvent event;
};

// Windowed expected regret of one (config, seed) run.
struct RegretTrace {
  std::string run_id;
  std::string algorithm;
  std::string model;
  std::uint64_t seed = 0;
  std::vector<WindowStat> windows;
  std::vector<TimedEvent> events;
  RankedList final_list;

  double cumulative_regret() const { return windows.empty() ? 0.0 : windows.back().cumulative_regret; }
  double final_window_regret() const {
    return windows.empty() ? 0.0 : windows.back().avg_per_step_regret;
  }
};

std::string make_run_id(const ExperimentConfig& config, std::uint64_t seed);

std::unique_ptr<Learner> make_learner(const ExperimentConfig& config, const ClickModel& model);

struct RunOptions {
  // Called once per step with the list shown at that step.
  std::function<void(std::uint64_t step, const RankedList& list)> on_step;
};

// Simulates T steps of choose -> sample -> update. Regret is accounted in
// expectation: r(R*, alpha, chi) - r(R_t, alpha, chi) per step. The model
// and the learner draw from separate streams derived from `seed`.
RegretTrace run_single(const ExperimentConfig& config, std::uint64_t seed,
                       const RunOptions& options = {});

// Bins are [edges[i], edges[i + 1]); values below the first edge land in the
// first bin and values at or above the last edge in the last bin.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
};

std::vector<double> default_histogram_edges();
Histogram make_histogram(std::span<const double> values, std::span<const double> edges);

// Final-window regret at or above this marks a run as converged to a
// suboptimal list.
inline constexpr double kSuboptimalRegret = 1e-3;

// Runs of one (algorithm, model) pair aggregated window by window.
struct SweepGroup {
  std::string algorithm;
  std::string model;
  std::size_t runs = 0;
  std::vector<WindowStat> mean_windows;  // per-window mean across runs
  std::vector<double> final_window_regrets;  // sorted ascending
  Histogram histogram;
  std::size_t suboptimal_runs = 0;
};

struct SweepResult {
  std::vector<RegretTrace> runs;  // sorted by (run_id, algorithm, model, seed)
  std::vector<SweepGroup> groups;  // sorted by (algorithm, model)
};

// Runs every (config, seed) pair with up to `parallelism` worker threads.
// All configs must share T and the window length. The result does not
// depend on config order or scheduling.
SweepResult run_sweep(std::span<const ExperimentConfig> configs, std::size_t parallelism,
                      std::span<const double> histogram_edges = {});

// Inputs of the gap-dependent regret bound for BatchRank.
struct BoundInputs {
  std::size_t num_positions = 0;  // K
  std::size_t num_items = 0;      // L
  double horizon = 0.0;           // T
  double alpha_max = 0.0;
  double delta_min = 0.0;  // min over k in [K] of alpha(k) - alpha(k + 1)
};

BoundInputs bound_inputs(const ClickModel& model, std::uint64_t horizon);

struct RegretBound {
  double log_term = 0.0;       // 192 K^3 L / ((1 - alpha_max) delta_min) * ln T
  double constant_term = 0.0;  // 4 K L (3e + K)
  double total() const { return log_term + constant_term; }
};

RegretBound batchrank_regret_bound(const BoundInputs& inputs);

}  // namespace clickbandit
