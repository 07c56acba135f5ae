#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "clickbandit/harness.hpp"

namespace clickbandit {

inline constexpr const char* kResultsHeader =
    "run_id,algorithm,model,seed,window_index,window_start,window_end,avg_per_step_regret,"
    "cumulative_regret";
inline constexpr const char* kEventsHeader = "run_id,step,event_type,batch_id,detail";
inline constexpr const char* kAggregateHeader =
    "algorithm,model,runs,window_index,window_start,window_end,mean_avg_per_step_regret,"
    "mean_cumulative_regret";
inline constexpr const char* kHistogramHeader = "algorithm,model,bin_lower,bin_upper,count";

void write_results_csv(std::ostream& out, std::span<const RegretTrace> traces);
void write_events_csv(std::ostream& out, std::span<const RegretTrace> traces);
void write_aggregate_csv(std::ostream& out, std::span<const SweepGroup> groups);
void write_histogram_csv(std::ostream& out, std::span<const SweepGroup> groups);

// Writes results.csv and events.csv into `dir` (created if missing).
void write_run_files(const std::filesystem::path& dir, std::span<const RegretTrace> traces);
// Additionally writes aggregate.csv and histogram.csv.
void write_sweep_files(const std::filesystem::path& dir, const SweepResult& sweep);

// One row of a results CSV.
struct ResultRow {
  std::string run_id;
  std::string algorithm;
  std::string model;
  std::uint64_t seed = 0;
  std::size_t window_index = 0;
  std::uint64_t window_start = 0;
  std::uint64_t window_end = 0;
  double avg_per_step_regret = 0.0;
  double cumulative_regret = 0.0;
};

// Throws Error(kIo) if unreadable and Error(kSchema) if the header or any
// row does not match, or if there are no data rows.
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

}  // namespace clickbandit
