#include "clickbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <numeric>
#include <thread>
#include <tuple>

#include "clickbandit/baselines.hpp"
#include "clickbandit/batchrank.hpp"
#include "clickbandit/error.hpp"

namespace clickbandit {

std::string make_run_id(const ExperimentConfig& config, std::uint64_t seed) {
  return config.label + "-" + std::string(to_string(config.algorithm)) + "-s" +
         std::to_string(seed);
}

std::unique_ptr<Learner> make_learner(const ExperimentConfig& config, const ClickModel& model) {
  const std::size_t items = model.num_items();
  const std::size_t positions = model.num_positions();
  switch (config.algorithm) {
    case Algorithm::kBatchRank:
      return std::make_unique<BatchRank>(items, positions, config.horizon);
    case Algorithm::kCascadeKlUcb:
      return std::make_unique<CascadeKlUcb>(items, positions);
    case Algorithm::kRankedExp3:
      return std::make_unique<RankedExp3>(items, positions,
                                          RankedExp3::default_gamma(items, config.horizon));
    case Algorithm::kOptimal:
      return std::make_unique<FixedListLearner>(model.optimal_list());
  }
  fail(ErrorCode::kConfig, "unknown algorithm");
}

RegretTrace run_single(const ExperimentConfig& config, std::uint64_t seed,
                       const RunOptions& options) {
  const ClickModel model = config.make_model();
  const double best_reward = model.expected_reward(model.optimal_list());
  auto learner = make_learner(config, model);

  RegretTrace trace;
  trace.run_id = make_run_id(config, seed);
  trace.algorithm = std::string(to_string(config.algorithm));
  trace.model = std::string(to_string(config.model));
  trace.seed = seed;

  Rng environment = Rng::for_stream(seed, 0);
  Rng agent = Rng::for_stream(seed, 1);
  SampleOutcome outcome;
  std::vector<LearnerEvent> events;

  double window_sum = 0.0;
  double cumulative = 0.0;
  std::uint64_t window_start = 1;
  RankedList list;
  for (std::uint64_t t = 1; t <= config.horizon; ++t) {
    list = learner->choose(agent);
    if (options.on_step) options.on_step(t, list);
    model.sample_step(list, environment, outcome);
    learner->update(list, outcome.clicks, agent);
    const double regret = best_reward - model.expected_reward(list);
    window_sum += regret;
    cumulative += regret;

    learner->drain_events(events);
    for (auto& e : events) trace.events.push_back({t, std::move(e)});
    events.clear();

    if (t - window_start + 1 == config.window || t == config.horizon) {
      const auto length = static_cast<double>(t - window_start + 1);
      trace.windows.push_back(
          {trace.windows.size(), window_start, t, window_sum / length, cumulative});
      window_sum = 0.0;
      window_start = t + 1;
    }
  }
  trace.final_list = std::move(list);
  return trace;
}

std::vector<double> default_histogram_edges() {
  return {0.0, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
}

Histogram make_histogram(std::span<const double> values, std::span<const double> edges) {
  if (edges.size() < 2) fail(ErrorCode::kDomain, "a histogram needs at least two bin edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) fail(ErrorCode::kDomain, "bin edges must increase strictly");
  }
  Histogram h{std::vector<double>(edges.begin(), edges.end()),
              std::vector<std::size_t>(edges.size() - 1, 0)};
  for (double v : values) {
    const auto upper = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t bin = upper == edges.begin() ? 0 : static_cast<std::size_t>(upper - edges.begin()) - 1;
    bin = std::min(bin, h.counts.size() - 1);
    ++h.counts[bin];
  }
  return h;
}

namespace {

double sorted_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0);
}

SweepGroup aggregate_group(const std::vector<const RegretTrace*>& runs,
                           std::span<const double> edges) {
  SweepGroup group;
  group.algorithm = runs.front()->algorithm;
  group.model = runs.front()->model;
  group.runs = runs.size();
  const auto n = static_cast<double>(runs.size());
  const std::size_t windows = runs.front()->windows.size();
  std::vector<double> column(runs.size());
  for (std::size_t w = 0; w < windows; ++w) {
    WindowStat stat = runs.front()->windows[w];
    for (std::size_t r = 0; r < runs.size(); ++r) column[r] = runs[r]->windows[w].avg_per_step_regret;
    stat.avg_per_step_regret = sorted_sum(column) / n;
    for (std::size_t r = 0; r < runs.size(); ++r) column[r] = runs[r]->windows[w].cumulative_regret;
    stat.cumulative_regret = sorted_sum(column) / n;
    group.mean_windows.push_back(stat);
  }
  for (const auto* run : runs) group.final_window_regrets.push_back(run->final_window_regret());
  std::sort(group.final_window_regrets.begin(), group.final_window_regrets.end());
  group.histogram = make_histogram(group.final_window_regrets, edges);
  group.suboptimal_runs = static_cast<std::size_t>(
      std::count_if(group.final_window_regrets.begin(), group.final_window_regrets.end(),
                    [](double r) { return r >= kSuboptimalRegret; }));
  return group;
}

}  // namespace

SweepResult run_sweep(std::span<const ExperimentConfig> configs, std::size_t parallelism,
                      std::span<const double> histogram_edges) {
  if (configs.empty()) fail(ErrorCode::kConfig, "a sweep needs at least one config");
  for (const auto& config : configs) {
    config.validate();
    if (config.horizon != configs.front().horizon || config.window != configs.front().window) {
      fail(ErrorCode::kConfig, "all configs in a sweep must share T and window");
    }
  }
  const std::vector<double> default_edges = default_histogram_edges();
  const std::span<const double> edges = histogram_edges.empty() ? default_edges : histogram_edges;

  struct Task {
    const ExperimentConfig* config;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& config : configs) {
    for (std::uint64_t seed : config.seeds) tasks.push_back({&config, seed});
  }

  std::vector<RegretTrace> traces(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        traces[i] = run_single(*tasks[i].config, tasks[i].seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, tasks.size());
  std::vector<std::jthread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepResult result;
  result.runs = std::move(traces);
  std::stable_sort(result.runs.begin(), result.runs.end(),
                   [](const RegretTrace& a, const RegretTrace& b) {
                     return std::tie(a.run_id, a.algorithm, a.model, a.seed) <
                            std::tie(b.run_id, b.algorithm, b.model, b.seed);
                   });

  std::map<std::pair<std::string, std::string>, std::vector<const RegretTrace*>> grouped;
  for (const auto& run : result.runs) grouped[{run.algorithm, run.model}].push_back(&run);
  for (const auto& [key, runs] : grouped) result.groups.push_back(aggregate_group(runs, edges));
  return result;
}

BoundInputs bound_inputs(const ClickModel& model, std::uint64_t horizon) {
  std::vector<double> alpha(model.attraction().values().begin(), model.attraction().values().end());
  std::sort(alpha.begin(), alpha.end(), std::greater<>());
  BoundInputs in;
  in.num_positions = model.num_positions();
  in.num_items = model.num_items();
  in.horizon = static_cast<double>(horizon);
  in.alpha_max = alpha.front();
  // Consecutive gaps among the top K + 1 items (top K when K = L).
  const std::size_t last = std::min(in.num_positions, in.num_items - 1);
  in.delta_min = last == 0 ? alpha.front() : alpha[0] - alpha[1];
  for (std::size_t k = 1; k < last; ++k) in.delta_min = std::min(in.delta_min, alpha[k] - alpha[k + 1]);
  return in;
}

RegretBound batchrank_regret_bound(const BoundInputs& in) {
  if (in.num_positions < 1 || in.num_items < in.num_positions) {
    fail(ErrorCode::kDomain, "bound needs 1 <= K <= L");
  }
  if (!(in.horizon >= 5.0)) fail(ErrorCode::kDomain, "bound needs T >= 5");
  if (!(in.delta_min > 0.0)) fail(ErrorCode::kDomain, "bound is undefined for delta_min <= 0");
  if (!(in.alpha_max >= 0.0 && in.alpha_max < 1.0)) {
    fail(ErrorCode::kDomain, "bound needs alpha_max in [0, 1)");
  }
  const auto k = static_cast<double>(in.num_positions);
  const auto l = static_cast<double>(in.num_items);
  return {192.0 * k * k * k * l / ((1.0 - in.alpha_max) * in.delta_min) * std::log(in.horizon),
          4.0 * k * l * (3.0 * std::numbers::e + k)};
}

}  // namespace clickbandit
