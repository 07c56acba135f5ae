// Command-line driver over the clickbandit C API.

#include <clickbandit/clickbandit.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct ApiFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(cb_status status) {
  if (status != CB_OK) throw ApiFailure(cb_last_error());
}

struct ConfigDeleter {
  void operator()(cb_config* c) const { cb_config_destroy(c); }
};
using ConfigHandle = std::unique_ptr<cb_config, ConfigDeleter>;

struct Overrides {
  std::optional<uint64_t> seed;
  std::optional<uint64_t> steps;
  std::optional<uint64_t> window;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Run a single seed instead of the config's seed list");
    cmd->add_option("--steps", steps, "Override the horizon T")->check(CLI::Range(5ULL, ~0ULL));
    cmd->add_option("--window", window, "Override the regret window length")
        ->check(CLI::PositiveNumber);
  }

  void apply(cb_config* config) const {
    if (seed) check(cb_config_set_seeds(config, &*seed, 1));
    if (steps) check(cb_config_set_horizon(config, *steps));
    if (window) check(cb_config_set_window(config, *window));
  }
};

ConfigHandle load(const fs::path& path, const Overrides& overrides) {
  cb_config* raw = nullptr;
  check(cb_config_load(path.string().c_str(), &raw));
  ConfigHandle config(raw);
  overrides.apply(config.get());
  return config;
}

// Files are taken as given; directories contribute their *.cfg entries in
// name order.
std::vector<fs::path> expand_config_paths(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& input : inputs) {
    const fs::path p(input);
    if (!fs::is_directory(p)) {
      out.push_back(p);
      continue;
    }
    std::vector<fs::path> found;
    for (const auto& entry : fs::directory_iterator(p)) {
      if (entry.is_regular_file() && entry.path().extension() == ".cfg") found.push_back(entry.path());
    }
    if (found.empty()) throw ApiFailure("no .cfg files in " + p.string());
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

// "--bins 0,1e-4,1e-2,1" gives explicit edges; "--bins N" gives N bins with
// a zero bin followed by decades ending at 1.
std::vector<double> parse_bins(const std::string& text) {
  if (text.empty()) return {};
  std::vector<double> edges;
  if (text.find(',') == std::string::npos) {
    std::size_t used = 0;
    long count = 0;
    try {
      count = std::stol(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || count < 2 || count > 20) {
      throw CLI::ValidationError("--bins", "expects a bin count in [2, 20] or comma-separated edges");
    }
    edges.push_back(0.0);
    for (long i = count - 2; i >= 0; --i) edges.push_back(std::pow(10.0, -static_cast<double>(i)));
    return edges;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw CLI::ValidationError("--bins", "bad bin edge '" + item + "'");
    }
    edges.push_back(value);
  }
  return edges;
}

int cmd_run(const std::string& config_path, const std::string& out, std::size_t parallelism,
            const Overrides& overrides) {
  const ConfigHandle config = load(config_path, overrides);
  check(cb_run(config.get(), parallelism, out.c_str()));
  std::cout << "wrote " << (fs::path(out) / "results.csv").string() << " and "
            << (fs::path(out) / "events.csv").string() << "\n";
  return 0;
}

int cmd_sweep(const std::vector<std::string>& inputs, const std::string& out,
              std::size_t parallelism, const std::string& bins, const Overrides& overrides) {
  std::vector<ConfigHandle> configs;
  for (const auto& path : expand_config_paths(inputs)) configs.push_back(load(path, overrides));
  std::vector<const cb_config*> raw;
  for (const auto& c : configs) raw.push_back(c.get());
  const auto edges = parse_bins(bins);
  std::size_t suboptimal = 0;
  check(cb_sweep(raw.data(), raw.size(), parallelism, edges.empty() ? nullptr : edges.data(),
                 edges.size(), out.c_str(), &suboptimal));
  std::cout << "ran " << raw.size() << " configs; " << suboptimal
            << " runs ended with per-step regret >= 1e-3\n";
  std::cout << "wrote results.csv, events.csv, aggregate.csv, histogram.csv to " << out << "\n";
  return 0;
}

int cmd_bound(std::size_t k, std::size_t l, double horizon, double alpha_max, double delta_min) {
  double total = 0.0, log_term = 0.0, constant_term = 0.0;
  check(cb_regret_bound(k, l, horizon, alpha_max, delta_min, &total, &log_term, &constant_term));
  std::printf("log_term      %.6f\n", log_term);
  std::printf("constant_term %.6f\n", constant_term);
  std::printf("total         %.6f\n", total);
  return 0;
}

int cmd_plot(const std::vector<std::string>& csvs, const std::string& out, const std::string& bins,
             bool log_y) {
  std::vector<const char*> raw;
  for (const auto& c : csvs) raw.push_back(c.c_str());
  const auto edges = parse_bins(bins);
  check(cb_plot(raw.data(), raw.size(), out.c_str(), edges.empty() ? nullptr : edges.data(),
                edges.size(), log_y ? 1 : 0));
  std::cout << "wrote " << (fs::path(out) / "regret.svg").string() << " and "
            << (fs::path(out) / "histogram.svg").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online learning to rank in click models: simulation and regret experiments"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(cb_version()));

  std::string out = "out";
  std::size_t parallelism = 1;
  std::string bins;
  Overrides overrides;

  auto* run = app.add_subcommand("run", "Run every seed of one experiment config");
  std::string run_config;
  run->add_option("--config", run_config, "Experiment config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory");
  run->add_option("--parallelism", parallelism, "Worker threads")->check(CLI::PositiveNumber);
  overrides.add_to(run);

  auto* sweep = app.add_subcommand("sweep", "Run a set of configs and aggregate them");
  std::vector<std::string> sweep_configs;
  sweep->add_option("--config", sweep_configs, "Config file or directory of .cfg files (repeatable)")
      ->required()
      ->check(CLI::ExistingPath);
  sweep->add_option("--out", out, "Output directory");
  sweep->add_option("--parallelism", parallelism, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--bins", bins, "Histogram bin count or comma-separated edges");
  overrides.add_to(sweep);

  auto* bound = app.add_subcommand("bound", "Print the BatchRank gap-dependent regret bound");
  std::size_t bound_k = 0, bound_l = 0;
  double bound_t = 0.0, alpha_max = 0.0, delta_min = 0.0;
  bound->add_option("--K", bound_k, "Number of positions")->required();
  bound->add_option("--L", bound_l, "Number of items")->required();
  bound->add_option("--T", bound_t, "Horizon")->required();
  bound->add_option("--alpha-max", alpha_max, "Largest attraction probability")->required();
  bound->add_option("--delta-min", delta_min, "Smallest gap between consecutive top items")
      ->required();

  auto* plot = app.add_subcommand("plot", "Render regret.svg and histogram.svg from results CSVs");
  std::vector<std::string> plot_inputs, plot_flagged;
  plot->add_option("csv", plot_inputs, "results.csv files");
  plot->add_option("--results", plot_flagged, "results.csv file (repeatable)");
  plot->add_option("--out", out, "Output directory");
  plot->add_option("--bins", bins, "Histogram bin count or comma-separated edges");
  bool log_y = false;
  plot->add_flag("--log-y", log_y, "Logarithmic y axis on the regret chart");

  auto* gen = app.add_subcommand("gen-queries", "Write configs for a family of synthetic queries");
  cb_query_family family;
  cb_query_family_init(&family);
  std::string gen_model = family.model;
  std::string gen_decay = family.chi_decay;
  std::string gen_algorithms = family.algorithms;
  std::size_t seeds_per_query = family.num_run_seeds;
  gen->add_option("--out", out, "Output directory");
  gen->add_option("--count", family.count, "Number of queries");
  gen->add_option("--seed", family.seed, "Generator seed");
  gen->add_option("--model", gen_model, "cm or pbm")->check(CLI::IsMember({"cm", "pbm"}));
  gen->add_option("--L", family.num_items, "Items per query")->check(CLI::PositiveNumber);
  gen->add_option("--K", family.num_positions, "Positions per query")->check(CLI::PositiveNumber);
  gen->add_option("--T", family.horizon, "Horizon")->check(CLI::Range(5ULL, ~0ULL));
  gen->add_option("--window", family.window, "Regret window length")->check(CLI::PositiveNumber);
  gen->add_option("--chi-decay", gen_decay, "PBM examination decay")
      ->check(CLI::IsMember({"geometric", "harmonic"}));
  gen->add_option("--chi-ratio", family.geometric_ratio, "Geometric decay ratio");
  gen->add_option("--algorithms", gen_algorithms, "Comma-separated algorithm names");
  gen->add_option("--seeds-per-query", seeds_per_query, "Run seeds 0..N-1 per query")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* context = &app;
    for (const auto* sub : app.get_subcommands()) context = sub;
    std::cerr << context->help();
    return 2;
  }

  try {
    if (*run) return cmd_run(run_config, out, parallelism, overrides);
    if (*sweep) return cmd_sweep(sweep_configs, out, parallelism, bins, overrides);
    if (*bound) return cmd_bound(bound_k, bound_l, bound_t, alpha_max, delta_min);
    if (*plot) {
      plot_inputs.insert(plot_inputs.end(), plot_flagged.begin(), plot_flagged.end());
      if (plot_inputs.empty()) {
        std::cerr << "error: plot needs at least one results CSV\n\n" << plot->help();
        return 2;
      }
      return cmd_plot(plot_inputs, out, bins, log_y);
    }
    if (*gen) {
      std::vector<uint64_t> run_seeds(seeds_per_query);
      for (std::size_t i = 0; i < run_seeds.size(); ++i) run_seeds[i] = i;
      family.model = gen_model.c_str();
      family.chi_decay = gen_decay.c_str();
      family.algorithms = gen_algorithms.c_str();
      family.run_seeds = run_seeds.data();
      family.num_run_seeds = run_seeds.size();
      std::size_t written = 0;
      check(cb_gen_queries(&family, out.c_str(), &written));
      std::cout << "wrote " << written << " configs to " << out << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
