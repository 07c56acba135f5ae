#include "clickbandit/clickbandit.h"

#include <memory>
#include <new>
#include <string>
#include <vector>

#include "clickbandit/baselines.hpp"
#include "clickbandit/batchrank.hpp"
#include "clickbandit/config.hpp"
#include "clickbandit/error.hpp"
#include "clickbandit/harness.hpp"
#include "clickbandit/kl_math.hpp"
#include "clickbandit/plot.hpp"
#include "clickbandit/queries.hpp"
#include "clickbandit/results_io.hpp"

using namespace clickbandit;

struct cb_rng {
  Rng rng;
};

struct cb_model {
  ClickModel model;
};

struct cb_learner {
  std::unique_ptr<Learner> learner;
  std::size_t num_items;
  std::size_t num_positions;
};

struct cb_config {
  ExperimentConfig config;
};

namespace {

thread_local std::string last_error;

class InvalidArgument : public std::exception {
 public:
  explicit InvalidArgument(std::string what) : what_(std::move(what)) {}
  const char* what() const noexcept override { return what_.c_str(); }

 private:
  std::string what_;
};

void require(bool condition, const char* message) {
  if (!condition) throw InvalidArgument(message);
}

cb_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return CB_ERR_DOMAIN;
    case ErrorCode::kDimension: return CB_ERR_DIMENSION;
    case ErrorCode::kAmbiguous: return CB_ERR_AMBIGUOUS;
    case ErrorCode::kState: return CB_ERR_STATE;
    case ErrorCode::kConfig: return CB_ERR_CONFIG;
    case ErrorCode::kSchema: return CB_ERR_SCHEMA;
    case ErrorCode::kIo: return CB_ERR_IO;
  }
  return CB_ERR_INTERNAL;
}

template <typename F>
cb_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return CB_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const InvalidArgument& e) {
    last_error = e.what();
    return CB_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CB_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CB_ERR_INTERNAL;
  }
}

RankedList list_from(const uint32_t* list, size_t length) {
  require(list != nullptr || length == 0, "list must not be NULL");
  return RankedList(std::vector<ItemId>(list, list + length));
}

std::vector<double> edges_from(const double* edges, size_t count) {
  require(edges != nullptr || count == 0, "bin_edges must not be NULL when num_edges > 0");
  return std::vector<double>(edges, edges + count);
}

std::vector<std::string> split_names(const char* text) {
  std::vector<std::string> out;
  std::string current;
  for (const char* c = text; *c; ++c) {
    if (*c == ',') {
      out.push_back(current);
      current.clear();
    } else if (*c != ' ') {
      current += *c;
    }
  }
  out.push_back(current);
  return out;
}

constexpr uint64_t kDefaultRunSeeds[] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};

}  // namespace

extern "C" {

const char* cb_version(void) { return "1.0.0"; }

const char* cb_status_name(cb_status status) {
  switch (status) {
    case CB_OK: return "ok";
    case CB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CB_ERR_DOMAIN: return "domain error";
    case CB_ERR_DIMENSION: return "dimension mismatch";
    case CB_ERR_AMBIGUOUS: return "ambiguous optimum";
    case CB_ERR_STATE: return "invalid state";
    case CB_ERR_CONFIG: return "config error";
    case CB_ERR_SCHEMA: return "schema mismatch";
    case CB_ERR_IO: return "i/o error";
    case CB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cb_last_error(void) { return last_error.c_str(); }

cb_status cb_bernoulli_kl(double p, double q, double* out) {
  return guarded([&] {
    require(out, "out must not be NULL");
    *out = kl::bernoulli_kl(p, q);
  });
}

cb_status cb_kl_ucb_upper(double mean, uint64_t count, double radius, double* out) {
  return guarded([&] {
    require(out, "out must not be NULL");
    *out = kl::kl_ucb_upper(mean, count, radius);
  });
}

cb_status cb_kl_ucb_lower(double mean, uint64_t count, double radius, double* out) {
  return guarded([&] {
    require(out, "out must not be NULL");
    *out = kl::kl_ucb_lower(mean, count, radius);
  });
}

cb_status cb_horizon_radius(double horizon, double* out) {
  return guarded([&] {
    require(out, "out must not be NULL");
    *out = kl::horizon_radius(horizon);
  });
}

cb_status cb_stage_length(uint32_t stage, uint64_t horizon, uint64_t* out) {
  return guarded([&] {
    require(out, "out must not be NULL");
    *out = stage_length(stage, horizon);
  });
}

cb_status cb_rng_create(uint64_t seed, uint64_t stream, cb_rng** out) {
  return guarded([&] {
    require(out, "out must not be NULL");
    *out = new cb_rng{Rng::for_stream(seed, stream)};
  });
}

void cb_rng_destroy(cb_rng* rng) { delete rng; }

cb_status cb_model_create_cm(const double* alpha, size_t num_items, size_t num_positions,
                             cb_model** out) {
  return guarded([&] {
    require(out && alpha, "alpha and out must not be NULL");
    *out = nullptr;
    *out = new cb_model{ClickModel(
        CmParams{AttractionParams(std::vector<double>(alpha, alpha + num_items)), num_positions})};
  });
}

cb_status cb_model_create_pbm(const double* alpha, size_t num_items, const double* chi,
                              size_t num_positions, cb_model** out) {
  return guarded([&] {
    require(out && alpha && chi, "alpha, chi and out must not be NULL");
    *out = nullptr;
    *out = new cb_model{ClickModel(PbmParams{
        AttractionParams(std::vector<double>(alpha, alpha + num_items)),
        std::vector<double>(chi, chi + num_positions)})};
  });
}

void cb_model_destroy(cb_model* model) { delete model; }

size_t cb_model_num_items(const cb_model* model) { return model ? model->model.num_items() : 0; }

size_t cb_model_num_positions(const cb_model* model) {
  return model ? model->model.num_positions() : 0;
}

cb_status cb_model_expected_reward(const cb_model* model, const uint32_t* list, size_t length,
                                   double* out) {
  return guarded([&] {
    require(model && out, "model and out must not be NULL");
    *out = model->model.expected_reward(list_from(list, length));
  });
}

cb_status cb_model_examination_prob(const cb_model* model, const uint32_t* list, size_t length,
                                    size_t position, double* out) {
  return guarded([&] {
    require(model && out, "model and out must not be NULL");
    *out = model->model.examination_prob(list_from(list, length), position);
  });
}

cb_status cb_model_optimal_list(const cb_model* model, uint32_t* out, size_t length) {
  return guarded([&] {
    require(model && out, "model and out must not be NULL");
    require(length == model->model.num_positions(), "output length must equal K");
    const RankedList best = model->model.optimal_list();
    std::copy(best.items().begin(), best.items().end(), out);
  });
}

cb_status cb_model_sample(const cb_model* model, const uint32_t* list, size_t length, cb_rng* rng,
                          uint8_t* clicks) {
  return guarded([&] {
    require(model && rng && clicks, "model, rng and clicks must not be NULL");
    const SampleOutcome outcome = model->model.sample_step(list_from(list, length), rng->rng);
    std::copy(outcome.clicks.begin(), outcome.clicks.end(), clicks);
  });
}

cb_status cb_learner_create(const char* algorithm, size_t num_items, size_t num_positions,
                            uint64_t horizon, cb_learner** out) {
  return guarded([&] {
    require(out && algorithm, "algorithm and out must not be NULL");
    *out = nullptr;
    const std::string name(algorithm);
    std::unique_ptr<Learner> learner;
    if (name == "batchrank") {
      learner = std::make_unique<BatchRank>(num_items, num_positions, horizon);
    } else if (name == "cascadeklucb") {
      learner = std::make_unique<CascadeKlUcb>(num_items, num_positions);
    } else if (name == "rankedexp3") {
      learner = std::make_unique<RankedExp3>(num_items, num_positions,
                                             RankedExp3::default_gamma(num_items, horizon));
    } else {
      throw InvalidArgument("unknown algorithm '" + name + "'");
    }
    *out = new cb_learner{std::move(learner), num_items, num_positions};
  });
}

void cb_learner_destroy(cb_learner* learner) { delete learner; }

cb_status cb_learner_choose(cb_learner* learner, cb_rng* rng, uint32_t* list, size_t length) {
  return guarded([&] {
    require(learner && rng && list, "learner, rng and list must not be NULL");
    require(length == learner->num_positions, "list length must equal K");
    const RankedList chosen = learner->learner->choose(rng->rng);
    std::copy(chosen.items().begin(), chosen.items().end(), list);
  });
}

cb_status cb_learner_update(cb_learner* learner, const uint32_t* list, const uint8_t* clicks,
                            size_t length, cb_rng* rng) {
  return guarded([&] {
    require(learner && rng && clicks, "learner, rng and clicks must not be NULL");
    learner->learner->update(list_from(list, length), std::span(clicks, length), rng->rng);
  });
}

cb_status cb_regret_bound(size_t num_positions, size_t num_items, double horizon,
                          double alpha_max, double delta_min, double* total, double* log_term,
                          double* constant_term) {
  return guarded([&] {
    require(total, "total must not be NULL");
    const RegretBound bound = batchrank_regret_bound(
        {num_positions, num_items, horizon, alpha_max, delta_min});
    *total = bound.total();
    if (log_term) *log_term = bound.log_term;
    if (constant_term) *constant_term = bound.constant_term;
  });
}

cb_status cb_config_load(const char* path, cb_config** out) {
  return guarded([&] {
    require(path && out, "path and out must not be NULL");
    *out = nullptr;
    *out = new cb_config{load_config(path)};
  });
}

cb_status cb_config_parse(const char* text, cb_config** out) {
  return guarded([&] {
    require(text && out, "text and out must not be NULL");
    *out = nullptr;
    *out = new cb_config{parse_config(text)};
  });
}

void cb_config_destroy(cb_config* config) { delete config; }

cb_status cb_config_serialize(const cb_config* config, char* buffer, size_t capacity,
                              size_t* required) {
  return guarded([&] {
    require(config, "config must not be NULL");
    const std::string text = serialize_config(config->config);
    if (required) *required = text.size() + 1;
    require(buffer != nullptr && capacity > text.size(), "buffer too small");
    std::copy(text.begin(), text.end(), buffer);
    buffer[text.size()] = '\0';
  });
}

cb_status cb_config_set_seeds(cb_config* config, const uint64_t* seeds, size_t count) {
  return guarded([&] {
    require(config && seeds && count > 0, "config and a nonempty seed list are required");
    config->config.seeds.assign(seeds, seeds + count);
  });
}

cb_status cb_config_set_horizon(cb_config* config, uint64_t horizon) {
  return guarded([&] {
    require(config, "config must not be NULL");
    ExperimentConfig updated = config->config;
    updated.horizon = horizon;
    updated.validate();
    config->config = std::move(updated);
  });
}

cb_status cb_config_set_window(cb_config* config, uint64_t window) {
  return guarded([&] {
    require(config, "config must not be NULL");
    ExperimentConfig updated = config->config;
    updated.window = window;
    updated.validate();
    config->config = std::move(updated);
  });
}

cb_status cb_run(const cb_config* config, size_t parallelism, const char* out_dir) {
  return guarded([&] {
    require(config && out_dir, "config and out_dir must not be NULL");
    const SweepResult sweep = run_sweep(std::span(&config->config, 1), parallelism);
    write_run_files(out_dir, sweep.runs);
  });
}

cb_status cb_sweep(const cb_config* const* configs, size_t count, size_t parallelism,
                   const double* bin_edges, size_t num_edges, const char* out_dir,
                   size_t* suboptimal_runs) {
  return guarded([&] {
    require(configs && out_dir, "configs and out_dir must not be NULL");
    std::vector<ExperimentConfig> list;
    for (size_t i = 0; i < count; ++i) {
      require(configs[i], "config entries must not be NULL");
      list.push_back(configs[i]->config);
    }
    const auto edges = edges_from(bin_edges, num_edges);
    const SweepResult sweep = run_sweep(list, parallelism, edges);
    write_sweep_files(out_dir, sweep);
    if (suboptimal_runs) {
      *suboptimal_runs = 0;
      for (const auto& g : sweep.groups) *suboptimal_runs += g.suboptimal_runs;
    }
  });
}

cb_status cb_plot(const char* const* results_csvs, size_t count, const char* out_dir,
                  const double* bin_edges, size_t num_edges, int log_y) {
  return guarded([&] {
    require(results_csvs && out_dir, "results_csvs and out_dir must not be NULL");
    std::vector<std::filesystem::path> paths;
    for (size_t i = 0; i < count; ++i) {
      require(results_csvs[i], "results path entries must not be NULL");
      paths.emplace_back(results_csvs[i]);
    }
    plot::PlotOptions options;
    options.bin_edges = edges_from(bin_edges, num_edges);
    options.log_y = log_y != 0;
    plot::render_plots(paths, out_dir, options);
  });
}

void cb_query_family_init(cb_query_family* family) {
  if (!family) return;
  const QueryFamily defaults;
  family->count = defaults.count;
  family->num_items = defaults.num_items;
  family->num_positions = defaults.num_positions;
  family->model = "cm";
  family->chi_decay = "geometric";
  family->geometric_ratio = defaults.geometric_ratio;
  family->horizon = defaults.horizon;
  family->window = defaults.window;
  family->algorithms = "batchrank";
  family->run_seeds = kDefaultRunSeeds;
  family->num_run_seeds = std::size(kDefaultRunSeeds);
  family->seed = defaults.seed;
}

cb_status cb_gen_queries(const cb_query_family* family, const char* out_dir, size_t* written) {
  return guarded([&] {
    require(family && out_dir, "family and out_dir must not be NULL");
    require(family->model && family->chi_decay && family->algorithms,
            "family strings must not be NULL");
    require(family->run_seeds || family->num_run_seeds == 0, "run_seeds must not be NULL");
    QueryFamily f;
    f.count = family->count;
    f.num_items = family->num_items;
    f.num_positions = family->num_positions;
    f.model = parse_model_kind(family->model);
    const std::string decay(family->chi_decay);
    if (decay == "geometric") {
      f.decay = ChiDecay::kGeometric;
    } else if (decay == "harmonic") {
      f.decay = ChiDecay::kHarmonic;
    } else {
      throw InvalidArgument("chi_decay must be geometric or harmonic");
    }
    f.geometric_ratio = family->geometric_ratio;
    f.horizon = family->horizon;
    f.window = family->window;
    f.algorithms.clear();
    for (const auto& name : split_names(family->algorithms)) f.algorithms.push_back(parse_algorithm(name));
    f.run_seeds.assign(family->run_seeds, family->run_seeds + family->num_run_seeds);
    f.seed = family->seed;

    const auto configs = generate_queries(f);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::kIo, std::string("cannot create directory ") + out_dir);
    for (const auto& c : configs) {
      save_config(c, std::filesystem::path(out_dir) /
                         (c.label + "_" + std::string(to_string(c.algorithm)) + ".cfg"));
    }
    if (written) *written = configs.size();
  });
}

}  // extern "C"
