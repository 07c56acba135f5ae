/*
 * clickbandit C API.
 *
 * Online learning to rank in cascade and position-based click models:
 * click-model simulators, the BatchRank learner, the CascadeKL-UCB and
 * RankedExp3 baselines, and a regret-simulation harness.
 *
 * Conventions: items are numbered 1..L and positions 1..K. Every function
 * that can fail returns a cb_status; on failure cb_last_error() holds a
 * message for the calling thread. Handles are opaque and owned by the
 * caller; destroy functions accept NULL.
 */
#ifndef CLICKBANDIT_CLICKBANDIT_H_
#define CLICKBANDIT_CLICKBANDIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CB_API __declspec(dllexport)
#else
#define CB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cb_status {
  CB_OK = 0,
  CB_ERR_INVALID_ARGUMENT = 1, /* NULL pointer, bad buffer size, unknown name */
  CB_ERR_DOMAIN = 2,           /* value outside its mathematical domain */
  CB_ERR_DIMENSION = 3,        /* list or vector size mismatch */
  CB_ERR_AMBIGUOUS = 4,        /* optimal list not unique as a set */
  CB_ERR_STATE = 5,            /* calls out of order */
  CB_ERR_CONFIG = 6,           /* malformed or invalid config */
  CB_ERR_SCHEMA = 7,           /* CSV input does not match the schema */
  CB_ERR_IO = 8,               /* file system failure */
  CB_ERR_INTERNAL = 9
} cb_status;

typedef struct cb_rng cb_rng;
typedef struct cb_model cb_model;
typedef struct cb_learner cb_learner;
typedef struct cb_config cb_config;

CB_API const char* cb_version(void);
CB_API const char* cb_status_name(cb_status status);
/* Message of the last failed call on this thread; "" if none. */
CB_API const char* cb_last_error(void);

/* ---- KL confidence bounds ---------------------------------------------- */

CB_API cb_status cb_bernoulli_kl(double p, double q, double* out);
CB_API cb_status cb_kl_ucb_upper(double mean, uint64_t count, double radius, double* out);
CB_API cb_status cb_kl_ucb_lower(double mean, uint64_t count, double radius, double* out);
/* log T + 3 log log T, T >= 5. */
CB_API cb_status cb_horizon_radius(double horizon, double* out);
/* Observations per item in a BatchRank stage. */
CB_API cb_status cb_stage_length(uint32_t stage, uint64_t horizon, uint64_t* out);

/* ---- random sources ---------------------------------------------------- */

CB_API cb_status cb_rng_create(uint64_t seed, uint64_t stream, cb_rng** out);
CB_API void cb_rng_destroy(cb_rng* rng);

/* ---- click models ------------------------------------------------------ */

CB_API cb_status cb_model_create_cm(const double* alpha, size_t num_items, size_t num_positions,
                                    cb_model** out);
CB_API cb_status cb_model_create_pbm(const double* alpha, size_t num_items, const double* chi,
                                     size_t num_positions, cb_model** out);
CB_API void cb_model_destroy(cb_model* model);
CB_API size_t cb_model_num_items(const cb_model* model);
CB_API size_t cb_model_num_positions(const cb_model* model);

CB_API cb_status cb_model_expected_reward(const cb_model* model, const uint32_t* list,
                                          size_t length, double* out);
CB_API cb_status cb_model_examination_prob(const cb_model* model, const uint32_t* list,
                                           size_t length, size_t position, double* out);
CB_API cb_status cb_model_optimal_list(const cb_model* model, uint32_t* out, size_t length);
/* Simulates one user; writes one click indicator per position. */
CB_API cb_status cb_model_sample(const cb_model* model, const uint32_t* list, size_t length,
                                 cb_rng* rng, uint8_t* clicks);

/* ---- learners ---------------------------------------------------------- */

/* algorithm: "batchrank", "cascadeklucb" or "rankedexp3". */
CB_API cb_status cb_learner_create(const char* algorithm, size_t num_items, size_t num_positions,
                                   uint64_t horizon, cb_learner** out);
CB_API void cb_learner_destroy(cb_learner* learner);
CB_API cb_status cb_learner_choose(cb_learner* learner, cb_rng* rng, uint32_t* list,
                                   size_t length);
CB_API cb_status cb_learner_update(cb_learner* learner, const uint32_t* list,
                                   const uint8_t* clicks, size_t length, cb_rng* rng);

/* ---- regret bound ------------------------------------------------------ */

/* 192 K^3 L / ((1 - alpha_max) delta_min) log T + 4 K L (3e + K). Either
 * term pointer may be NULL. */
CB_API cb_status cb_regret_bound(size_t num_positions, size_t num_items, double horizon,
                                 double alpha_max, double delta_min, double* total,
                                 double* log_term, double* constant_term);

/* ---- experiments ------------------------------------------------------- */

CB_API cb_status cb_config_load(const char* path, cb_config** out);
CB_API cb_status cb_config_parse(const char* text, cb_config** out);
CB_API void cb_config_destroy(cb_config* config);
/* Writes the config text and a terminating NUL if it fits; *required gets
 * the needed size including the NUL. */
CB_API cb_status cb_config_serialize(const cb_config* config, char* buffer, size_t capacity,
                                     size_t* required);
CB_API cb_status cb_config_set_seeds(cb_config* config, const uint64_t* seeds, size_t count);
CB_API cb_status cb_config_set_horizon(cb_config* config, uint64_t horizon);
CB_API cb_status cb_config_set_window(cb_config* config, uint64_t window);

/* Runs every seed of one config; writes results.csv and events.csv. */
CB_API cb_status cb_run(const cb_config* config, size_t parallelism, const char* out_dir);

/* Runs all configs (shared T and window) and additionally writes
 * aggregate.csv and histogram.csv. bin_edges may be NULL for defaults.
 * suboptimal_runs, if not NULL, receives the number of runs whose
 * final-window regret is at least 1e-3. */
CB_API cb_status cb_sweep(const cb_config* const* configs, size_t count, size_t parallelism,
                          const double* bin_edges, size_t num_edges, const char* out_dir,
                          size_t* suboptimal_runs);

/* Reads results CSVs and writes regret.svg and histogram.svg. */
CB_API cb_status cb_plot(const char* const* results_csvs, size_t count, const char* out_dir,
                         const double* bin_edges, size_t num_edges, int log_y);

typedef struct cb_query_family {
  size_t count;
  size_t num_items;
  size_t num_positions;
  const char* model;      /* "cm" or "pbm" */
  const char* chi_decay;  /* "geometric" or "harmonic"; pbm only */
  double geometric_ratio;
  uint64_t horizon;
  uint64_t window;
  const char* algorithms; /* comma separated */
  const uint64_t* run_seeds;
  size_t num_run_seeds;
  uint64_t seed;
} cb_query_family;

/* Fills in the defaults: 60 queries, L = 10, K = 5, cm, T = 1e7. */
CB_API void cb_query_family_init(cb_query_family* family);
/* Writes one <label>_<algorithm>.cfg per (query, algorithm). */
CB_API cb_status cb_gen_queries(const cb_query_family* family, const char* out_dir,
                                size_t* written);

#ifdef __cplusplus
}
#endif

#endif /* CLICKBANDIT_CLICKBANDIT_H_ */
