/*
 * Copyright 2026 The mpgate Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to mpgate: prior-informed Mondrian process gating of flow
 * cytometry data with Gaussian leaf emissions.
 *
 * Every object is an opaque handle released with its *_free function. Every
 * fallible call returns an mpg_status; on failure the out-parameters are left
 * untouched and mpg_last_error() describes the problem (per thread, valid
 * until the next failing call on that thread). Strings returned through
 * char** out-parameters are owned by the caller and released with
 * mpg_string_free(). Strings returned directly (const char*) are owned by the
 * handle they came from.
 */

#ifndef MPGATE_MPGATE_H_
#define MPGATE_MPGATE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(MPGATE_BUILDING_LIBRARY)
#define MPGATE_API __attribute__((visibility("default")))
#else
#define MPGATE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mpg_status {
  MPG_OK = 0,
  MPG_ERR_INVALID_ARGUMENT = 1,
  MPG_ERR_INVALID_CUT = 2,
  MPG_ERR_INVALID_WEIGHT = 3,
  MPG_ERR_INVALID_DOMAIN = 4,
  MPG_ERR_OUT_OF_DOMAIN = 5,
  MPG_ERR_PARSE = 6,
  MPG_ERR_INCONSISTENT = 7,
  MPG_ERR_IO = 8,
  MPG_ERR_DEPTH_EXCEEDED = 9,
  MPG_ERR_LENGTH_MISMATCH = 10,
  MPG_ERR_INTERNAL = 99
} mpg_status;

typedef struct mpg_table mpg_table;         /* prior information table */
typedef struct mpg_cells mpg_cells;         /* N x D marker matrix */
typedef struct mpg_labels mpg_labels;       /* per-cell labels (+ vote data) */
typedef struct mpg_tree mpg_tree;           /* one Mondrian tree */
typedef struct mpg_posterior mpg_posterior; /* posterior samples + trace */

typedef struct mpg_hyper {
  double gamma0;
  double gamma1;
  double phi0;
  double phi1;
  double lambda0;
} mpg_hyper;

typedef struct mpg_mcmc_config {
  uint32_t chains;
  uint32_t iterations;
  double step;
  uint64_t seed;
  uint32_t threads;
} mpg_mcmc_config;

typedef struct mpg_sample_info {
  size_t chain;
  uint64_t seed;
  double log_prior;
  double log_lik;
  double initial_log_prior;
  double initial_log_lik;
  double acceptance_rate;
  size_t num_leaves;
} mpg_sample_info;

MPGATE_API const char* mpg_version(void);
MPGATE_API const char* mpg_last_error(void);
MPGATE_API const char* mpg_status_name(mpg_status status);
MPGATE_API void mpg_string_free(char* s);

/* gamma0=100, gamma1=1, phi0=5, phi1=2, lambda0=1 */
MPGATE_API void mpg_hyper_default(mpg_hyper* out);
/* 50 chains, 2000 iterations, step 0.05, seed 0, 1 thread */
MPGATE_API void mpg_mcmc_config_default(mpg_mcmc_config* out);

/* ---- prior table ---- */
MPGATE_API mpg_status mpg_table_parse(const char* csv_text, mpg_table** out);
MPGATE_API mpg_status mpg_table_read_file(const char* path, mpg_table** out);
MPGATE_API void mpg_table_free(mpg_table* table);
MPGATE_API size_t mpg_table_num_types(const mpg_table* table);
MPGATE_API size_t mpg_table_num_markers(const mpg_table* table);
MPGATE_API const char* mpg_table_type_name(const mpg_table* table, size_t index);
MPGATE_API const char* mpg_table_marker_name(const mpg_table* table, size_t index);

/* ---- cells ---- */
MPGATE_API mpg_status mpg_cells_read_file(const char* path, mpg_cells** out);
MPGATE_API mpg_status mpg_cells_write_file(const mpg_cells* cells, const char* path);
MPGATE_API void mpg_cells_free(mpg_cells* cells);
MPGATE_API size_t mpg_cells_rows(const mpg_cells* cells);
MPGATE_API size_t mpg_cells_cols(const mpg_cells* cells);
MPGATE_API double mpg_cells_value(const mpg_cells* cells, size_t row, size_t col);

/* ---- labels ---- */
MPGATE_API mpg_status mpg_labels_read_file(const char* path, mpg_labels** out);
/* include_samples != 0 adds one column per posterior sample when available. */
MPGATE_API mpg_status mpg_labels_write_file(const mpg_labels* labels, const char* path,
                                            int include_samples);
MPGATE_API void mpg_labels_free(mpg_labels* labels);
MPGATE_API size_t mpg_labels_size(const mpg_labels* labels);
MPGATE_API const char* mpg_labels_get(const mpg_labels* labels, size_t index);
MPGATE_API mpg_status mpg_accuracy(const mpg_labels* predicted, const mpg_labels* truth,
                                   double* out);

/* ---- trees ---- */
MPGATE_API mpg_status mpg_tree_to_json(const mpg_tree* tree, char** out);
MPGATE_API mpg_status mpg_tree_to_dot(const mpg_tree* tree, char** out);
MPGATE_API mpg_status mpg_tree_parse_json(const char* text, mpg_tree** out);
MPGATE_API void mpg_tree_free(mpg_tree* tree);
MPGATE_API size_t mpg_tree_num_leaves(const mpg_tree* tree);
MPGATE_API size_t mpg_tree_num_cuts(const mpg_tree* tree);

/* ---- synthetic data ---- */
/* Any of the out-parameters may be NULL if the caller does not need it. */
MPGATE_API mpg_status mpg_simulate(const mpg_table* table, const mpg_hyper* hyper, size_t cells,
                                   double separation, uint64_t seed, mpg_cells** cells_out,
                                   mpg_labels** truth_out, mpg_tree** tree_out);

/* ---- inference ---- */
/* Cells are matched to table markers by name. */
MPGATE_API mpg_status mpg_fit(const mpg_cells* cells, const mpg_table* table,
                              const mpg_hyper* hyper, const mpg_mcmc_config* config,
                              mpg_posterior** out);
MPGATE_API mpg_status mpg_posterior_read_file(const char* path, mpg_posterior** out);
MPGATE_API mpg_status mpg_posterior_write_file(const mpg_posterior* posterior, const char* path);
/* chain,iteration,log_prior,log_lik,acceptance_rate; empty for loaded posteriors. */
MPGATE_API mpg_status mpg_posterior_write_trace(const mpg_posterior* posterior, const char* path);
MPGATE_API void mpg_posterior_free(mpg_posterior* posterior);
MPGATE_API size_t mpg_posterior_num_samples(const mpg_posterior* posterior);
MPGATE_API mpg_status mpg_posterior_sample_info(const mpg_posterior* posterior, size_t index,
                                                mpg_sample_info* out);
/* Highest log posterior sample. */
MPGATE_API mpg_status mpg_posterior_map_tree(const mpg_posterior* posterior, mpg_tree** out);
MPGATE_API mpg_status mpg_posterior_classify(const mpg_posterior* posterior, const mpg_cells* cells,
                                             mpg_labels** out);
MPGATE_API mpg_status mpg_render_posterior_cuts(const mpg_posterior* posterior,
                                                const mpg_cells* cells, const char* x_marker,
                                                const char* y_marker, char** svg_out);

/* ---- baselines ---- */
/* components == 0 uses the table's type count. */
MPGATE_API mpg_status mpg_gmm_classify(const mpg_cells* cells, const mpg_table* table,
                                       size_t components, uint64_t seed, mpg_labels** out);
MPGATE_API mpg_status mpg_mp_prior_classify(const mpg_cells* cells, const mpg_table* table,
                                            const mpg_hyper* hyper, size_t samples, uint64_t seed,
                                            mpg_labels** out);

/* Accuracy table as CSV (method,accuracy) and aligned text. */
MPGATE_API mpg_status mpg_accuracy_table(const char* const* methods, const double* accuracies,
                                         size_t count, char** csv_out, char** text_out);

#ifdef __cplusplus
}
#endif

#endif /* MPGATE_MPGATE_H_ */
