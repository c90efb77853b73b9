// Copyright 2026 The mpgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpgate/mpgate.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpgate/baselines.hpp"
#include "mpgate/classify.hpp"
#include "mpgate/csv.hpp"
#include "mpgate/emissions.hpp"
#include "mpgate/error.hpp"
#include "mpgate/inference.hpp"
#include "mpgate/posterior_io.hpp"
#include "mpgate/prior_table.hpp"
#include "mpgate/render.hpp"
#include "mpgate/synthetic.hpp"
#include "mpgate/tree_io.hpp"

struct mpg_table {
  mpgate::PriorTable table;
};
struct mpg_cells {
  mpgate::CellMatrix cells;
};
struct mpg_labels {
  mpgate::VoteResult voted;
  std::vector<mpgate::LabelVector> per_sample;
};
struct mpg_tree {
  mpgate::MondrianTree tree;
  std::vector<std::string> markers;
};
struct mpg_posterior {
  mpgate::Posterior posterior;
};

namespace {

thread_local std::string g_last_error;

mpg_status to_status(mpgate::ErrorCode code) {
  using mpgate::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return MPG_ERR_INVALID_ARGUMENT;
    case ErrorCode::kInvalidCut: return MPG_ERR_INVALID_CUT;
    case ErrorCode::kInvalidWeight: return MPG_ERR_INVALID_WEIGHT;
    case ErrorCode::kInvalidDomain: return MPG_ERR_INVALID_DOMAIN;
    case ErrorCode::kOutOfDomain: return MPG_ERR_OUT_OF_DOMAIN;
    case ErrorCode::kParse: return MPG_ERR_PARSE;
    case ErrorCode::kInconsistent: return MPG_ERR_INCONSISTENT;
    case ErrorCode::kIo: return MPG_ERR_IO;
    case ErrorCode::kDepthExceeded: return MPG_ERR_DEPTH_EXCEEDED;
    case ErrorCode::kLengthMismatch: return MPG_ERR_LENGTH_MISMATCH;
  }
  return MPG_ERR_INTERNAL;
}

template <typename F>
mpg_status guarded(F&& body) {
  try {
    body();
    return MPG_OK;
  } catch (const mpgate::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MPG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MPG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return MPG_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw mpgate::Error(mpgate::ErrorCode::kInvalidArgument, what);
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

mpgate::Hyperparameters to_hyper(const mpg_hyper* h) {
  if (!h) return {};
  return {h->gamma0, h->gamma1, h->phi0, h->phi1, h->lambda0};
}

mpgate::MCMCConfig to_config(const mpg_mcmc_config* c) {
  mpgate::MCMCConfig out;
  if (c) {
    out.chains = c->chains;
    out.iterations = c->iterations;
    out.step = c->step;
    out.seed = c->seed;
    out.threads = c->threads;
  }
  return out;
}

mpgate::VoteResult single(mpgate::LabelVector labels) {
  std::vector<double> fraction(labels.size(), 1.0);
  return {std::move(labels), std::move(fraction)};
}

}  // namespace

extern "C" {

const char* mpg_version(void) { return "1.0.0"; }

const char* mpg_last_error(void) { return g_last_error.c_str(); }

const char* mpg_status_name(mpg_status status) {
  switch (status) {
    case MPG_OK: return "ok";
    case MPG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MPG_ERR_INVALID_CUT: return "invalid cut";
    case MPG_ERR_INVALID_WEIGHT: return "invalid weight";
    case MPG_ERR_INVALID_DOMAIN: return "invalid domain";
    case MPG_ERR_OUT_OF_DOMAIN: return "out of domain";
    case MPG_ERR_PARSE: return "parse error";
    case MPG_ERR_INCONSISTENT: return "inconsistent input";
    case MPG_ERR_IO: return "i/o error";
    case MPG_ERR_DEPTH_EXCEEDED: return "depth exceeded";
    case MPG_ERR_LENGTH_MISMATCH: return "length mismatch";
    case MPG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void mpg_string_free(char* s) { delete[] s; }

void mpg_hyper_default(mpg_hyper* out) {
  if (!out) return;
  const mpgate::Hyperparameters h;
  *out = {h.gamma0, h.gamma1, h.phi0, h.phi1, h.lambda0};
}

void mpg_mcmc_config_default(mpg_mcmc_config* out) {
  if (!out) return;
  const mpgate::MCMCConfig c;
  *out = {static_cast<uint32_t>(c.chains), static_cast<uint32_t>(c.iterations), c.step, c.seed,
          static_cast<uint32_t>(c.threads)};
}

// ---- prior table ----

mpg_status mpg_table_parse(const char* csv_text, mpg_table** out) {
  return guarded([&] {
    require(csv_text && out, "mpg_table_parse: null argument");
    *out = new mpg_table{mpgate::parse_table(csv_text)};
  });
}

mpg_status mpg_table_read_file(const char* path, mpg_table** out) {
  return guarded([&] {
    require(path && out, "mpg_table_read_file: null argument");
    *out = new mpg_table{mpgate::read_table_file(path)};
  });
}

void mpg_table_free(mpg_table* table) { delete table; }
size_t mpg_table_num_types(const mpg_table* t) { return t ? t->table.num_types() : 0; }
size_t mpg_table_num_markers(const mpg_table* t) { return t ? t->table.num_markers() : 0; }

const char* mpg_table_type_name(const mpg_table* t, size_t i) {
  return t && i < t->table.num_types() ? t->table.types()[i].c_str() : nullptr;
}

const char* mpg_table_marker_name(const mpg_table* t, size_t i) {
  return t && i < t->table.num_markers() ? t->table.markers()[i].c_str() : nullptr;
}

// ---- cells ----

mpg_status mpg_cells_read_file(const char* path, mpg_cells** out) {
  return guarded([&] {
    require(path && out, "mpg_cells_read_file: null argument");
    *out = new mpg_cells{mpgate::read_cells_file(path)};
  });
}

mpg_status mpg_cells_write_file(const mpg_cells* cells, const char* path) {
  return guarded([&] {
    require(cells && path, "mpg_cells_write_file: null argument");
    mpgate::csv::write_file(path, mpgate::serialize_cells(cells->cells));
  });
}

void mpg_cells_free(mpg_cells* cells) { delete cells; }
size_t mpg_cells_rows(const mpg_cells* c) { return c ? c->cells.rows() : 0; }
size_t mpg_cells_cols(const mpg_cells* c) { return c ? c->cells.cols() : 0; }

double mpg_cells_value(const mpg_cells* c, size_t row, size_t col) {
  if (!c || row >= c->cells.rows() || col >= c->cells.cols()) return 0.0;
  return c->cells.at(row, col);
}

// ---- labels ----

mpg_status mpg_labels_read_file(const char* path, mpg_labels** out) {
  return guarded([&] {
    require(path && out, "mpg_labels_read_file: null argument");
    *out = new mpg_labels{single(mpgate::read_labels_file(path)), {}};
  });
}

mpg_status mpg_labels_write_file(const mpg_labels* labels, const char* path, int include_samples) {
  return guarded([&] {
    require(labels && path, "mpg_labels_write_file: null argument");
    static const std::vector<mpgate::LabelVector> none;
    mpgate::csv::write_file(
        path, mpgate::export_labels(labels->voted, include_samples ? labels->per_sample : none));
  });
}

void mpg_labels_free(mpg_labels* labels) { delete labels; }
size_t mpg_labels_size(const mpg_labels* l) { return l ? l->voted.labels.size() : 0; }

const char* mpg_labels_get(const mpg_labels* l, size_t i) {
  return l && i < l->voted.labels.size() ? l->voted.labels[i].c_str() : nullptr;
}

mpg_status mpg_accuracy(const mpg_labels* predicted, const mpg_labels* truth, double* out) {
  return guarded([&] {
    require(predicted && truth && out, "mpg_accuracy: null argument");
    *out = mpgate::accuracy(predicted->voted.labels, truth->voted.labels);
  });
}

// ---- trees ----

mpg_status mpg_tree_to_json(const mpg_tree* tree, char** out) {
  return guarded([&] {
    require(tree && out, "mpg_tree_to_json: null argument");
    *out = copy_string(mpgate::export_tree_json(tree->tree, tree->markers));
  });
}

mpg_status mpg_tree_to_dot(const mpg_tree* tree, char** out) {
  return guarded([&] {
    require(tree && out, "mpg_tree_to_dot: null argument");
    *out = copy_string(mpgate::export_tree_dot(tree->tree, tree->markers));
  });
}

mpg_status mpg_tree_parse_json(const char* text, mpg_tree** out) {
  return guarded([&] {
    require(text && out, "mpg_tree_parse_json: null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw mpgate::Error(mpgate::ErrorCode::kParse, std::string("tree document: ") + e.what());
    }
    auto tree = mpgate::tree_from_json(j);
    *out = new mpg_tree{std::move(tree), j.at("markers").get<std::vector<std::string>>()};
  });
}

void mpg_tree_free(mpg_tree* tree) { delete tree; }
size_t mpg_tree_num_leaves(const mpg_tree* t) { return t ? t->tree.num_cuts() + 1 : 0; }
size_t mpg_tree_num_cuts(const mpg_tree* t) { return t ? t->tree.num_cuts() : 0; }

// ---- synthetic data ----

mpg_status mpg_simulate(const mpg_table* table, const mpg_hyper* hyper, size_t cells, double separation,
                        uint64_t seed, mpg_cells** cells_out, mpg_labels** truth_out, mpg_tree** tree_out) {
  return guarded([&] {
    require(table != nullptr, "mpg_simulate: null table");
    mpgate::SyntheticSpec spec{table->table, to_hyper(hyper), cells, separation, seed};
    auto data = mpgate::generate_synthetic(spec);
    // Allocate everything before publishing so a failure leaks nothing.
    auto c = std::make_unique<mpg_cells>(mpg_cells{std::move(data.cells)});
    auto l = std::make_unique<mpg_labels>(mpg_labels{single(std::move(data.truth)), {}});
    auto t = std::make_unique<mpg_tree>(mpg_tree{std::move(data.tree), table->table.markers()});
    if (cells_out) *cells_out = c.release();
    if (truth_out) *truth_out = l.release();
    if (tree_out) *tree_out = t.release();
  });
}

// ---- inference ----

mpg_status mpg_fit(const mpg_cells* cells, const mpg_table* table, const mpg_hyper* hyper,
                   const mpg_mcmc_config* config, mpg_posterior** out) {
  return guarded([&] {
    require(cells && table && out, "mpg_fit: null argument");
    const auto aligned = mpgate::align_to_markers(cells->cells, table->table.markers());
    *out = new mpg_posterior{mpgate::fit_posterior(aligned, table->table, to_hyper(hyper), to_config(config))};
  });
}

mpg_status mpg_posterior_read_file(const char* path, mpg_posterior** out) {
  return guarded([&] {
    require(path && out, "mpg_posterior_read_file: null argument");
    const std::string text = mpgate::csv::read_file(path);
    try {
      *out = new mpg_posterior{mpgate::parse_posterior(text)};
    } catch (const mpgate::Error& e) {
      throw mpgate::Error(e.code(), std::string(path) + ": " + e.what());
    }
  });
}

mpg_status mpg_posterior_write_file(const mpg_posterior* p, const char* path) {
  return guarded([&] {
    require(p && path, "mpg_posterior_write_file: null argument");
    mpgate::csv::write_file(path, mpgate::export_posterior(p->posterior));
  });
}

mpg_status mpg_posterior_write_trace(const mpg_posterior* p, const char* path) {
  return guarded([&] {
    require(p && path, "mpg_posterior_write_trace: null argument");
    mpgate::csv::write_file(path, mpgate::export_trace(p->posterior.trace));
  });
}

void mpg_posterior_free(mpg_posterior* p) { delete p; }
size_t mpg_posterior_num_samples(const mpg_posterior* p) { return p ? p->posterior.samples.size() : 0; }

mpg_status mpg_posterior_sample_info(const mpg_posterior* p, size_t index, mpg_sample_info* out) {
  return guarded([&] {
    require(p && out, "mpg_posterior_sample_info: null argument");
    require(index < p->posterior.samples.size(), "mpg_posterior_sample_info: index out of range");
    const auto& s = p->posterior.samples[index];
    *out = {s.chain, s.seed, s.log_prior, s.log_lik, s.initial_log_prior, s.initial_log_lik,
            s.acceptance_rate, s.tree.num_cuts() + 1};
  });
}

mpg_status mpg_posterior_map_tree(const mpg_posterior* p, mpg_tree** out) {
  return guarded([&] {
    require(p && out, "mpg_posterior_map_tree: null argument");
    const auto& post = p->posterior;
    *out = new mpg_tree{post.samples.at(post.map_index()).tree, post.table.markers()};
  });
}

mpg_status mpg_posterior_classify(const mpg_posterior* p, const mpg_cells* cells, mpg_labels** out) {
  return guarded([&] {
    require(p && cells && out, "mpg_posterior_classify: null argument");
    const auto aligned = mpgate::align_to_markers(cells->cells, p->posterior.table.markers());
    auto result = mpgate::classify_posterior(p->posterior, aligned);
    *out = new mpg_labels{std::move(result.voted), std::move(result.per_sample)};
  });
}

mpg_status mpg_render_posterior_cuts(const mpg_posterior* p, const mpg_cells* cells, const char* x_marker,
                                     const char* y_marker, char** svg_out) {
  return guarded([&] {
    require(p && cells && x_marker && y_marker && svg_out, "mpg_render_posterior_cuts: null argument");
    const auto& table = p->posterior.table;
    const std::size_t x = table.marker_index(x_marker);
    const std::size_t y = table.marker_index(y_marker);
    if (x >= table.num_markers() || y >= table.num_markers()) {
      throw mpgate::Error(mpgate::ErrorCode::kInvalidArgument,
                          std::string("unknown plot marker '") + (x >= table.num_markers() ? x_marker : y_marker) +
                              "'");
    }
    const auto aligned = mpgate::align_to_markers(cells->cells, table.markers());
    std::vector<mpgate::MondrianTree> trees;
    for (const auto& s : p->posterior.samples) trees.push_back(s.tree);
    *svg_out = copy_string(mpgate::render_posterior_cuts(trees, aligned, x, y));
  });
}

// ---- baselines ----

mpg_status mpg_gmm_classify(const mpg_cells* cells, const mpg_table* table, size_t components, uint64_t seed,
                            mpg_labels** out) {
  return guarded([&] {
    require(cells && table && out, "mpg_gmm_classify: null argument");
    const auto aligned = mpgate::align_to_markers(cells->cells, table->table.markers());
    const std::size_t k = components ? components : table->table.num_types();
    const auto fit = mpgate::gmm_em_fit(aligned, k, seed);
    *out = new mpg_labels{single(mpgate::gmm_classify(fit.components, aligned, table->table)), {}};
  });
}

mpg_status mpg_mp_prior_classify(const mpg_cells* cells, const mpg_table* table, const mpg_hyper* hyper,
                                 size_t samples, uint64_t seed, mpg_labels** out) {
  return guarded([&] {
    require(cells && table && out, "mpg_mp_prior_classify: null argument");
    const auto aligned = mpgate::align_to_markers(cells->cells, table->table.markers());
    *out = new mpg_labels{mpgate::mp_prior_classify(aligned, table->table, to_hyper(hyper), samples, seed), {}};
  });
}

mpg_status mpg_accuracy_table(const char* const* methods, const double* accuracies, size_t count, char** csv_out,
                              char** text_out) {
  return guarded([&] {
    require((methods && accuracies) || count == 0, "mpg_accuracy_table: null argument");
    std::vector<std::pair<std::string, double>> rows;
    for (size_t i = 0; i < count; ++i) {
      require(methods[i] != nullptr, "mpg_accuracy_table: null method name");
      rows.emplace_back(methods[i], accuracies[i]);
    }
    std::string csv = mpgate::export_accuracy_csv(rows);
    std::string text = mpgate::export_accuracy_text(rows);
    char* c = csv_out ? copy_string(csv) : nullptr;
    if (text_out) {
      try {
        *text_out = copy_string(text);
      } catch (...) {
        delete[] c;
        throw;
      }
    }
    if (csv_out) *csv_out = c;
  });
}

}  // extern "C"
