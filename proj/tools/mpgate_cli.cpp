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

// Command-line front end. Talks to the library only through the C API.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mpgate/mpgate.h"

namespace {

namespace fs = std::filesystem;

// Failure carrying the one-line diagnostic printed before exiting with 1.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failure in user input that should print usage and exit 2.
struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(mpg_status status, const std::string& context) {
  if (status != MPG_OK) throw Failure(context + ": " + mpg_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Table = std::unique_ptr<mpg_table, Deleter<mpg_table, mpg_table_free>>;
using Cells = std::unique_ptr<mpg_cells, Deleter<mpg_cells, mpg_cells_free>>;
using Labels = std::unique_ptr<mpg_labels, Deleter<mpg_labels, mpg_labels_free>>;
using Tree = std::unique_ptr<mpg_tree, Deleter<mpg_tree, mpg_tree_free>>;
using Posterior = std::unique_ptr<mpg_posterior, Deleter<mpg_posterior, mpg_posterior_free>>;

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { mpg_string_free(s); }
  std::string str() const { return s ? std::string(s) : std::string(); }
};

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Failure("write failed for '" + path.string() + "'");
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Failure("cannot create output directory '" + dir.string() + "'");
}

Table load_table(const std::string& path) {
  mpg_table* t = nullptr;
  check(mpg_table_read_file(path.c_str(), &t), "prior table");
  return Table(t);
}

Cells load_cells(const std::string& path) {
  mpg_cells* c = nullptr;
  check(mpg_cells_read_file(path.c_str(), &c), "cells");
  return Cells(c);
}

Labels load_labels(const std::string& path) {
  mpg_labels* l = nullptr;
  check(mpg_labels_read_file(path.c_str(), &l), "labels");
  return Labels(l);
}

Posterior load_posterior(const std::string& path) {
  mpg_posterior* p = nullptr;
  check(mpg_posterior_read_file(path.c_str(), &p), "posterior");
  return Posterior(p);
}

void write_labels(const mpg_labels* labels, const fs::path& path, bool samples) {
  check(mpg_labels_write_file(labels, path.string().c_str(), samples ? 1 : 0), "labels");
}

void write_tree(const mpg_tree* tree, const fs::path& dir, const std::string& stem) {
  OwnedString json, dot;
  check(mpg_tree_to_json(tree, &json.s), "tree export");
  check(mpg_tree_to_dot(tree, &dot.s), "tree export");
  write_text(dir / (stem + ".json"), json.str());
  write_text(dir / (stem + ".dot"), dot.str());
}

double accuracy_of(const mpg_labels* predicted, const mpg_labels* truth) {
  double acc = 0.0;
  check(mpg_accuracy(predicted, truth, &acc), "accuracy");
  return acc;
}

void write_accuracy(const fs::path& dir, const std::vector<std::string>& methods, const std::vector<double>& accs) {
  std::vector<const char*> names;
  for (const auto& m : methods) names.push_back(m.c_str());
  OwnedString csv, text;
  check(mpg_accuracy_table(names.data(), accs.data(), accs.size(), &csv.s, &text.s), "accuracy table");
  write_text(dir / "accuracy.csv", csv.str());
  write_text(dir / "accuracy.txt", text.str());
  std::cout << text.str();
}

std::string chain_summary(const mpg_posterior* post) {
  std::ostringstream out;
  out << "chain,seed,log_prior,log_lik,initial_log_prior,initial_log_lik,acceptance_rate,num_leaves\n";
  for (size_t i = 0; i < mpg_posterior_num_samples(post); ++i) {
    mpg_sample_info info{};
    check(mpg_posterior_sample_info(post, i, &info), "posterior");
    out << info.chain << ',' << info.seed << ',' << format_double(info.log_prior) << ','
        << format_double(info.log_lik) << ',' << format_double(info.initial_log_prior) << ','
        << format_double(info.initial_log_lik) << ',' << format_double(info.acceptance_rate) << ','
        << info.num_leaves << '\n';
  }
  return out.str();
}

struct Globals {
  uint64_t seed = 0;
  std::string config;
  uint32_t threads = 1;
  mpg_hyper hyper{};
  mpg_mcmc_config mcmc{};
};

Posterior run_fit(const Globals& g, const mpg_cells* cells, const mpg_table* table) {
  mpg_mcmc_config cfg = g.mcmc;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  mpg_posterior* p = nullptr;
  check(mpg_fit(cells, table, &g.hyper, &cfg, &p), "fit");
  return Posterior(p);
}

// Reads flat key=value lines. Blank lines and lines starting with '#' are skipped.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure("cannot read config file '" + path + "'");
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageFailure(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return entries;
}

// Applies config entries to options the command line left unset.
void apply_config(CLI::App& app, CLI::App* sub, const std::string& path) {
  for (const auto& [key, value] : read_config(path)) {
    if (key == "config") throw UsageFailure(path + ": nested config files are not supported");
    const std::string flag = "--" + key;
    CLI::Option* opt = sub ? sub->get_option_no_throw(flag) : nullptr;
    if (!opt) opt = app.get_option_no_throw(flag);
    if (!opt) {
      // Keys for other subcommands are allowed so that one file can drive a whole pipeline.
      bool known = false;
      for (CLI::App* other : app.get_subcommands({})) {
        if (other->get_option_no_throw(flag)) known = true;
      }
      if (!known) throw UsageFailure(path + ": unknown key '" + key + "'");
      continue;
    }
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mpgate: Mondrian-process gating of flow-cytometry cells"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  mpg_hyper_default(&g.hyper);
  mpg_mcmc_config_default(&g.mcmc);
  app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_option("--config", g.config, "key=value configuration file; command-line flags take precedence");
  app.add_option("--threads", g.threads, "Worker threads for inference")->capture_default_str()->check(
      CLI::PositiveNumber);
  app.add_option("--gamma0", g.hyper.gamma0, "Dimension weight for disagreeing markers")->capture_default_str();
  app.add_option("--gamma1", g.hyper.gamma1, "Dimension weight for one-sided markers")->capture_default_str();
  app.add_option("--phi0", g.hyper.phi0, "Beta concentration toward the cut center")->capture_default_str();
  app.add_option("--phi1", g.hyper.phi1, "Beta concentration toward the boundary")->capture_default_str();
  app.add_option("--lambda0", g.hyper.lambda0, "Mondrian budget")->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset from a prior table");
  std::string sim_table, sim_out;
  size_t sim_cells = 3000;
  double sim_sep = 2.0;
  simulate->add_option("--table", sim_table, "Prior table CSV")->required();
  simulate->add_option("--cells", sim_cells, "Number of cells")->capture_default_str();
  simulate->add_option("--separation", sim_sep, "Separation multiplier")->capture_default_str();
  simulate->add_option("--out", sim_out, "Output directory")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "Run posterior inference and classify cells");
  std::string fit_cells, fit_table, fit_out;
  bool fit_samples = false;
  fit->add_option("--cells", fit_cells, "Cell CSV")->required();
  fit->add_option("--table", fit_table, "Prior table CSV")->required();
  fit->add_option("--out", fit_out, "Output directory")->required();
  fit->add_option("--chains", g.mcmc.chains, "Independent chains")->capture_default_str();
  fit->add_option("--iterations", g.mcmc.iterations, "MCMC iterations per chain")->capture_default_str();
  fit->add_option("--step", g.mcmc.step, "Proposal standard deviation")->capture_default_str();
  fit->add_flag("--per-sample-labels", fit_samples, "Add one label column per posterior sample");

  // classify
  auto* classify = app.add_subcommand("classify", "Classify cells with a saved posterior");
  std::string cls_post, cls_cells, cls_out;
  bool cls_samples = false;
  classify->add_option("--posterior", cls_post, "Posterior JSON written by fit")->required();
  classify->add_option("--cells", cls_cells, "Cell CSV")->required();
  classify->add_option("--out", cls_out, "Output label CSV")->required();
  classify->add_flag("--per-sample-labels", cls_samples, "Add one label column per posterior sample");

  // plot
  auto* plot = app.add_subcommand("plot", "Render posterior cuts over a two-marker scatter");
  std::string plot_post, plot_cells, plot_out;
  std::vector<std::string> plot_dims;
  plot->add_option("--posterior", plot_post, "Posterior JSON written by fit")->required();
  plot->add_option("--cells", plot_cells, "Cell CSV")->required();
  plot->add_option("--dims", plot_dims, "Marker pair X,Y (repeatable)")->required()->take_all();
  plot->add_option("--out", plot_out, "Output directory")->required();

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Run the GMM and MP-Prior baselines");
  std::string base_cells, base_table, base_truth, base_out;
  size_t base_components = 0, base_samples = 50;
  baseline->add_option("--cells", base_cells, "Cell CSV")->required();
  baseline->add_option("--table", base_table, "Prior table CSV")->required();
  baseline->add_option("--truth", base_truth, "Ground-truth label CSV");
  baseline->add_option("--out", base_out, "Output directory")->required();
  baseline->add_option("--components", base_components, "GMM components (0 = number of types)")
      ->capture_default_str();
  baseline->add_option("--samples", base_samples, "Prior trees for MP-Prior")->capture_default_str()->check(
      CLI::PositiveNumber);

  // compare
  auto* compare = app.add_subcommand("compare", "Accuracy of MP-GMM, GMM and MP-Prior against truth");
  std::string cmp_cells, cmp_table, cmp_truth, cmp_out, cmp_fit_labels;
  compare->add_option("--cells", cmp_cells, "Cell CSV")->required();
  compare->add_option("--table", cmp_table, "Prior table CSV")->required();
  compare->add_option("--truth", cmp_truth, "Ground-truth label CSV")->required();
  compare->add_option("--out", cmp_out, "Output directory")->required();
  compare->add_option("--fit-labels", cmp_fit_labels, "Labels from a previous fit (skips inference)");
  compare->add_option("--chains", g.mcmc.chains, "Independent chains")->capture_default_str();
  compare->add_option("--iterations", g.mcmc.iterations, "MCMC iterations per chain")->capture_default_str();
  compare->add_option("--step", g.mcmc.step, "Proposal standard deviation")->capture_default_str();
  compare->add_option("--components", base_components, "GMM components (0 = number of types)")
      ->capture_default_str();
  compare->add_option("--samples", base_samples, "Prior trees for MP-Prior")->capture_default_str()->check(
      CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!g.config.empty()) apply_config(app, sub, g.config);

    if (sub == simulate) {
      const fs::path out(sim_out);
      make_dir(out);
      Table table = load_table(sim_table);
      mpg_cells* c = nullptr;
      mpg_labels* l = nullptr;
      mpg_tree* t = nullptr;
      check(mpg_simulate(table.get(), &g.hyper, sim_cells, sim_sep, g.seed, &c, &l, &t), "simulate");
      Cells cells(c);
      Labels truth(l);
      Tree tree(t);
      check(mpg_cells_write_file(cells.get(), (out / "cells.csv").string().c_str()), "cells");
      write_labels(truth.get(), out / "truth.csv", false);
      write_tree(tree.get(), out, "tree");
    } else if (sub == fit) {
      const fs::path out(fit_out);
      Table table = load_table(fit_table);
      Cells cells = load_cells(fit_cells);
      make_dir(out);
      Posterior post = run_fit(g, cells.get(), table.get());
      mpg_labels* l = nullptr;
      check(mpg_posterior_classify(post.get(), cells.get(), &l), "classify");
      Labels labels(l);
      mpg_tree* t = nullptr;
      check(mpg_posterior_map_tree(post.get(), &t), "posterior");
      Tree map_tree(t);
      check(mpg_posterior_write_file(post.get(), (out / "posterior.json").string().c_str()), "posterior");
      check(mpg_posterior_write_trace(post.get(), (out / "trace.csv").string().c_str()), "trace");
      write_text(out / "chains.csv", chain_summary(post.get()));
      write_labels(labels.get(), out / "labels.csv", fit_samples);
      write_tree(map_tree.get(), out, "map_tree");
    } else if (sub == classify) {
      Posterior post = load_posterior(cls_post);
      Cells cells = load_cells(cls_cells);
      mpg_labels* l = nullptr;
      check(mpg_posterior_classify(post.get(), cells.get(), &l), "classify");
      Labels labels(l);
      write_labels(labels.get(), fs::path(cls_out), cls_samples);
    } else if (sub == plot) {
      const fs::path out(plot_out);
      std::vector<std::pair<std::string, std::string>> pairs;
      for (const auto& spec : plot_dims) {
        const auto comma = spec.find(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 == spec.size() ||
            spec.find(',', comma + 1) != std::string::npos) {
          throw UsageFailure("--dims expects X,Y but got '" + spec + "'");
        }
        pairs.emplace_back(spec.substr(0, comma), spec.substr(comma + 1));
      }
      Posterior post = load_posterior(plot_post);
      Cells cells = load_cells(plot_cells);
      make_dir(out);
      for (const auto& [x, y] : pairs) {
        OwnedString svg;
        check(mpg_render_posterior_cuts(post.get(), cells.get(), x.c_str(), y.c_str(), &svg.s), "plot");
        write_text(out / ("posterior_" + x + "_vs_" + y + ".svg"), svg.str());
      }
    } else if (sub == baseline || sub == compare) {
      const bool full = sub == compare;
      const fs::path out(full ? cmp_out : base_out);
      Table table = load_table(full ? cmp_table : base_table);
      Cells cells = load_cells(full ? cmp_cells : base_cells);
      const std::string truth_path = full ? cmp_truth : base_truth;
      Labels truth = truth_path.empty() ? Labels() : load_labels(truth_path);
      make_dir(out);

      std::vector<std::string> methods;
      std::vector<double> accs;
      if (full) {
        Labels fitted;
        if (!cmp_fit_labels.empty()) {
          fitted = load_labels(cmp_fit_labels);
        } else {
          Posterior post = run_fit(g, cells.get(), table.get());
          mpg_labels* l = nullptr;
          check(mpg_posterior_classify(post.get(), cells.get(), &l), "classify");
          fitted.reset(l);
          write_labels(fitted.get(), out / "mp_gmm_labels.csv", false);
        }
        methods.push_back("MP-GMM");
        accs.push_back(accuracy_of(fitted.get(), truth.get()));
      }
      mpg_labels* l = nullptr;
      check(mpg_gmm_classify(cells.get(), table.get(), base_components, g.seed, &l), "gmm baseline");
      Labels gmm(l);
      l = nullptr;
      check(mpg_mp_prior_classify(cells.get(), table.get(), &g.hyper, base_samples, g.seed, &l),
            "mp-prior baseline");
      Labels prior(l);
      write_labels(gmm.get(), out / "gmm_labels.csv", false);
      write_labels(prior.get(), out / "mp_prior_labels.csv", false);
      if (truth) {
        methods.push_back("GMM");
        accs.push_back(accuracy_of(gmm.get(), truth.get()));
        methods.push_back("MP-Prior");
        accs.push_back(accuracy_of(prior.get(), truth.get()));
        write_accuracy(out, methods, accs);
      }
    }
  } catch (const UsageFailure& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mpgate: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
