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

#include "mpgate/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "mpgate/error.hpp"

namespace mpgate {

void MCMCConfig::validate() const {
  if (chains < 1) throw Error(ErrorCode::kInvalidArgument, "MCMC needs at least one chain");
  if (!(step > 0.0 && step < 1.0)) throw Error(ErrorCode::kInvalidArgument, "proposal step must lie in (0,1)");
  if (threads < 1) throw Error(ErrorCode::kInvalidArgument, "thread count must be at least 1");
  if (trace_every < 1) throw Error(ErrorCode::kInvalidArgument, "trace interval must be at least 1");
}

std::uint64_t chain_seed(std::uint64_t master, std::size_t index) {
  return RandomSource(master).derive(index).seed();
}

RandomSource chain_stream(std::uint64_t seed, Stream stream) {
  return RandomSource(seed).derive(static_cast<std::uint64_t>(stream));
}

std::vector<LeafGaussian> Chain::leaf_gaussians() const {
  std::vector<LeafGaussian> out;
  for (NodeId leaf : tree.leaves()) out.push_back(gaussians[leaf]);
  return out;
}

MondrianTree Chain::annotated_tree() const {
  MondrianTree t = tree;
  for (NodeId leaf : t.leaves()) t.set_gaussian(leaf, gaussians[leaf]);
  return t;
}

namespace {

// Refits the leaves in the node range [first, last) from the cells whose
// owner lies in that range, writing into `gaussians` and `leaf_log_lik`.
void refit_range(const MondrianTree& tree, const CellMatrix& data, std::span<const NodeId> owner,
                 NodeId first, NodeId last, std::vector<LeafGaussian>& gaussians,
                 std::vector<double>& leaf_log_lik, std::vector<std::vector<std::size_t>>& members) {
  for (NodeId id = first; id < last; ++id) members[id].clear();
  for (std::size_t i = 0; i < owner.size(); ++i) {
    if (owner[i] >= first && owner[i] < last) members[owner[i]].push_back(i);
  }
  for (NodeId id = first; id < last; ++id) {
    const Node& n = tree.node(id);
    if (!n.is_leaf()) continue;
    gaussians[id] = fit_gaussian(data, members[id], n.box, tree.domain());
    double sum = 0.0;
    for (std::size_t i : members[id]) sum += gaussian_log_density(data.row(i), gaussians[id]);
    leaf_log_lik[id] = sum;
  }
}

double sum_leaves(const MondrianTree& tree, std::span<const double> leaf_log_lik) {
  double total = 0.0;
  for (NodeId id = 0; id < tree.size(); ++id) {
    if (tree.node(id).is_leaf()) total += leaf_log_lik[id];
  }
  return total;
}

}  // namespace

Chain make_chain(MondrianTree tree, const PriorTable& table, const Hyperparameters& hyper,
                 const CellMatrix& data, std::size_t index, std::uint64_t seed, bool use_likelihood) {
  Chain c;
  c.index = index;
  c.seed = seed;
  c.prior = TreePrior(tree, table, hyper);
  c.tree = std::move(tree);
  c.tree.clear_gaussians();
  c.use_likelihood = use_likelihood;
  c.rng = chain_stream(seed, Stream::kMcmc);
  c.log_prior = c.prior.evaluate(c.tree);
  c.gaussians.assign(c.tree.size(), LeafGaussian{});
  c.leaf_log_lik.assign(c.tree.size(), 0.0);
  c.owner = assign(c.tree, data);
  std::vector<std::vector<std::size_t>> members(c.tree.size());
  refit_range(c.tree, data, c.owner, 0, c.tree.size(), c.gaussians, c.leaf_log_lik, members);
  c.log_lik = sum_leaves(c.tree, c.leaf_log_lik);
  c.initial_log_prior = c.log_prior;
  c.initial_log_lik = c.log_lik;
  return c;
}

std::vector<Chain> init_chains(const MCMCConfig& config, const AxisBox& box, const PriorTable& table,
                               const Hyperparameters& hyper, const CellMatrix& data) {
  config.validate();
  hyper.validate();
  std::vector<Chain> chains;
  chains.reserve(config.chains);
  for (std::size_t i = 0; i < config.chains; ++i) {
    const std::uint64_t seed = chain_seed(config.seed, i);
    RandomSource rng = chain_stream(seed, Stream::kPrior);
    MondrianTree tree = sample_mondrian(hyper.lambda0, box, table, hyper, rng);
    chains.push_back(make_chain(std::move(tree), table, hyper, data, i, seed, config.use_likelihood));
  }
  return chains;
}

double reflect_unit(double x) {
  for (int guard = 0; guard < 64; ++guard) {
    if (x < 0.0) x = -x;
    else if (x > 1.0) x = 2.0 - x;
    else return x;
  }
  return std::clamp(x, 0.0, 1.0);
}

Proposal perturb(const MondrianTree& tree, NodeId node, double relative) {
  Proposal p{tree, node, true};
  try {
    p.tree.set_relative_position(node, relative);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInvalidCut) throw;
    p.valid = false;
  }
  return p;
}

Proposal propose_perturbation(Chain& chain, double step) {
  const std::size_t cuts = chain.tree.num_cuts();
  if (cuts == 0) return Proposal{chain.tree, kNoNode, true};
  // Internal node k in preorder; draw the ordinal, then locate it.
  std::size_t k = chain.rng.uniform_index(cuts);
  NodeId node = 0;
  for (NodeId id = 0; id < chain.tree.size(); ++id) {
    if (chain.tree.node(id).is_leaf()) continue;
    if (k-- == 0) {
      node = id;
      break;
    }
  }
  const double r = chain.tree.node(node).cut->relative + step * chain.rng.normal();
  return perturb(chain.tree, node, reflect_unit(r));
}

bool mh_step(Chain& chain, const CellMatrix& data, Proposal proposal) {
  ++chain.iterations;
  if (proposal.node == kNoNode) {
    ++chain.accepted;
    return true;
  }
  // Consume the uniform even for invalid proposals so the stream position
  // does not depend on floating-point edge cases.
  const double u = chain.rng.uniform();
  if (!proposal.valid) return false;

  const MondrianTree& cand = proposal.tree;
  const double cand_prior = chain.prior.evaluate(cand);
  const NodeId first = proposal.node;
  const NodeId last = cand.subtree_end(first);

  std::vector<NodeId> owner;
  std::vector<LeafGaussian> gaussians;
  std::vector<double> leaf_log_lik;
  double cand_lik = chain.log_lik;
  if (chain.use_likelihood) {
    owner = chain.owner;
    for (std::size_t i = 0; i < owner.size(); ++i) {
      if (owner[i] >= first && owner[i] < last) owner[i] = cand.descend(first, data.row(i));
    }
    gaussians = chain.gaussians;
    leaf_log_lik = chain.leaf_log_lik;
    std::vector<std::vector<std::size_t>> members(cand.size());
    refit_range(cand, data, owner, first, last, gaussians, leaf_log_lik, members);
    cand_lik = sum_leaves(cand, leaf_log_lik);
  }

  const double log_ratio = (cand_prior + (chain.use_likelihood ? cand_lik : 0.0)) - chain.log_posterior();
  if (!(log_ratio >= 0.0 || std::log(u) < log_ratio)) return false;

  chain.tree = std::move(proposal.tree);
  chain.log_prior = cand_prior;
  if (chain.use_likelihood) {
    chain.owner = std::move(owner);
    chain.gaussians = std::move(gaussians);
    chain.leaf_log_lik = std::move(leaf_log_lik);
    chain.log_lik = cand_lik;
  } else {
    // Keep the cached likelihood coherent for reporting.
    chain.owner = assign(chain.tree, data);
    std::vector<std::vector<std::size_t>> members(chain.tree.size());
    refit_range(chain.tree, data, chain.owner, first, last, chain.gaussians, chain.leaf_log_lik, members);
    chain.log_lik = sum_leaves(chain.tree, chain.leaf_log_lik);
  }
  ++chain.accepted;
  return true;
}

void check_chain(const Chain& chain, const PriorTable& table, const Hyperparameters& hyper,
                 const CellMatrix& data) {
  const double prior = log_prior(chain.tree, table, hyper);
  const auto params = fit_leaf_gaussians(chain.tree, data);
  const double lik = log_likelihood(chain.tree, data, params);
  if (std::abs(prior - chain.log_prior) > 1e-9 || std::abs(lik - chain.log_lik) > 1e-9) {
    throw Error(ErrorCode::kInconsistent,
                "chain " + std::to_string(chain.index) + " cache drifted: prior " +
                    std::to_string(chain.log_prior) + " vs " + std::to_string(prior) + ", likelihood " +
                    std::to_string(chain.log_lik) + " vs " + std::to_string(lik));
  }
}

namespace {

void run_chain(Chain& chain, const CellMatrix& data, const PriorTable& table,
               const Hyperparameters& hyper, const MCMCConfig& config, std::vector<TraceRow>& trace) {
  auto record = [&](std::size_t it) {
    trace.push_back({chain.index, it, chain.log_prior, chain.log_lik, chain.acceptance_rate()});
  };
  record(0);
  for (std::size_t it = 1; it <= config.iterations; ++it) {
    mh_step(chain, data, propose_perturbation(chain, config.step));
    if (it % config.trace_every == 0 || it == config.iterations) record(it);
    if (config.check_every != 0 && it % config.check_every == 0) check_chain(chain, table, hyper, data);
  }
}

}  // namespace

std::size_t Posterior::map_index() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].log_posterior() > samples[best].log_posterior()) best = i;
  }
  return best;
}

Posterior run_mcmc(std::vector<Chain>& chains, const CellMatrix& data, const PriorTable& table,
                   const Hyperparameters& hyper, const MCMCConfig& config) {
  config.validate();
  std::vector<std::vector<TraceRow>> traces(chains.size());
  std::vector<std::exception_ptr> errors(chains.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < chains.size(); i = next++) {
      try {
        run_chain(chains[i], data, table, hyper, config, traces[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(config.threads, chains.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Posterior post;
  post.table = table;
  post.hyper = hyper;
  post.config = config;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const Chain& c = chains[i];
    post.samples.push_back({c.index, c.seed, c.annotated_tree(), c.log_prior, c.log_lik,
                            c.initial_log_prior, c.initial_log_lik, c.acceptance_rate()});
    post.trace.insert(post.trace.end(), traces[i].begin(), traces[i].end());
  }
  return post;
}

Posterior fit_posterior(const CellMatrix& data, const PriorTable& table,
                        const Hyperparameters& hyper, const MCMCConfig& config) {
  if (data.markers() != table.markers()) {
    throw Error(ErrorCode::kInconsistent, "cell markers are not aligned with the prior table");
  }
  auto chains = init_chains(config, observed_domain(data), table, hyper, data);
  return run_mcmc(chains, data, table, hyper, config);
}

}  // namespace mpgate
