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

#ifndef MPGATE_INFERENCE_HPP_
#define MPGATE_INFERENCE_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mpgate/emissions.hpp"
#include "mpgate/partition.hpp"
#include "mpgate/prior_table.hpp"
#include "mpgate/random.hpp"
#include "mpgate/sampler.hpp"

namespace mpgate {

struct MCMCConfig {
  std::size_t chains = 50;
  std::size_t iterations = 2000;
  double step = 0.05;  // proposal standard deviation, relative-position units
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::size_t trace_every = 10;
  /// Compare cached log densities with a from-scratch recomputation every
  /// this many iterations (0 disables). Throws kInconsistent on mismatch.
  std::size_t check_every = 0;
  /// When false the target is the prior alone.
  bool use_likelihood = true;

  void validate() const;
};

/// Independent random streams of one chain, all derived from its seed.
enum class Stream : std::uint64_t { kPrior = 1, kMcmc = 2, kClassify = 3 };

/// Seed of chain `index` under a master seed.
std::uint64_t chain_seed(std::uint64_t master, std::size_t index);
RandomSource chain_stream(std::uint64_t chain_seed, Stream stream);

/// One Metropolis-Hastings state. Gaussians and per-leaf log likelihoods are
/// indexed by node id (only leaf slots are meaningful); `owner` maps each
/// cell to its leaf.
struct Chain {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  MondrianTree tree;
  TreePrior prior;
  std::vector<LeafGaussian> gaussians;
  std::vector<double> leaf_log_lik;
  std::vector<NodeId> owner;
  double log_prior = 0.0;
  double log_lik = 0.0;
  double initial_log_prior = 0.0;
  double initial_log_lik = 0.0;
  bool use_likelihood = true;
  RandomSource rng;
  std::size_t accepted = 0;
  std::size_t iterations = 0;

  double log_posterior() const { return log_prior + (use_likelihood ? log_lik : 0.0); }
  double acceptance_rate() const {
    return iterations == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(iterations);
  }
  /// Leaf Gaussians in tree.leaves() order.
  std::vector<LeafGaussian> leaf_gaussians() const;
  /// Tree with the current Gaussians attached to its leaves.
  MondrianTree annotated_tree() const;
};

/// Builds a chain around an existing tree (fits Gaussians, fills caches).
Chain make_chain(MondrianTree tree, const PriorTable& table, const Hyperparameters& hyper,
                 const CellMatrix& data, std::size_t index, std::uint64_t seed,
                 bool use_likelihood = true);

/// One chain per config.chains, each with a tree drawn from the prior over
/// `box` using the chain's prior stream.
std::vector<Chain> init_chains(const MCMCConfig& config, const AxisBox& box, const PriorTable& table,
                               const Hyperparameters& hyper, const CellMatrix& data);

struct Proposal {
  MondrianTree tree;
  NodeId node = kNoNode;  // kNoNode: self-transition
  bool valid = true;      // false when a derived cut degenerated
};

/// Reflects x into [0, 1] (x < 0 -> -x, x > 1 -> 2 - x, repeated).
double reflect_unit(double x);

/// Candidate with internal node `node` moved to relative position
/// `relative` (already in (0,1)); descendants keep their relative positions.
Proposal perturb(const MondrianTree& tree, NodeId node, double relative);

/// Picks an internal node uniformly and moves its relative cut position by
/// Normal(0, step^2), reflected into (0,1). Uses the chain's stream.
Proposal propose_perturbation(Chain& chain, double step);

/// Metropolis-Hastings accept/reject of `proposal` (symmetric, so no Hastings
/// correction). Refits only the leaves below the moved node. Returns whether
/// the proposal was accepted.
bool mh_step(Chain& chain, const CellMatrix& data, Proposal proposal);

/// Recomputes log prior and likelihood from scratch and throws kInconsistent
/// if they differ from the cache by more than 1e-9.
void check_chain(const Chain& chain, const PriorTable& table, const Hyperparameters& hyper,
                 const CellMatrix& data);

struct TraceRow {
  std::size_t chain = 0;
  std::size_t iteration = 0;
  double log_prior = 0.0;
  double log_lik = 0.0;
  double acceptance_rate = 0.0;
};

struct PosteriorSample {
  std::size_t chain = 0;
  std::uint64_t seed = 0;
  MondrianTree tree;  // final state, Gaussians attached
  double log_prior = 0.0;
  double log_lik = 0.0;
  double initial_log_prior = 0.0;
  double initial_log_lik = 0.0;
  double acceptance_rate = 0.0;

  double log_posterior() const { return log_prior + log_lik; }
};

struct Posterior {
  PriorTable table;
  Hyperparameters hyper;
  MCMCConfig config;
  std::vector<PosteriorSample> samples;  // chain order
  std::vector<TraceRow> trace;           // chain-major, then iteration

  /// Index of the sample with the highest log posterior (first on ties).
  std::size_t map_index() const;
};

/// Runs config.iterations steps on every chain (in parallel over
/// config.threads workers) and returns the final states in chain order.
/// Output does not depend on the thread count.
Posterior run_mcmc(std::vector<Chain>& chains, const CellMatrix& data, const PriorTable& table,
                   const Hyperparameters& hyper, const MCMCConfig& config);

/// observed_domain + init_chains + run_mcmc. `data` columns must already be
/// aligned with the table's markers.
Posterior fit_posterior(const CellMatrix& data, const PriorTable& table,
                        const Hyperparameters& hyper, const MCMCConfig& config);

}  // namespace mpgate

#endif  // MPGATE_INFERENCE_HPP_
