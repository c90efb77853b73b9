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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "mpgate/emissions.hpp"
#include "mpgate/error.hpp"
#include "mpgate/inference.hpp"
#include "mpgate/synthetic.hpp"
#include "mpgate/tree_io.hpp"
#include "test_support.hpp"

namespace mpgate {
namespace {

using testing::build_tree;
using testing::Step;

TEST(ReflectUnit, Examples) {
  EXPECT_DOUBLE_EQ(reflect_unit(0.5 + 0.1), 0.6);
  EXPECT_NEAR(reflect_unit(0.95 + 0.1), 0.95, 1e-15);
  EXPECT_NEAR(reflect_unit(-0.2), 0.2, 1e-15);
  EXPECT_NEAR(reflect_unit(2.3), 0.3, 1e-15);
}

TEST(Perturb, DescendantsFollowRelativePositions) {
  const PriorTable t = testing::tcell_table();
  const std::vector<std::optional<Step>> shape = {Step{2, 0.5, 0.01}, std::nullopt, Step{0, 0.4, 0.01},
                                                  std::nullopt, Step{1, 0.7, 0.01}, std::nullopt,
                                                  std::nullopt};
  const AxisBox box({0.0, -1.0, 2.0}, {1.0, 1.0, 5.0});
  const auto tree = build_tree(1.0, box, shape, std::nullopt);
  const Proposal p = perturb(tree, 0, 0.3);
  ASSERT_TRUE(p.valid);
  auto moved = shape;
  moved[0]->relative = 0.3;
  const auto oracle = build_tree(1.0, box, moved, std::nullopt);
  for (NodeId id = 0; id < tree.size(); ++id) {
    EXPECT_EQ(p.tree.node(id).box, oracle.node(id).box);
    if (!oracle.node(id).is_leaf()) {
      EXPECT_EQ(p.tree.node(id).cut->position, oracle.node(id).cut->position);
      EXPECT_EQ(p.tree.node(id).cut->wait_time, tree.node(id).cut->wait_time);
      EXPECT_EQ(p.tree.node(id).cut->dim, tree.node(id).cut->dim);
    }
  }
}

struct Fixture {
  PriorTable table = testing::tcell_table();
  Hyperparameters hyper;
  SyntheticData synth;
  CellMatrix data;
  AxisBox box;

  explicit Fixture(std::uint64_t seed, std::size_t cells = 400) {
    synth = generate_synthetic({table, hyper, cells, 2.0, seed});
    data = synth.cells;
    box = observed_domain(data);
  }
};

TEST(InitChains, SingleRowTable) {
  const PriorTable t({"A"}, {"M0", "M1"}, {1, 0});
  const CellMatrix data = testing::uniform_cells(AxisBox::unit(2), 50, 1);
  MCMCConfig cfg;
  cfg.chains = 1;
  const auto chains = init_chains(cfg, observed_domain(data), t, Hyperparameters{}, data);
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(chains[0].tree.size(), 1u);
}

TEST(InitChains, DistinctReproducibleAndCoherent) {
  Fixture f(3);
  MCMCConfig cfg;
  cfg.seed = 17;
  const auto a = init_chains(cfg, f.box, f.table, f.hyper, f.data);
  const auto b = init_chains(cfg, f.box, f.table, f.hyper, f.data);
  ASSERT_EQ(a.size(), 50u);
  std::set<std::string> docs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string doc = export_tree_json(a[i].tree, f.table.markers());
    EXPECT_EQ(doc, export_tree_json(b[i].tree, f.table.markers()));
    docs.insert(doc);
    EXPECT_NO_THROW(check_chain(a[i], f.table, f.hyper, f.data));
    EXPECT_NEAR(a[i].log_prior, log_prior(a[i].tree, f.table, f.hyper), 1e-9);
  }
  EXPECT_EQ(docs.size(), 50u);
}

TEST(MhStep, SelfTransitionWithoutCuts) {
  const PriorTable t({"A"}, {"M0"}, {1});
  const CellMatrix data({"M0"}, {0.1, 0.5, 0.9});
  Chain c = make_chain(build_tree(1.0, observed_domain(data), {std::nullopt}, t), t, Hyperparameters{}, data, 0, 1);
  const Proposal p = propose_perturbation(c, 0.05);
  EXPECT_EQ(p.node, kNoNode);
  EXPECT_TRUE(mh_step(c, data, p));
  EXPECT_EQ(c.accepted, 1u);
}

TEST(MhStep, IdentityMoveAlwaysAccepted) {
  Fixture f(4);
  MCMCConfig cfg;
  cfg.chains = 5;
  auto chains = init_chains(cfg, f.box, f.table, f.hyper, f.data);
  int tried = 0;
  for (auto& c : chains) {
    for (NodeId id : c.tree.internal_nodes()) {
      for (int k = 0; k < 20; ++k) {
        ++tried;
        EXPECT_TRUE(mh_step(c, f.data, perturb(c.tree, id, c.tree.node(id).cut->relative)));
      }
    }
    EXPECT_EQ(c.accepted, c.iterations);
  }
  EXPECT_GT(tried, 0);
}

TEST(MhStep, UphillMoveAlwaysAccepted) {
  Fixture f(5);
  MCMCConfig cfg;
  cfg.chains = 10;
  auto chains = init_chains(cfg, f.box, f.table, f.hyper, f.data);
  int uphill = 0;
  for (auto& c : chains) {
    for (NodeId id : c.tree.internal_nodes()) {
      for (double r : {0.2, 0.35, 0.5, 0.65, 0.8}) {
        Proposal p = perturb(c.tree, id, r);
        if (!p.valid) continue;
        const double target = log_prior(p.tree, f.table, f.hyper) +
                              log_likelihood(p.tree, f.data, fit_leaf_gaussians(p.tree, f.data));
        if (target > c.log_posterior() + 1e-6) {
          ++uphill;
          EXPECT_TRUE(mh_step(c, f.data, std::move(p)));
          EXPECT_NEAR(c.log_posterior(), target, 1e-6);
        }
      }
    }
  }
  EXPECT_GT(uphill, 0);
}

TEST(RunMcmc, CachesStayCoherent) {
  Fixture f(6);
  MCMCConfig cfg;
  cfg.chains = 4;
  cfg.iterations = 300;
  cfg.check_every = 1;
  cfg.seed = 2;
  auto chains = init_chains(cfg, f.box, f.table, f.hyper, f.data);
  EXPECT_NO_THROW(run_mcmc(chains, f.data, f.table, f.hyper, cfg));
  cfg.use_likelihood = false;
  auto prior_chains = init_chains(cfg, f.box, f.table, f.hyper, f.data);
  EXPECT_NO_THROW(run_mcmc(prior_chains, f.data, f.table, f.hyper, cfg));
}

TEST(RunMcmc, ZeroIterationsKeepsInitialState) {
  Fixture f(7);
  MCMCConfig cfg;
  cfg.chains = 6;
  cfg.iterations = 0;
  auto chains = init_chains(cfg, f.box, f.table, f.hyper, f.data);
  std::vector<MondrianTree> before;
  for (const auto& c : chains) before.push_back(c.tree);
  const Posterior post = run_mcmc(chains, f.data, f.table, f.hyper, cfg);
  for (std::size_t i = 0; i < before.size(); ++i) {
    MondrianTree plain = post.samples[i].tree;
    plain.clear_gaussians();
    EXPECT_EQ(plain, before[i]);
    EXPECT_EQ(post.samples[i].log_lik, post.samples[i].initial_log_lik);
  }
}

TEST(RunMcmc, DeterministicAndThreadIndependent) {
  Fixture f(8);
  MCMCConfig cfg;
  cfg.chains = 6;
  cfg.iterations = 200;
  cfg.seed = 99;
  const Posterior a = fit_posterior(f.data, f.table, f.hyper, cfg);
  cfg.threads = 3;
  const Posterior b = fit_posterior(f.data, f.table, f.hyper, cfg);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].log_prior, b.trace[i].log_prior);
    EXPECT_EQ(a.trace[i].log_lik, b.trace[i].log_lik);
    EXPECT_EQ(a.trace[i].acceptance_rate, b.trace[i].acceptance_rate);
  }
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].tree, b.samples[i].tree);
}

TEST(RunMcmc, TopologyAndWaitsFrozenTraceShape) {
  Fixture f(9);
  MCMCConfig cfg;
  cfg.chains = 5;
  cfg.iterations = 105;
  auto chains = init_chains(cfg, f.box, f.table, f.hyper, f.data);
  std::vector<MondrianTree> before;
  for (const auto& c : chains) before.push_back(c.tree);
  const Posterior post = run_mcmc(chains, f.data, f.table, f.hyper, cfg);
  for (std::size_t i = 0; i < before.size(); ++i) {
    const auto& after = post.samples[i].tree;
    ASSERT_EQ(after.size(), before[i].size());
    for (NodeId id = 0; id < after.size(); ++id) {
      EXPECT_EQ(after.node(id).is_leaf(), before[i].node(id).is_leaf());
      if (!after.node(id).is_leaf()) {
        EXPECT_EQ(after.node(id).cut->dim, before[i].node(id).cut->dim);
        EXPECT_EQ(after.node(id).cut->wait_time, before[i].node(id).cut->wait_time);
      }
    }
  }
  // Rows at 0, 10, ..., 100 and the final iteration, per chain.
  EXPECT_EQ(post.trace.size(), 5u * 12u);
  for (std::size_t c = 0; c < 5; ++c) {
    double running = -INFINITY;
    for (std::size_t k = 0; k < 12; ++k) {
      const TraceRow& row = post.trace[c * 12 + k];
      EXPECT_EQ(row.chain, c);
      EXPECT_EQ(row.iteration, k < 11 ? 10 * k : 105);
      const double next = std::max(running, row.log_prior + row.log_lik);
      EXPECT_GE(next, running);
      running = next;
    }
  }
}

// Prior-only target on a single cut whose children are stopped by their
// tables: the cut's relative position must be Beta(phi0, phi0) distributed.
TEST(RunMcmc, RecoversBetaPriorWithoutLikelihood) {
  const PriorTable t({"A", "B"}, {"M0"}, {1, -1});
  const Hyperparameters h;
  const CellMatrix data({"M0"}, {0.0, 1.0});
  const auto tree = build_tree(h.lambda0, AxisBox({0.0}, {1.0}), {Step{0, 0.5, 0.001}, std::nullopt, std::nullopt}, t);
  Chain c = make_chain(tree, t, h, data, 0, 12345, false);
  const double step = 0.3;
  for (int i = 0; i < 1000; ++i) mh_step(c, data, propose_perturbation(c, step));
  std::vector<double> r;
  for (int i = 1; i <= 10000; ++i) {
    mh_step(c, data, propose_perturbation(c, step));
    if (i % 10 == 0) r.push_back(c.tree.node(0).cut->relative);
  }
  const double d = testing::ks_statistic(r, [](double x) { return testing::beta_cdf(x, 5.0, 5.0); });
  EXPECT_GT(testing::ks_pvalue(d, r.size()), 0.01);
}

TEST(RunMcmc, ImprovesLikelihoodOnSyntheticData) {
  Fixture f(10, 1500);
  MCMCConfig cfg;
  cfg.chains = 10;
  cfg.iterations = 500;
  cfg.seed = 10;
  const Posterior post = fit_posterior(f.data, f.table, f.hyper, cfg);
  int improved = 0;
  for (const auto& s : post.samples) {
    EXPECT_GE(s.log_lik + s.log_prior, s.initial_log_lik + s.initial_log_prior - 50.0);
    if (s.log_lik > s.initial_log_lik) ++improved;
  }
  EXPECT_GE(improved, 8);
}

TEST(MCMCConfig, Validation) {
  MCMCConfig c;
  EXPECT_NO_THROW(c.validate());
  c.step = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.chains = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(FitPosterior, RequiresAlignedMarkers) {
  const CellMatrix data({"X", "Y", "Z"}, {0.1, 0.2, 0.3});
  EXPECT_THROW(fit_posterior(data, testing::tcell_table(), Hyperparameters{}, MCMCConfig{}), Error);
}

}  // namespace
}  // namespace mpgate
