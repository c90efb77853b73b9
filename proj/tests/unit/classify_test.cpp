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
#include <map>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "mpgate/classify.hpp"
#include "mpgate/error.hpp"
#include "mpgate/inference.hpp"
#include "mpgate/synthetic.hpp"
#include "test_support.hpp"

namespace mpgate {
namespace {

using testing::build_tree;
using testing::Step;

MondrianTree tcell_gate_tree() {
  // CD3 first, then CD4 on the high-CD3 side.
  return build_tree(1.0, AxisBox::unit(3), {Step{2}, std::nullopt, Step{0}, std::nullopt, std::nullopt},
                    testing::tcell_table());
}

TEST(LeafCandidates, Examples) {
  const PriorTable t = testing::tcell_table();
  const auto uncut = build_tree(1.0, AxisBox::unit(3), {std::nullopt}, t);
  EXPECT_EQ(leaf_type_candidates(uncut, 0), t.types());

  const auto tree = tcell_gate_tree();
  EXPECT_EQ(leaf_type_candidates(tree, 1), std::vector<std::string>{"Basophils"});
  EXPECT_EQ(leaf_type_candidates(tree, 3), std::vector<std::string>{"CD8_T"});
  EXPECT_EQ(leaf_type_candidates(tree, 4), std::vector<std::string>{"CD4_T"});

  const PriorTable one({"A"}, {"M0"}, {1});
  const auto split = build_tree(1.0, AxisBox::unit(1), {Step{0}, std::nullopt, std::nullopt}, one);
  EXPECT_TRUE(leaf_type_candidates(split, 1).empty());
  EXPECT_EQ(leaf_type_candidates(split, 2), std::vector<std::string>{"A"});
}

TEST(LeafCandidates, MatchPathFilterOnSampledTrees) {
  const PriorTable t = testing::random_table(5, 6, 4);
  const Hyperparameters h;
  RandomSource rng(8);
  for (int k = 0; k < 200; ++k) {
    const auto tree = sample_mondrian(h.lambda0, AxisBox::unit(4), t, h, rng);
    for (NodeId leaf : tree.leaves()) {
      EXPECT_EQ(leaf_type_candidates(tree, leaf), testing::path_filter(tree, leaf, t));
    }
  }
}

TEST(ClassifySample, SingleCandidateLeavesAreDeterministic) {
  const auto tree = tcell_gate_tree();
  const CellMatrix data({"CD4", "CD8", "CD3"}, {0.9, 0.1, 0.2,    // low CD3
                                                0.2, 0.8, 0.9,    // high CD3, low CD4
                                                0.7, 0.1, 0.6});  // high CD3, high CD4
  RandomSource rng(1);
  const LabelVector labels = classify_sample(tree, data, rng);
  EXPECT_EQ(labels, (LabelVector{"Basophils", "CD8_T", "CD4_T"}));
  EXPECT_EQ(rng.position(), 0u);
}

TEST(ClassifySample, MultiCandidateLeafDrawsUniformly) {
  const PriorTable t({"A", "B"}, {"M0"}, {0, 0});
  const auto tree = build_tree(1.0, AxisBox::unit(1), {std::nullopt}, t);
  const CellMatrix data({"M0"}, {0.1, 0.5, 0.9});
  int a = 0;
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    RandomSource rng(static_cast<std::uint64_t>(s));
    const LabelVector labels = classify_sample(tree, data, rng);
    EXPECT_TRUE(labels[0] == labels[1] && labels[1] == labels[2]);
    if (labels[0] == "A") ++a;
  }
  EXPECT_NEAR(static_cast<double>(a) / n, 0.5, 0.02);
}

TEST(ClassifySample, EmptyCandidateLeafIsUnknown) {
  const PriorTable one({"A"}, {"M0"}, {1});
  const auto split = build_tree(1.0, AxisBox::unit(1), {Step{0}, std::nullopt, std::nullopt}, one);
  const CellMatrix data({"M0"}, {0.2, 0.8});
  RandomSource rng(0);
  EXPECT_EQ(classify_sample(split, data, rng), (LabelVector{kUnknownLabel, "A"}));
}

TEST(Vote, Examples) {
  const std::vector<LabelVector> one = {{"A", "B", kUnknownLabel}};
  EXPECT_EQ(vote(one, std::vector<double>{0.0}).labels, one[0]);

  const std::vector<LabelVector> three = {{"A"}, {"A"}, {"B"}};
  const VoteResult r = vote(three, std::vector<double>{0, 0, 0});
  EXPECT_EQ(r.labels, LabelVector{"A"});
  EXPECT_NEAR(r.fraction[0], 2.0 / 3.0, 1e-12);

  const std::vector<LabelVector> tie = {{"A"}, {"B"}};
  EXPECT_EQ(vote(tie, std::vector<double>{-10, -5}).labels, LabelVector{"B"});
  EXPECT_EQ(vote(tie, std::vector<double>{-5, -10}).labels, LabelVector{"A"});
  EXPECT_EQ(vote(tie, std::vector<double>{-5, -5}).labels, LabelVector{"A"});
}

TEST(Vote, UnknownVotesAreIgnored) {
  const std::vector<LabelVector> s = {{kUnknownLabel, kUnknownLabel}, {kUnknownLabel, "B"}, {kUnknownLabel, kUnknownLabel}};
  EXPECT_EQ(vote(s, std::vector<double>{0, 0, 0}).labels, (LabelVector{kUnknownLabel, "B"}));
}

TEST(Vote, LengthMismatch) {
  const std::vector<LabelVector> s = {{"A"}, {"A", "B"}};
  EXPECT_THROW(vote(s, std::vector<double>{0, 0}), Error);
}

TEST(Vote, OddTwoLabelVotesArePermutationInvariant) {
  RandomSource rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 * (1 + rng.uniform_index(5)) + 1;
    const std::size_t n = 20;
    std::vector<LabelVector> samples(k, LabelVector(n));
    std::vector<double> lp(k);
    for (std::size_t s = 0; s < k; ++s) {
      lp[s] = rng.normal();
      for (auto& l : samples[s]) l = rng.uniform() < 0.5 ? "A" : "B";
    }
    const auto base = vote(samples, lp).labels;
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<LabelVector> ps;
    std::vector<double> plp;
    for (std::size_t i : perm) {
      ps.push_back(samples[i]);
      plp.push_back(lp[i]);
    }
    EXPECT_EQ(vote(ps, plp).labels, base);
  }
}

TEST(Accuracy, Examples) {
  EXPECT_EQ(accuracy({"A", "B"}, {"A", "B"}), 1.0);
  EXPECT_EQ(accuracy({"A", "A"}, {"B", "B"}), 0.0);
  EXPECT_NEAR(accuracy({"A", "B", "A"}, {"A", "B", "B"}), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(accuracy({kUnknownLabel, "A"}, {"A", "A"}), 0.5);
  EXPECT_EQ(accuracy({kUnknownLabel}, {kUnknownLabel}), 1.0);
  EXPECT_THROW(accuracy({"A"}, {"A", "B"}), Error);
}

TEST(ClassifyPosterior, UsesEachChainsClassificationStream) {
  const SyntheticData synth = generate_synthetic({testing::tcell_table(), Hyperparameters{}, 300, 2.0, 4});
  MCMCConfig cfg;
  cfg.chains = 7;
  cfg.iterations = 20;
  cfg.seed = 5;
  const Posterior post = fit_posterior(synth.cells, testing::tcell_table(), Hyperparameters{}, cfg);
  const Classification c = classify_posterior(post, synth.cells);
  ASSERT_EQ(c.per_sample.size(), 7u);
  std::vector<double> lp;
  for (std::size_t i = 0; i < post.samples.size(); ++i) {
    RandomSource rng = chain_stream(post.samples[i].seed, Stream::kClassify);
    EXPECT_EQ(c.per_sample[i], classify_sample(post.samples[i].tree, synth.cells, rng));
    lp.push_back(post.samples[i].log_posterior());
  }
  EXPECT_EQ(c.voted.labels, vote(c.per_sample, lp).labels);
}

}  // namespace
}  // namespace mpgate
