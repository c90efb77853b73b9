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

#include <cmath>
#include <regex>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mpgate/classify.hpp"
#include "mpgate/csv.hpp"
#include "mpgate/error.hpp"
#include "mpgate/inference.hpp"
#include "mpgate/posterior_io.hpp"
#include "mpgate/render.hpp"
#include "mpgate/sampler.hpp"
#include "mpgate/synthetic.hpp"
#include "mpgate/tree_io.hpp"
#include "test_support.hpp"

namespace mpgate {
namespace {

using testing::build_tree;
using testing::Step;

std::size_t count_matches(const std::string& text, const std::regex& re) {
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re),
                                                std::sregex_iterator()));
}

// Element nesting check: every opened tag is closed in order.
bool tags_balanced(const std::string& doc) {
  std::vector<std::string> stack;
  const std::regex tag(R"(<(/?)([A-Za-z]+)[^>]*?(/?)>)");
  for (auto it = std::sregex_iterator(doc.begin(), doc.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m.str(0).rfind("<?", 0) == 0) continue;
    if (m[1].length() > 0) {
      if (stack.empty() || stack.back() != m.str(2)) return false;
      stack.pop_back();
    } else if (m[3].length() == 0) {
      stack.push_back(m.str(2));
    }
  }
  return stack.empty();
}

TEST(TreeJson, RoundTripsSampledTrees) {
  const PriorTable t = testing::tcell_table();
  const Hyperparameters h;
  RandomSource rng(1);
  for (int k = 0; k < 100; ++k) {
    const auto tree = sample_mondrian(h.lambda0, AxisBox({-1.0, 0.5, 0.0}, {2.0, 0.75, 1e4}), t, h, rng);
    const std::string doc = export_tree_json(tree, t.markers());
    EXPECT_EQ(parse_tree_json(doc), tree);
    EXPECT_EQ(export_tree_json(parse_tree_json(doc), t.markers()), doc);
  }
}

TEST(TreeJson, RoundTripsGaussians) {
  const SyntheticData s = generate_synthetic({testing::tcell_table(), Hyperparameters{}, 200, 2.0, 2});
  const std::string doc = export_tree_json(s.tree, s.cells.markers());
  EXPECT_EQ(parse_tree_json(doc), s.tree);
}

TEST(TreeJson, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_tree_json("{"), Error);
  EXPECT_THROW(parse_tree_json(R"({"format": "other"})"), Error);
  const auto tree = build_tree(1.0, AxisBox::unit(1), {Step{0}, std::nullopt, std::nullopt});
  auto j = tree_to_json(tree, {"M0"});
  j["root"]["abs_pos"] = 0.9;
  EXPECT_THROW(tree_from_json(j), Error);
}

TEST(TreeDot, NodeCountIsTwiceCutsPlusOne) {
  const PriorTable t = testing::tcell_table();
  const Hyperparameters h;
  RandomSource rng(3);
  const std::regex node(R"(^  n\d+ \[)", std::regex::multiline);
  const std::regex cut_label(R"(label="(CD4|CD8|CD3) @ )");
  for (int k = 0; k < 50; ++k) {
    const auto tree = sample_mondrian(h.lambda0, AxisBox::unit(3), t, h, rng);
    const std::string dot = export_tree_dot(tree, t.markers());
    const std::size_t cuts = tree.internal_nodes().size();
    EXPECT_EQ(count_matches(dot, node), 2 * cuts + 1);
    EXPECT_EQ(count_matches(dot, cut_label), cuts);
  }
  const auto leaf = build_tree(1.0, AxisBox::unit(3), {std::nullopt}, t);
  const std::string dot = export_tree_dot(leaf, t.markers());
  EXPECT_EQ(count_matches(dot, node), 1u);
  EXPECT_NE(dot.find("Basophils\\nCD4_T\\nCD8_T"), std::string::npos);
}

TEST(RenderCuts, LineCountMatchesTreeWalk) {
  const PriorTable t = testing::tcell_table();
  const Hyperparameters h;
  RandomSource rng(4);
  const CellMatrix data = testing::uniform_cells(AxisBox::unit(3), 30, 1, t.markers());
  std::vector<MondrianTree> samples;
  for (int k = 0; k < 20; ++k) samples.push_back(sample_mondrian(h.lambda0, AxisBox::unit(3), t, h, rng));
  const std::regex line("<line ");
  for (auto [x, y] : {std::pair<std::size_t, std::size_t>{0, 2}, {1, 0}, {2, 1}}) {
    std::size_t expected = 0;
    for (const auto& tree : samples) {
      for (NodeId id : tree.internal_nodes()) {
        const auto d = tree.node(id).cut->dim;
        if (d == x || d == y) ++expected;
      }
    }
    const std::string svg = render_posterior_cuts(samples, data, x, y);
    EXPECT_EQ(count_matches(svg, line), expected);
    EXPECT_EQ(count_matches(svg, std::regex("<circle ")), 30u);
    EXPECT_TRUE(tags_balanced(svg));
    EXPECT_EQ(svg.find("href"), std::string::npos);
  }
}

TEST(RenderCuts, RootMidpointCutIsVerticalCenterLine) {
  const auto tree = build_tree(1.0, AxisBox({0.0, 0.0}, {4.0, 2.0}), {Step{0, 0.5}, std::nullopt, std::nullopt});
  const CellMatrix data({"M0", "M1"}, {1.0, 1.0});
  const std::string svg = render_posterior_cuts(std::vector<MondrianTree>{tree}, data, 0, 1);
  EXPECT_NE(svg.find(R"(<line class="cut" x1="400.00" y1="760.00" x2="400.00" y2="40.00"/>)"), std::string::npos) << svg;
  EXPECT_EQ(count_matches(svg, std::regex("<line ")), 1u);
}

TEST(RenderCuts, NoCutsGivesScatterOnly) {
  const auto tree = build_tree(1.0, AxisBox::unit(3), {Step{2}, std::nullopt, std::nullopt});
  const CellMatrix data = testing::uniform_cells(AxisBox::unit(3), 5, 2);
  const std::string svg = render_posterior_cuts(std::vector<MondrianTree>{tree}, data, 0, 1);
  EXPECT_EQ(count_matches(svg, std::regex("<line ")), 0u);
  EXPECT_EQ(count_matches(svg, std::regex("<circle ")), 5u);
}

TEST(RenderCuts, RejectsInvalidDimensions) {
  const auto tree = build_tree(1.0, AxisBox::unit(2), {std::nullopt});
  const CellMatrix data = testing::uniform_cells(AxisBox::unit(2), 5, 2);
  const std::vector<MondrianTree> one{tree};
  EXPECT_THROW(render_posterior_cuts(one, data, 0, 0), Error);
  EXPECT_THROW(render_posterior_cuts(one, data, 0, 2), Error);
  EXPECT_THROW(render_posterior_cuts(std::vector<MondrianTree>{}, data, 0, 1), Error);
}

TEST(Synthetic, SingleRowTable) {
  const PriorTable t({"A"}, {"M0", "M1"}, {1, 0});
  const SyntheticData s = generate_synthetic({t, Hyperparameters{}, 100, 2.0, 1});
  EXPECT_EQ(s.tree.size(), 1u);
  EXPECT_EQ(s.truth, LabelVector(100, "A"));
}

TEST(Synthetic, DeterministicUnderSeed) {
  const SyntheticSpec spec{testing::tcell_table(), Hyperparameters{}, 500, 2.0, 9};
  const SyntheticData a = generate_synthetic(spec);
  const SyntheticData b = generate_synthetic(spec);
  EXPECT_EQ(serialize_cells(a.cells), serialize_cells(b.cells));
  EXPECT_EQ(a.truth, b.truth);
  EXPECT_EQ(a.tree, b.tree);
}

TEST(Synthetic, TruthEqualsClassificationOfGeneratingTree) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SyntheticData s = generate_synthetic({testing::tcell_table(), Hyperparameters{}, 300, 2.0, seed});
    RandomSource rng(seed);
    EXPECT_EQ(classify_sample(s.tree, s.cells, rng), s.truth);
    EXPECT_EQ(rng.position(), 0u);
    for (NodeId leaf : s.tree.leaves()) EXPECT_EQ(leaf_type_candidates(s.tree, leaf).size(), 1u);
  }
}

TEST(Synthetic, LeafOccupancyFollowsVolume) {
  const std::size_t n = 100000;
  const SyntheticData s = generate_synthetic({testing::tcell_table(), Hyperparameters{}, n, 2.0, 12});
  const auto owner = assign(s.tree, s.cells);
  std::vector<std::size_t> count(s.tree.size(), 0);
  for (NodeId o : owner) ++count[o];
  const double total = s.tree.domain().volume();
  ASSERT_GT(s.tree.leaves().size(), 1u);
  for (NodeId leaf : s.tree.leaves()) {
    const double p = s.tree.node(leaf).box.volume() / total;
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    EXPECT_NEAR(static_cast<double>(count[leaf]) / n, p, 3.0 * sigma) << "leaf " << leaf;
  }
}

TEST(Synthetic, RejectsInvalidSpecs) {
  EXPECT_THROW(generate_synthetic({testing::tcell_table(), Hyperparameters{}, 0, 2.0, 1}), Error);
  EXPECT_THROW(generate_synthetic({testing::tcell_table(), Hyperparameters{}, 10, 0.0, 1}), Error);
  // Two identical rows can never be separated.
  const PriorTable twins({"A", "B"}, {"M0"}, {1, 1});
  EXPECT_THROW(generate_synthetic({twins, Hyperparameters{}, 10, 2.0, 1}), Error);
}

TEST(PosteriorIo, RoundTrip) {
  const SyntheticData s = generate_synthetic({testing::tcell_table(), Hyperparameters{}, 300, 2.0, 5});
  MCMCConfig cfg;
  cfg.chains = 4;
  cfg.iterations = 30;
  const Posterior post = fit_posterior(s.cells, testing::tcell_table(), Hyperparameters{}, cfg);
  const std::string doc = export_posterior(post);
  const Posterior back = parse_posterior(doc);
  EXPECT_EQ(export_posterior(back), doc);
  ASSERT_EQ(back.samples.size(), post.samples.size());
  for (std::size_t i = 0; i < post.samples.size(); ++i) {
    EXPECT_EQ(back.samples[i].tree, post.samples[i].tree);
    EXPECT_EQ(back.samples[i].log_prior, post.samples[i].log_prior);
    EXPECT_EQ(back.samples[i].seed, post.samples[i].seed);
  }
  EXPECT_EQ(back.table, post.table);
  EXPECT_EQ(classify_posterior(back, s.cells).voted.labels, classify_posterior(post, s.cells).voted.labels);
  EXPECT_THROW(parse_posterior("[]"), Error);
}

TEST(LabelsIo, RoundTripAndHeader) {
  VoteResult v{{"A", kUnknownLabel, "B"}, {1.0, 0.0, 0.5}};
  const std::vector<LabelVector> per = {{"A", kUnknownLabel, "B"}, {"A", kUnknownLabel, "C"}};
  const std::string plain = export_labels(v);
  EXPECT_EQ(plain.substr(0, plain.find('\n')), "cell,label,vote_fraction");
  EXPECT_EQ(parse_labels(plain), v.labels);
  const std::string wide = export_labels(v, per);
  EXPECT_EQ(wide.substr(0, wide.find('\n')), "cell,label,vote_fraction,sample_0,sample_1");
  EXPECT_EQ(parse_labels(wide), v.labels);
  EXPECT_THROW(parse_labels("cell,label\n1,A\n"), Error);
}

TEST(TraceIo, Header) {
  const std::string doc = export_trace({TraceRow{0, 10, -1.5, -2.25, 0.5}});
  EXPECT_EQ(doc, "chain,iteration,log_prior,log_lik,acceptance_rate\n0,10,-1.5,-2.25,0.5\n");
}

TEST(AccuracyIo, CsvAndText) {
  const std::vector<std::pair<std::string, double>> rows = {{"MP-GMM", 0.92266}, {"GMM", 0.5}};
  EXPECT_EQ(export_accuracy_csv(rows).substr(0, 16), "method,accuracy\n");
  EXPECT_EQ(export_accuracy_text(rows), "method  accuracy\nMP-GMM  92.3%\nGMM     50.0%\n");
}

TEST(Csv, ParseSkipsBlankLinesAndCarriageReturns) {
  const auto recs = csv::parse("a, b\r\n\n 1 ,2\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].fields, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(recs[1].fields, (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(recs[1].line, 3u);
}

TEST(Csv, NumbersAndNames) {
  RandomSource rng(6);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<int>(rng.uniform_index(40)) - 20);
    EXPECT_EQ(csv::parse_double(csv::format_double(v), "v"), v);
  }
  EXPECT_THROW(csv::parse_double("nan", "x"), Error);
  EXPECT_THROW(csv::parse_double("1.5abc", "x"), Error);
  EXPECT_THROW(csv::parse_integer("1.5", "x"), Error);
  EXPECT_EQ(csv::format_fixed(0.126, 2), "0.13");
  EXPECT_TRUE(csv::is_valid_name("CD4_T"));
  EXPECT_TRUE(csv::is_valid_name("MP-GMM"));
  EXPECT_FALSE(csv::is_valid_name("a b"));
  EXPECT_FALSE(csv::is_valid_name(""));
  EXPECT_THROW(csv::read_file("/nonexistent/x.csv"), Error);
}

}  // namespace
}  // namespace mpgate
