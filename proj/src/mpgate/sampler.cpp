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

#include "mpgate/sampler.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "mpgate/error.hpp"

namespace mpgate {

std::vector<double> dimension_weights(const PriorTable& table, const Hyperparameters& hyper) {
  std::vector<double> w(table.num_markers());
  for (std::size_t d = 0; d < w.size(); ++d) w[d] = dimension_weight(label_set(table, d), hyper);
  return w;
}

double log_beta_density(double x, const BetaShape& shape) {
  if (!(x > 0.0 && x < 1.0)) return -std::numeric_limits<double>::infinity();
  const double norm = boost::math::lgamma(shape.alpha) + boost::math::lgamma(shape.beta) -
                      boost::math::lgamma(shape.alpha + shape.beta);
  return (shape.alpha - 1.0) * std::log(x) + (shape.beta - 1.0) * std::log1p(-x) - norm;
}

namespace {

class Sampler {
 public:
  Sampler(const Hyperparameters& hyper, RandomSource& rng) : hyper_(hyper), rng_(rng) {}

  void grow(double budget, const AxisBox& box, std::shared_ptr<const PriorTable> table,
            NodeId parent, std::size_t depth) {
    const NodeId id = nodes_.size();
    nodes_.push_back(Node{box, std::nullopt, parent, kNoNode, kNoNode, nullptr, std::nullopt});
    if (table->num_types() <= 1) {
      nodes_[id].table = std::move(table);
      return;
    }
    const std::vector<double> gamma = dimension_weights(*table, hyper_);
    std::vector<double> rates(box.dims());
    for (std::size_t d = 0; d < box.dims(); ++d) rates[d] = gamma[d] * box.length(d);
    const double wait = rng_.exponential(weighted_linear_dimension(box, gamma));
    const double remaining = budget - wait;
    if (remaining < 0.0) {
      nodes_[id].table = std::move(table);
      return;
    }
    if (depth >= kMaxTreeDepth) {
      throw Error(ErrorCode::kDepthExceeded,
                  "Mondrian tree exceeded " + std::to_string(kMaxTreeDepth) +
                      " levels; lower the budget lambda0 or raise gamma1/gamma0 separation");
    }
    const std::size_t dim = rng_.categorical(rates);
    const BetaShape shape = cut_beta_params(label_set(*table, dim), hyper_);
    Cut cut;
    do {
      // A draw so close to 0 or 1 that the cut lands on the boundary in
      // floating point has probability zero; redraw it.
      cut = make_cut(box, dim, rng_.beta(shape.alpha, shape.beta), wait);
    } while (!(cut.position > box.lower(dim) && cut.position < box.upper(dim)));
    nodes_[id].cut = cut;

    auto [lo, hi] = split_box(box, cut);
    auto left_table = std::make_shared<const PriorTable>(filter_rows(*table, dim, Side::kLeft));
    auto right_table = std::make_shared<const PriorTable>(filter_rows(*table, dim, Side::kRight));
    nodes_[id].left = nodes_.size();
    grow(remaining, lo, std::move(left_table), id, depth + 1);
    nodes_[id].right = nodes_.size();
    grow(remaining, hi, std::move(right_table), id, depth + 1);
  }

  std::vector<Node> take() { return std::move(nodes_); }

 private:
  const Hyperparameters& hyper_;
  RandomSource& rng_;
  std::vector<Node> nodes_;
};

}  // namespace

MondrianTree sample_mondrian(double budget, const AxisBox& box, const PriorTable& table,
                             const Hyperparameters& hyper, RandomSource& rng) {
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw Error(ErrorCode::kInvalidArgument, "sample_mondrian: budget must be positive");
  }
  // Re-validate in case the box was default-constructed or hand-assembled.
  if (box.dims() == 0) throw Error(ErrorCode::kInvalidDomain, "sample_mondrian: empty box");
  for (std::size_t d = 0; d < box.dims(); ++d) {
    if (!(box.length(d) > 0.0)) {
      throw Error(ErrorCode::kInvalidDomain,
                  "sample_mondrian: box has zero length in dimension " + std::to_string(d));
    }
  }
  if (table.empty()) throw Error(ErrorCode::kInvalidArgument, "sample_mondrian: prior table is empty");
  if (table.num_markers() != box.dims()) {
    throw Error(ErrorCode::kInconsistent, "sample_mondrian: table and box dimensions differ");
  }
  hyper.validate();
  Sampler s(hyper, rng);
  s.grow(budget, box, std::make_shared<const PriorTable>(table), kNoNode, 0);
  return MondrianTree::from_nodes(budget, s.take());
}

TreePrior::TreePrior(const MondrianTree& tree, const PriorTable& table,
                     const Hyperparameters& hyper) {
  if (table.num_markers() != tree.dims()) {
    throw Error(ErrorCode::kInconsistent, "log_prior: table and tree dimensions differ");
  }
  nodes_.resize(tree.size());
  // Walk in preorder carrying each node's filtered table.
  std::vector<std::pair<NodeId, PriorTable>> stack;
  stack.emplace_back(0, table);
  while (!stack.empty()) {
    auto [id, sub] = std::move(stack.back());
    stack.pop_back();
    const Node& n = tree.node(id);
    NodeTerms& terms = nodes_[id];
    if (n.is_leaf()) {
      if (!n.table || *n.table != sub) {
        throw Error(ErrorCode::kInconsistent,
                    "log_prior: leaf '" + tree.path(id) + "' table does not match the prior table");
      }
    }
    if (sub.num_types() <= 1) {
      if (!n.is_leaf()) {
        throw Error(ErrorCode::kInconsistent,
                    "log_prior: node '" + tree.path(id) + "' is cut although its table has one row");
      }
      continue;
    }
    terms.weights = dimension_weights(sub, hyper);
    if (n.is_leaf()) continue;
    terms.shape = cut_beta_params(label_set(sub, n.cut->dim), hyper);
    terms.log_beta_norm = boost::math::lgamma(terms.shape.alpha) +
                          boost::math::lgamma(terms.shape.beta) -
                          boost::math::lgamma(terms.shape.alpha + terms.shape.beta);
    stack.emplace_back(n.right, filter_rows(sub, n.cut->dim, Side::kRight));
    stack.emplace_back(n.left, filter_rows(sub, n.cut->dim, Side::kLeft));
  }
}

double TreePrior::evaluate(const MondrianTree& tree) const {
  if (tree.size() != nodes_.size()) {
    throw Error(ErrorCode::kInconsistent, "log_prior: tree topology changed");
  }
  double total = 0.0;
  // Remaining budget on entry to each node, filled in preorder.
  std::vector<double> remaining(tree.size());
  remaining[0] = tree.budget();
  for (NodeId id = 0; id < tree.size(); ++id) {
    const Node& n = tree.node(id);
    const NodeTerms& terms = nodes_[id];
    if (terms.weights.empty()) continue;  // stopped by its table
    const double rate = weighted_linear_dimension(n.box, terms.weights);
    if (n.is_leaf()) {
      total -= rate * remaining[id];
      continue;
    }
    const Cut& c = *n.cut;
    const double r = c.relative;
    total += std::log(terms.weights[c.dim] * n.box.length(c.dim)) - rate * c.wait_time;
    total += (terms.shape.alpha - 1.0) * std::log(r) + (terms.shape.beta - 1.0) * std::log1p(-r) -
             terms.log_beta_norm;
    remaining[n.left] = remaining[n.right] = remaining[id] - c.wait_time;
  }
  return total;
}

double log_prior(const MondrianTree& tree, const PriorTable& table, const Hyperparameters& hyper) {
  return TreePrior(tree, table, hyper).evaluate(tree);
}

}  // namespace mpgate
