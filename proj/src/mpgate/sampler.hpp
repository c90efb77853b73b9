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

#ifndef MPGATE_SAMPLER_HPP_
#define MPGATE_SAMPLER_HPP_

#include <cstddef>
#include <vector>

#include "mpgate/partition.hpp"
#include "mpgate/prior_table.hpp"
#include "mpgate/random.hpp"

namespace mpgate {

inline constexpr std::size_t kMaxTreeDepth = 64;

/// gamma weight of every column of `table`. The table must be nonempty.
std::vector<double> dimension_weights(const PriorTable& table, const Hyperparameters& hyper);

/// Draws a tree from the Mondrian process whose dimension and cut
/// distributions are shaped by `table`:
///
///   t ~ Exponential(sum_d gamma_d |X_d|); budget -= t
///   stop if budget < 0 or the table has at most one row
///   d ~ Multinoulli(gamma_d |X_d|), r ~ Beta(shape of column d)
///   cut at lower_d + r |X_d|; left child gets rows with -1/0 in column d,
///   right child rows with +1/0; both recurse with the reduced budget.
///
/// Leaves keep their filtered table. Throws kInvalidDomain for a degenerate
/// box, kInvalidArgument for a nonpositive budget or an empty table, and
/// kDepthExceeded if a path would grow past kMaxTreeDepth cuts.
MondrianTree sample_mondrian(double budget, const AxisBox& box, const PriorTable& table,
                             const Hyperparameters& hyper, RandomSource& rng);

/// Log density of a tree under the process above, with respect to the
/// waiting times, cut dimensions and relative cut positions. Each cut
/// contributes log(gamma_d |X_d|) - R t + log Beta(r); each leaf whose table
/// still has two or more rows contributes the survival term -R * remaining
/// budget. Leaves stopped by the table contribute nothing.
/// Throws kInconsistent if the tree's tables do not follow from `table`.
double log_prior(const MondrianTree& tree, const PriorTable& table, const Hyperparameters& hyper);

/// Per-node prior quantities that depend only on the topology, cached so the
/// prior can be re-evaluated cheaply while cut positions move.
class TreePrior {
 public:
  TreePrior() = default;
  TreePrior(const MondrianTree& tree, const PriorTable& table, const Hyperparameters& hyper);

  /// Log prior of `tree`, which must share the topology used at construction.
  double evaluate(const MondrianTree& tree) const;

  /// Cut-position prior of an internal node.
  const BetaShape& cut_shape(NodeId id) const { return nodes_.at(id).shape; }

 private:
  struct NodeTerms {
    std::vector<double> weights;  // empty when the node was stopped by its table
    BetaShape shape;
    double log_beta_norm = 0.0;
  };
  std::vector<NodeTerms> nodes_;
};

double log_beta_density(double x, const BetaShape& shape);

}  // namespace mpgate

#endif  // MPGATE_SAMPLER_HPP_
