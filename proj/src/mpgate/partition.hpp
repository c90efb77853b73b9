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

#ifndef MPGATE_PARTITION_HPP_
#define MPGATE_PARTITION_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpgate/prior_table.hpp"

namespace mpgate {

/// Product of D bounded intervals [lower_d, upper_d] with lower_d < upper_d.
class AxisBox {
 public:
  AxisBox() = default;
  AxisBox(std::vector<double> lower, std::vector<double> upper);
  /// [0,1]^dims
  static AxisBox unit(std::size_t dims);

  std::size_t dims() const { return lower_.size(); }
  double lower(std::size_t d) const { return lower_[d]; }
  double upper(std::size_t d) const { return upper_[d]; }
  double length(std::size_t d) const { return upper_[d] - lower_[d]; }
  double center(std::size_t d) const { return 0.5 * (lower_[d] + upper_[d]); }
  double volume() const;
  /// Closed-box containment.
  bool contains(std::span<const double> point) const;

  /// Copy with dimension d restricted to [lo, hi]; no validation.
  AxisBox with_bounds(std::size_t d, double lo, double hi) const;

  friend bool operator==(const AxisBox&, const AxisBox&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

struct Cut {
  std::size_t dim = 0;
  double position = 0.0;  // absolute, marker units
  double relative = 0.5;  // position = lower + relative * length, relative in (0,1)
  double wait_time = 0.0;
  friend bool operator==(const Cut&, const Cut&) = default;
};

/// Cut in `dim` at `relative` of the box's extent. Computes the absolute
/// position as lower + relative * length.
Cut make_cut(const AxisBox& box, std::size_t dim, double relative, double wait_time);

/// Returns the boxes below and above the cut. Throws kInvalidCut unless the
/// cut lies strictly inside the box.
std::pair<AxisBox, AxisBox> split_box(const AxisBox& box, const Cut& cut);

/// sum_d weights[d] * length_d. Throws kInvalidWeight on a nonpositive weight.
double weighted_linear_dimension(const AxisBox& box, std::span<const double> weights);

/// Diagonal Gaussian attached to a leaf.
struct LeafGaussian {
  std::vector<double> mean;
  std::vector<double> variance;
  friend bool operator==(const LeafGaussian&, const LeafGaussian&) = default;
};

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct Node {
  AxisBox box;
  std::optional<Cut> cut;  // empty for leaves
  NodeId parent = kNoNode;
  NodeId left = kNoNode;
  NodeId right = kNoNode;
  /// Rows of the prior table consistent with the cut history of this node.
  std::shared_ptr<const PriorTable> table;
  std::optional<LeafGaussian> gaussian;  // leaves only

  bool is_leaf() const { return !cut.has_value(); }
};

/// Binary kd-tree produced by a Mondrian process. Nodes are stored in
/// preorder (root at 0, left subtree before right), so the subtree of node v
/// occupies the index range [v, subtree_end(v)). Topology never changes after
/// construction; only relative cut positions can be moved.
class MondrianTree {
 public:
  MondrianTree() = default;

  /// Validates and adopts a preorder node list: child links and parents,
  /// children boxes equal to the split of the parent, cuts strictly inside,
  /// and cumulative waiting time along any path within `budget`.
  /// Throws kInconsistent on violation.
  static MondrianTree from_nodes(double budget, std::vector<Node> nodes);

  double budget() const { return budget_; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const AxisBox& domain() const { return nodes_.front().box; }
  std::size_t dims() const { return domain().dims(); }
  std::size_t num_cuts() const { return (nodes_.size() - 1) / 2; }

  /// Leaves in depth-first, left-before-right order.
  std::vector<NodeId> leaves() const;
  std::vector<NodeId> internal_nodes() const;

  /// Leaf containing `point`. Coordinates equal to a cut go left.
  /// Throws kOutOfDomain if the point is outside the root box.
  NodeId leaf_of(std::span<const double> point) const;
  /// Same routing starting from `start`, without the domain check.
  NodeId descend(NodeId start, std::span<const double> point) const;

  NodeId subtree_end(NodeId id) const;
  /// Path from the root as a string over {L, R}; the root is "".
  std::string path(NodeId id) const;
  /// Inverse of path(); kNoNode if the path does not name a node.
  NodeId find(std::string_view path) const;
  /// Waiting time consumed by the ancestors of `id`.
  double elapsed(NodeId id) const;

  /// Moves the cut of internal node `id` to a new relative position and
  /// rebuilds the boxes and absolute cut positions below it; descendants keep
  /// their relative positions. Throws kInvalidCut (tree left unspecified) if
  /// `relative` is outside (0,1) or any derived cut degenerates.
  void set_relative_position(NodeId id, double relative);

  void set_gaussian(NodeId leaf, LeafGaussian g);
  void clear_gaussians();

  friend bool operator==(const MondrianTree& a, const MondrianTree& b);

 private:
  void rebuild_below(NodeId id);

  double budget_ = 0.0;
  std::vector<Node> nodes_;
};

}  // namespace mpgate

#endif  // MPGATE_PARTITION_HPP_
