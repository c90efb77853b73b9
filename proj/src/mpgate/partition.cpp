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

#include "mpgate/partition.hpp"

#include <cmath>

#include "mpgate/error.hpp"

namespace mpgate {

AxisBox::AxisBox(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size()) {
    throw Error(ErrorCode::kInvalidDomain, "box needs matching, nonempty bound vectors");
  }
  for (std::size_t d = 0; d < lower_.size(); ++d) {
    if (!std::isfinite(lower_[d]) || !std::isfinite(upper_[d]) || !(lower_[d] < upper_[d]) ||
        !std::isfinite(upper_[d] - lower_[d])) {
      throw Error(ErrorCode::kInvalidDomain,
                  "box dimension " + std::to_string(d) + " has no positive finite length");
    }
  }
}

AxisBox AxisBox::unit(std::size_t dims) {
  return AxisBox(std::vector<double>(dims, 0.0), std::vector<double>(dims, 1.0));
}

double AxisBox::volume() const {
  double v = 1.0;
  for (std::size_t d = 0; d < dims(); ++d) v *= length(d);
  return v;
}

bool AxisBox::contains(std::span<const double> point) const {
  if (point.size() != dims()) return false;
  for (std::size_t d = 0; d < dims(); ++d) {
    if (!(point[d] >= lower_[d] && point[d] <= upper_[d])) return false;
  }
  return true;
}

AxisBox AxisBox::with_bounds(std::size_t d, double lo, double hi) const {
  AxisBox out = *this;
  out.lower_[d] = lo;
  out.upper_[d] = hi;
  return out;
}

Cut make_cut(const AxisBox& box, std::size_t dim, double relative, double wait_time) {
  if (dim >= box.dims()) throw Error(ErrorCode::kInvalidCut, "cut dimension out of range");
  return Cut{dim, box.lower(dim) + relative * box.length(dim), relative, wait_time};
}

std::pair<AxisBox, AxisBox> split_box(const AxisBox& box, const Cut& cut) {
  if (cut.dim >= box.dims()) throw Error(ErrorCode::kInvalidCut, "cut dimension out of range");
  const double lo = box.lower(cut.dim);
  const double hi = box.upper(cut.dim);
  if (!(cut.position > lo && cut.position < hi)) {
    throw Error(ErrorCode::kInvalidCut, "cut at " + std::to_string(cut.position) +
                                            " is not strictly inside [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "]");
  }
  return {box.with_bounds(cut.dim, lo, cut.position), box.with_bounds(cut.dim, cut.position, hi)};
}

double weighted_linear_dimension(const AxisBox& box, std::span<const double> weights) {
  if (weights.size() != box.dims()) {
    throw Error(ErrorCode::kInvalidWeight, "weight count does not match box dimension");
  }
  double total = 0.0;
  for (std::size_t d = 0; d < box.dims(); ++d) {
    if (!(weights[d] > 0.0) || !std::isfinite(weights[d])) {
      throw Error(ErrorCode::kInvalidWeight, "dimension weights must be positive and finite");
    }
    total += weights[d] * box.length(d);
  }
  return total;
}

namespace {

struct Validator {
  std::vector<Node>& nodes;
  double budget;

  [[noreturn]] void fail(NodeId id, const std::string& why) const {
    throw Error(ErrorCode::kInconsistent, "tree node " + std::to_string(id) + ": " + why);
  }

  // Returns one past the last node of the subtree rooted at `id`.
  NodeId check(NodeId id, NodeId parent, double elapsed, std::size_t depth) {
    if (id >= nodes.size()) fail(id, "missing node");
    if (depth > 4096) fail(id, "tree too deep");
    Node& n = nodes[id];
    n.parent = parent;
    if (n.box.dims() != nodes.front().box.dims()) fail(id, "box dimension mismatch");
    if (n.table && n.table->num_markers() != n.box.dims()) fail(id, "table/box dimension mismatch");
    if (n.is_leaf()) {
      if (n.left != kNoNode || n.right != kNoNode) fail(id, "leaf with children");
      if (!n.table) fail(id, "leaf without a prior table");
      if (n.gaussian && (n.gaussian->mean.size() != n.box.dims() ||
                         n.gaussian->variance.size() != n.box.dims())) {
        fail(id, "gaussian dimension mismatch");
      }
      return id + 1;
    }
    if (n.gaussian) fail(id, "internal node with a gaussian");
    const Cut& c = *n.cut;
    if (c.dim >= n.box.dims()) fail(id, "cut dimension out of range");
    if (!(c.relative > 0.0 && c.relative < 1.0)) fail(id, "relative position outside (0,1)");
    if (c.position != n.box.lower(c.dim) + c.relative * n.box.length(c.dim)) {
      fail(id, "absolute position does not match relative position");
    }
    if (!(c.wait_time >= 0.0) || !std::isfinite(c.wait_time)) fail(id, "invalid waiting time");
    const double spent = elapsed + c.wait_time;
    if (spent > budget) fail(id, "cumulative waiting time exceeds the budget");
    std::pair<AxisBox, AxisBox> halves;
    try {
      halves = split_box(n.box, c);
    } catch (const Error& e) {
      fail(id, e.what());
    }
    if (n.left != id + 1) fail(id, "left child is not the next node in preorder");
    if (nodes[n.left].box != halves.first) fail(id, "left child box is not the lower split");
    const NodeId right = check(n.left, id, spent, depth + 1);
    if (nodes[id].right != right) fail(id, "right child does not follow the left subtree");
    if (nodes[right].box != halves.second) fail(id, "right child box is not the upper split");
    return check(right, id, spent, depth + 1);
  }
};

}  // namespace

MondrianTree MondrianTree::from_nodes(double budget, std::vector<Node> nodes) {
  if (nodes.empty()) throw Error(ErrorCode::kInconsistent, "tree has no nodes");
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw Error(ErrorCode::kInconsistent, "tree budget must be positive and finite");
  }
  Validator v{nodes, budget};
  if (v.check(0, kNoNode, 0.0, 0) != nodes.size()) {
    throw Error(ErrorCode::kInconsistent, "tree has unreachable nodes");
  }
  MondrianTree t;
  t.budget_ = budget;
  t.nodes_ = std::move(nodes);
  return t;
}

std::vector<NodeId> MondrianTree::leaves() const {
  std::vector<NodeId> out;
  out.reserve(nodes_.size() / 2 + 1);
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_leaf()) out.push_back(i);
  }
  return out;
}

std::vector<NodeId> MondrianTree::internal_nodes() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].is_leaf()) out.push_back(i);
  }
  return out;
}

NodeId MondrianTree::leaf_of(std::span<const double> point) const {
  if (!domain().contains(point)) {
    throw Error(ErrorCode::kOutOfDomain, "point lies outside the tree's root box");
  }
  return descend(0, point);
}

NodeId MondrianTree::descend(NodeId start, std::span<const double> point) const {
  NodeId id = start;
  while (const auto& cut = nodes_[id].cut) {
    id = point[cut->dim] <= cut->position ? nodes_[id].left : nodes_[id].right;
  }
  return id;
}

NodeId MondrianTree::subtree_end(NodeId id) const {
  while (!nodes_[id].is_leaf()) id = nodes_[id].right;
  return id + 1;
}

std::string MondrianTree::path(NodeId id) const {
  std::string p;
  for (NodeId cur = id; nodes_.at(cur).parent != kNoNode; cur = nodes_[cur].parent) {
    p.push_back(nodes_[nodes_[cur].parent].left == cur ? 'L' : 'R');
  }
  return {p.rbegin(), p.rend()};
}

NodeId MondrianTree::find(std::string_view p) const {
  NodeId id = 0;
  for (char step : p) {
    if (nodes_[id].is_leaf()) return kNoNode;
    if (step == 'L') id = nodes_[id].left;
    else if (step == 'R') id = nodes_[id].right;
    else return kNoNode;
  }
  return id;
}

double MondrianTree::elapsed(NodeId id) const {
  double total = 0.0;
  for (NodeId cur = nodes_.at(id).parent; cur != kNoNode; cur = nodes_[cur].parent) {
    total += nodes_[cur].cut->wait_time;
  }
  return total;
}

void MondrianTree::set_relative_position(NodeId id, double relative) {
  Node& n = nodes_.at(id);
  if (n.is_leaf()) throw Error(ErrorCode::kInvalidArgument, "cannot move the cut of a leaf");
  if (!(relative > 0.0 && relative < 1.0)) {
    throw Error(ErrorCode::kInvalidCut, "relative cut position must lie in (0,1)");
  }
  n.cut = make_cut(n.box, n.cut->dim, relative, n.cut->wait_time);
  rebuild_below(id);
}

void MondrianTree::rebuild_below(NodeId id) {
  Node& n = nodes_[id];
  auto [lo, hi] = split_box(n.box, *n.cut);
  const NodeId children[2] = {n.left, n.right};
  nodes_[children[0]].box = std::move(lo);
  nodes_[children[1]].box = std::move(hi);
  for (NodeId child : children) {
    Node& c = nodes_[child];
    if (c.is_leaf()) continue;
    c.cut = make_cut(c.box, c.cut->dim, c.cut->relative, c.cut->wait_time);
    rebuild_below(child);
  }
}

void MondrianTree::set_gaussian(NodeId leaf, LeafGaussian g) {
  Node& n = nodes_.at(leaf);
  if (!n.is_leaf()) throw Error(ErrorCode::kInvalidArgument, "gaussians attach to leaves only");
  if (g.mean.size() != dims() || g.variance.size() != dims()) {
    throw Error(ErrorCode::kInvalidArgument, "gaussian dimension mismatch");
  }
  n.gaussian = std::move(g);
}

void MondrianTree::clear_gaussians() {
  for (auto& n : nodes_) n.gaussian.reset();
}

bool operator==(const MondrianTree& a, const MondrianTree& b) {
  if (a.budget_ != b.budget_ || a.nodes_.size() != b.nodes_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const Node& x = a.nodes_[i];
    const Node& y = b.nodes_[i];
    if (x.box != y.box || x.cut != y.cut || x.parent != y.parent || x.left != y.left ||
        x.right != y.right || x.gaussian != y.gaussian) {
      return false;
    }
    if (static_cast<bool>(x.table) != static_cast<bool>(y.table)) return false;
    if (x.table && *x.table != *y.table) return false;
  }
  return true;
}

}  // namespace mpgate
