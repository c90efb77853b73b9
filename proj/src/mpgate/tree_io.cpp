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

#include "mpgate/tree_io.hpp"

#include <cstdio>
#include <memory>

#include "mpgate/classify.hpp"
#include "mpgate/error.hpp"

namespace mpgate {

using nlohmann::json;

namespace {

json box_to_json(const AxisBox& box) {
  json out = json::array();
  for (std::size_t d = 0; d < box.dims(); ++d) out.push_back({box.lower(d), box.upper(d)});
  return out;
}

AxisBox box_from_json(const json& j) {
  std::vector<double> lo, hi;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw Error(ErrorCode::kParse, "box entries must be [lo, hi]");
    lo.push_back(pair[0].get<double>());
    hi.push_back(pair[1].get<double>());
  }
  try {
    return AxisBox(std::move(lo), std::move(hi));
  } catch (const Error& e) {
    throw Error(ErrorCode::kInconsistent, e.what());
  }
}

json node_to_json(const MondrianTree& tree, NodeId id, const std::vector<std::string>& markers) {
  const Node& n = tree.node(id);
  json out;
  out["box"] = box_to_json(n.box);
  if (n.is_leaf()) {
    out["leaf_table"] = table_to_json(*n.table);
    if (n.gaussian) out["leaf_gaussian"] = {{"mean", n.gaussian->mean}, {"variance", n.gaussian->variance}};
    return out;
  }
  const Cut& c = *n.cut;
  out["dim"] = c.dim;
  out["marker"] = markers.at(c.dim);
  out["rel_pos"] = c.relative;
  out["abs_pos"] = c.position;
  out["wait_time"] = c.wait_time;
  out["children"] = {node_to_json(tree, n.left, markers), node_to_json(tree, n.right, markers)};
  return out;
}

void node_from_json(const json& j, NodeId parent, const std::vector<std::string>& markers,
                    std::vector<Node>& nodes, std::size_t depth) {
  if (depth > 4096) throw Error(ErrorCode::kParse, "tree document nested too deeply");
  const NodeId id = nodes.size();
  nodes.push_back(Node{box_from_json(j.at("box")), std::nullopt, parent, kNoNode, kNoNode, nullptr, std::nullopt});
  if (j.contains("children")) {
    const auto& kids = j.at("children");
    if (!kids.is_array() || kids.size() != 2) throw Error(ErrorCode::kParse, "internal nodes need two children");
    nodes[id].cut = Cut{j.at("dim").get<std::size_t>(), j.at("abs_pos").get<double>(),
                        j.at("rel_pos").get<double>(), j.at("wait_time").get<double>()};
    nodes[id].left = nodes.size();
    node_from_json(kids[0], id, markers, nodes, depth + 1);
    nodes[id].right = nodes.size();
    node_from_json(kids[1], id, markers, nodes, depth + 1);
    return;
  }
  nodes[id].table = std::make_shared<const PriorTable>(table_from_json(j.at("leaf_table"), markers));
  if (j.contains("leaf_gaussian")) {
    const auto& g = j.at("leaf_gaussian");
    nodes[id].gaussian = LeafGaussian{g.at("mean").get<std::vector<double>>(),
                                      g.at("variance").get<std::vector<double>>()};
  }
}

}  // namespace

json table_to_json(const PriorTable& table) {
  json entries = json::array();
  for (std::size_t c = 0; c < table.num_types(); ++c) {
    json row = json::array();
    for (auto e : table.row(c)) row.push_back(static_cast<int>(e));
    entries.push_back(std::move(row));
  }
  return {{"types", table.types()}, {"entries", std::move(entries)}};
}

PriorTable table_from_json(const json& j, const std::vector<std::string>& markers) {
  auto types = j.at("types").get<std::vector<std::string>>();
  const auto& rows = j.at("entries");
  if (!rows.is_array() || rows.size() != types.size()) {
    throw Error(ErrorCode::kParse, "table entries do not match its type list");
  }
  std::vector<std::int8_t> entries;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != markers.size()) {
      throw Error(ErrorCode::kParse, "table row length does not match the marker list");
    }
    for (const auto& e : row) entries.push_back(static_cast<std::int8_t>(e.get<int>()));
  }
  try {
    return PriorTable(std::move(types), markers, std::move(entries));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

json tree_to_json(const MondrianTree& tree, const std::vector<std::string>& markers) {
  if (markers.size() != tree.dims()) {
    throw Error(ErrorCode::kInconsistent, "marker list does not match the tree dimension");
  }
  return {{"format", "mpgate-tree"},
          {"version", 1},
          {"budget", tree.budget()},
          {"markers", markers},
          {"root", node_to_json(tree, 0, markers)}};
}

MondrianTree tree_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "mpgate-tree") {
      throw Error(ErrorCode::kParse, "not an mpgate tree document");
    }
    const auto markers = j.at("markers").get<std::vector<std::string>>();
    std::vector<Node> nodes;
    node_from_json(j.at("root"), kNoNode, markers, nodes, 0);
    return MondrianTree::from_nodes(j.at("budget").get<double>(), std::move(nodes));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("tree document: ") + e.what());
  }
}

std::string export_tree_json(const MondrianTree& tree, const std::vector<std::string>& markers) {
  return tree_to_json(tree, markers).dump(1) + "\n";
}

MondrianTree parse_tree_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("tree document: ") + e.what());
  }
  return tree_from_json(j);
}

std::string export_tree_dot(const MondrianTree& tree, const std::vector<std::string>& markers) {
  std::string out = "digraph mondrian {\n  node [fontname=\"Helvetica\"];\n";
  char buf[64];
  for (NodeId id = 0; id < tree.size(); ++id) {
    const Node& n = tree.node(id);
    out += "  n" + std::to_string(id);
    if (n.is_leaf()) {
      auto types = leaf_type_candidates(tree, id);
      std::string label = types.empty() ? std::string(kUnknownLabel) : types.front();
      for (std::size_t k = 1; k < types.size(); ++k) label += "\\n" + types[k];
      out += " [shape=box, color=black, penwidth=2, label=\"" + label + "\"];\n";
    } else {
      std::snprintf(buf, sizeof buf, "%.4g", n.cut->position);
      out += " [shape=ellipse, color=red, label=\"" + markers.at(n.cut->dim) + " @ " + buf + "\"];\n";
    }
  }
  for (NodeId id = 0; id < tree.size(); ++id) {
    const Node& n = tree.node(id);
    if (n.is_leaf()) continue;
    out += "  n" + std::to_string(id) + " -> n" + std::to_string(n.left) + " [label=\"low\"];\n";
    out += "  n" + std::to_string(id) + " -> n" + std::to_string(n.right) + " [label=\"high\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace mpgate
