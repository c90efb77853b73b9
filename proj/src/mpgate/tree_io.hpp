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

#ifndef MPGATE_TREE_IO_HPP_
#define MPGATE_TREE_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mpgate/partition.hpp"
#include "mpgate/prior_table.hpp"

namespace mpgate {

// Tree document layout:
//   {"format": "mpgate-tree", "version": 1, "budget": <lambda0>,
//    "markers": [...], "root": <node>}
// Internal node: {"box": [[lo, hi], ...], "dim": d, "marker": name,
//                 "rel_pos": r, "abs_pos": c, "wait_time": t,
//                 "children": [<left>, <right>]}
// Leaf: {"box": ..., "leaf_table": {"types": [...], "entries": [[...]]},
//        "leaf_gaussian": {"mean": [...], "variance": [...]}}  (gaussian optional)

nlohmann::json table_to_json(const PriorTable& table);
PriorTable table_from_json(const nlohmann::json& j, const std::vector<std::string>& markers);

nlohmann::json tree_to_json(const MondrianTree& tree, const std::vector<std::string>& markers);
/// Throws kParse on malformed documents and kInconsistent on invalid trees.
MondrianTree tree_from_json(const nlohmann::json& j);

std::string export_tree_json(const MondrianTree& tree, const std::vector<std::string>& markers);
MondrianTree parse_tree_json(std::string_view text);

/// Graphviz digraph: cut nodes read "marker @ position", leaves list their
/// candidate types.
std::string export_tree_dot(const MondrianTree& tree, const std::vector<std::string>& markers);

}  // namespace mpgate

#endif  // MPGATE_TREE_IO_HPP_
