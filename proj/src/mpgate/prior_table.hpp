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

#ifndef MPGATE_PRIOR_TABLE_HPP_
#define MPGATE_PRIOR_TABLE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mpgate {

/// Expert-knowledge table: one row per cell type, one column per marker,
/// entries in {-1, 0, +1} (low, no information, high).
///
/// An empty table (zero rows) is representable because filtering can remove
/// every row; callers decide what an empty table means.
class PriorTable {
 public:
  PriorTable() = default;
  /// Validates names (unique, nonempty, [A-Za-z0-9_+-]) and entries.
  /// `entries` is row-major, types.size() * markers.size() long.
  PriorTable(std::vector<std::string> types, std::vector<std::string> markers,
             std::vector<std::int8_t> entries);

  std::size_t num_types() const { return types_.size(); }
  std::size_t num_markers() const { return markers_.size(); }
  bool empty() const { return types_.empty(); }

  const std::vector<std::string>& types() const { return types_; }
  const std::vector<std::string>& markers() const { return markers_; }

  int entry(std::size_t type, std::size_t marker) const {
    return entries_[type * markers_.size() + marker];
  }
  std::span<const std::int8_t> row(std::size_t type) const {
    return {entries_.data() + type * markers_.size(), markers_.size()};
  }

  /// Index of a marker by name, or npos.
  std::size_t marker_index(std::string_view name) const;

  /// Table restricted to the given rows, in the given order.
  PriorTable select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const PriorTable&, const PriorTable&) = default;

 private:
  std::vector<std::string> types_;
  std::vector<std::string> markers_;
  std::vector<std::int8_t> entries_;
};

/// Distinct labels present in one column.
struct LabelSet {
  bool low = false;
  bool zero = false;
  bool high = false;

  bool empty() const { return !low && !zero && !high; }
  friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

struct Hyperparameters {
  double gamma0 = 100.0;  // weight when a column holds both +1 and -1
  double gamma1 = 1.0;    // weight when a column holds one informative label
  double phi0 = 5.0;
  double phi1 = 2.0;
  double lambda0 = 1.0;  // MP budget

  /// Throws kInvalidArgument unless all positive, gamma1 < gamma0, phi1 < phi0.
  void validate() const;
};

struct BetaShape {
  double alpha = 1.0;
  double beta = 1.0;
  friend bool operator==(const BetaShape&, const BetaShape&) = default;
};

enum class Side { kLeft, kRight };

LabelSet label_set(const PriorTable& table, std::size_t dim);

/// Dimension weight gamma for a column's label set. {-1,+1} and {-1,0,+1}
/// get gamma0; a single informative label (with or without 0) gets gamma1;
/// an all-zero column gets 1.
double dimension_weight(const LabelSet& labels, const Hyperparameters& hyper);

/// Beta(alpha, beta) used for the relative cut position. Both labels:
/// (phi0, phi0). Only -1: (phi1, phi0). Only +1: (phi0, phi1). All zero:
/// (1, 1), i.e. the uniform cut of the standard Mondrian process.
BetaShape cut_beta_params(const LabelSet& labels, const Hyperparameters& hyper);

/// Rows routed to one side of a cut on `dim`: left keeps -1 and 0, right
/// keeps +1 and 0. Row order and all columns are preserved.
PriorTable filter_rows(const PriorTable& table, std::size_t dim, Side side);

/// CSV: header `<anything>,marker1,...,markerD`, then `type,e1,...,eD`.
PriorTable parse_table(std::string_view text);
PriorTable read_table_file(const std::string& path);
std::string serialize_table(const PriorTable& table);

}  // namespace mpgate

#endif  // MPGATE_PRIOR_TABLE_HPP_
