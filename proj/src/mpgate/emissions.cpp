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

#include "mpgate/emissions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "mpgate/csv.hpp"
#include "mpgate/error.hpp"

namespace mpgate {

CellMatrix::CellMatrix(std::vector<std::string> markers, std::vector<double> values)
    : markers_(std::move(markers)), values_(std::move(values)) {
  if (markers_.empty()) throw Error(ErrorCode::kInvalidArgument, "cell matrix needs at least one marker");
  std::set<std::string_view> seen;
  for (const auto& m : markers_) {
    if (!csv::is_valid_name(m)) {
      throw Error(ErrorCode::kInvalidArgument, "marker name '" + m + "' is empty or has invalid characters");
    }
    if (!seen.insert(m).second) throw Error(ErrorCode::kInvalidArgument, "duplicate marker '" + m + "'");
  }
  if (values_.empty() || values_.size() % markers_.size() != 0) {
    throw Error(ErrorCode::kInvalidArgument, "cell matrix needs at least one complete row");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "cell values must be finite");
  }
}

CellMatrix parse_cells(std::string_view text) {
  const auto records = csv::parse(text);
  if (records.empty()) throw Error(ErrorCode::kParse, "cells: no header row");
  std::vector<std::string> markers = records.front().fields;
  if (records.size() < 2) throw Error(ErrorCode::kParse, "cells: no data rows");
  std::vector<double> values;
  values.reserve((records.size() - 1) * markers.size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "cells line " + std::to_string(rec.line);
    if (rec.fields.size() != markers.size()) {
      throw Error(ErrorCode::kParse, where + ": expected " + std::to_string(markers.size()) +
                                         " fields, found " + std::to_string(rec.fields.size()));
    }
    for (std::size_t d = 0; d < markers.size(); ++d) {
      values.push_back(csv::parse_double(rec.fields[d], where + ", column " + std::to_string(d + 1)));
    }
  }
  try {
    return CellMatrix(std::move(markers), std::move(values));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, std::string("cells: ") + e.what());
  }
}

CellMatrix read_cells_file(const std::string& path) {
  const std::string text = csv::read_file(path);
  try {
    return parse_cells(text);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string serialize_cells(const CellMatrix& cells) {
  std::string out;
  for (std::size_t d = 0; d < cells.cols(); ++d) {
    if (d) out += ',';
    out += cells.markers()[d];
  }
  out += '\n';
  for (std::size_t i = 0; i < cells.rows(); ++i) {
    for (std::size_t d = 0; d < cells.cols(); ++d) {
      if (d) out += ',';
      out += csv::format_double(cells.at(i, d));
    }
    out += '\n';
  }
  return out;
}

CellMatrix align_to_markers(const CellMatrix& cells, const std::vector<std::string>& markers) {
  std::vector<std::size_t> source(markers.size());
  for (std::size_t d = 0; d < markers.size(); ++d) {
    const auto it = std::find(cells.markers().begin(), cells.markers().end(), markers[d]);
    if (it == cells.markers().end()) {
      throw Error(ErrorCode::kInconsistent, "marker '" + markers[d] + "' is missing from the cell data");
    }
    source[d] = static_cast<std::size_t>(it - cells.markers().begin());
  }
  for (const auto& m : cells.markers()) {
    if (std::find(markers.begin(), markers.end(), m) == markers.end()) {
      throw Error(ErrorCode::kInconsistent, "cell data marker '" + m + "' is not in the prior table");
    }
  }
  std::vector<double> values(cells.rows() * markers.size());
  for (std::size_t i = 0; i < cells.rows(); ++i) {
    for (std::size_t d = 0; d < markers.size(); ++d) values[i * markers.size() + d] = cells.at(i, source[d]);
  }
  return CellMatrix(markers, std::move(values));
}

AxisBox observed_domain(const CellMatrix& cells) {
  std::vector<double> lo(cells.cols()), hi(cells.cols());
  for (std::size_t d = 0; d < cells.cols(); ++d) {
    double mn = cells.at(0, d), mx = mn;
    for (std::size_t i = 1; i < cells.rows(); ++i) {
      mn = std::min(mn, cells.at(i, d));
      mx = std::max(mx, cells.at(i, d));
    }
    const double pad = mx > mn ? 1e-3 * (mx - mn) : 1e-3 * std::max(1.0, std::abs(mn));
    lo[d] = mn - pad;
    hi[d] = mx + pad;
  }
  return AxisBox(std::move(lo), std::move(hi));
}

std::vector<NodeId> assign(const MondrianTree& tree, const CellMatrix& data) {
  if (data.cols() != tree.dims()) {
    throw Error(ErrorCode::kInconsistent, "assign: data and tree dimensions differ");
  }
  std::vector<NodeId> out(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (!tree.domain().contains(data.row(i))) {
      throw Error(ErrorCode::kOutOfDomain, "cell " + std::to_string(i) + " lies outside the tree's root box");
    }
    out[i] = tree.descend(0, data.row(i));
  }
  return out;
}

LeafGaussian fit_gaussian(const CellMatrix& data, std::span<const std::size_t> members,
                          const AxisBox& leaf_box, const AxisBox& root_box) {
  const std::size_t dims = leaf_box.dims();
  LeafGaussian g{std::vector<double>(dims, 0.0), std::vector<double>(dims, 0.0)};
  const double n = static_cast<double>(members.size());
  for (std::size_t d = 0; d < dims; ++d) {
    const double floor = variance_floor(root_box.length(d));
    if (members.empty()) {
      const double sd = leaf_box.length(d) / 4.0;
      g.mean[d] = leaf_box.center(d);
      g.variance[d] = std::max(sd * sd, floor);
      continue;
    }
    double sum = 0.0;
    for (std::size_t i : members) sum += data.at(i, d);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t i : members) {
      const double dev = data.at(i, d) - mean;
      ss += dev * dev;
    }
    g.mean[d] = mean;
    g.variance[d] = std::max(ss / n, floor);
  }
  return g;
}

std::vector<LeafGaussian> fit_leaf_gaussians(const MondrianTree& tree, const CellMatrix& data) {
  const auto owner = assign(tree, data);
  const auto leaves = tree.leaves();
  std::vector<std::vector<std::size_t>> members(tree.size());
  for (std::size_t i = 0; i < owner.size(); ++i) members[owner[i]].push_back(i);
  std::vector<LeafGaussian> out;
  out.reserve(leaves.size());
  for (NodeId leaf : leaves) {
    out.push_back(fit_gaussian(data, members[leaf], tree.node(leaf).box, tree.domain()));
  }
  return out;
}

double gaussian_log_density(std::span<const double> x, const LeafGaussian& g) {
  constexpr double kLog2Pi = 1.8378770664093454836;  // ln(2 pi)
  double total = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double dev = x[d] - g.mean[d];
    total -= 0.5 * (kLog2Pi + std::log(g.variance[d]) + dev * dev / g.variance[d]);
  }
  return total;
}

double log_likelihood(const MondrianTree& tree, const CellMatrix& data,
                      std::span<const LeafGaussian> params) {
  const auto leaves = tree.leaves();
  if (params.size() != leaves.size()) {
    throw Error(ErrorCode::kLengthMismatch, "log_likelihood: one Gaussian per leaf is required");
  }
  std::vector<std::size_t> slot(tree.size(), 0);
  for (std::size_t k = 0; k < leaves.size(); ++k) slot[leaves[k]] = k;
  const auto owner = assign(tree, data);
  double total = 0.0;
  for (std::size_t i = 0; i < owner.size(); ++i) {
    total += gaussian_log_density(data.row(i), params[slot[owner[i]]]);
  }
  return total;
}

}  // namespace mpgate
