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

#ifndef MPGATE_EMISSIONS_HPP_
#define MPGATE_EMISSIONS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mpgate/partition.hpp"

namespace mpgate {

/// N cells by D markers, row-major, with marker names.
class CellMatrix {
 public:
  CellMatrix() = default;
  CellMatrix(std::vector<std::string> markers, std::vector<double> values);

  std::size_t rows() const { return markers_.empty() ? 0 : values_.size() / markers_.size(); }
  std::size_t cols() const { return markers_.size(); }
  const std::vector<std::string>& markers() const { return markers_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols(), cols()};
  }
  double at(std::size_t i, std::size_t d) const { return values_[i * cols() + d]; }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const CellMatrix&, const CellMatrix&) = default;

 private:
  std::vector<std::string> markers_;
  std::vector<double> values_;
};

/// Header of marker names, then one row of reals per cell.
CellMatrix parse_cells(std::string_view text);
CellMatrix read_cells_file(const std::string& path);
std::string serialize_cells(const CellMatrix& cells);

/// Reorders columns to `markers` by name. Throws kInconsistent naming the
/// first marker missing on either side.
CellMatrix align_to_markers(const CellMatrix& cells, const std::vector<std::string>& markers);

/// Per-dimension [min, max] of the data widened by 0.1% of the range on each
/// side, so every cell is strictly inside. A constant column is widened by
/// 0.1% of max(1, |value|).
AxisBox observed_domain(const CellMatrix& cells);

/// Leaf of every cell (index into tree.nodes()). Throws kOutOfDomain naming
/// the first cell outside the root box.
std::vector<NodeId> assign(const MondrianTree& tree, const CellMatrix& data);

/// Variance floor for a dimension whose root extent is `root_length`.
inline double variance_floor(double root_length) { return 1e-6 * root_length * root_length; }

/// Plug-in diagonal Gaussian for a set of member cells inside `leaf_box`:
/// sample mean and biased variance, floored. No members: box center with
/// standard deviation length/4. One member: that cell with floor variances.
LeafGaussian fit_gaussian(const CellMatrix& data, std::span<const std::size_t> members,
                          const AxisBox& leaf_box, const AxisBox& root_box);

/// One Gaussian per leaf, in tree.leaves() order.
std::vector<LeafGaussian> fit_leaf_gaussians(const MondrianTree& tree, const CellMatrix& data);

double gaussian_log_density(std::span<const double> x, const LeafGaussian& g);

/// sum_i log N(x_i; mu_k(i), Sigma_k(i)) with k(i) the leaf holding cell i.
/// `params` are in tree.leaves() order. Cells are summed in index order.
double log_likelihood(const MondrianTree& tree, const CellMatrix& data,
                      std::span<const LeafGaussian> params);

}  // namespace mpgate

#endif  // MPGATE_EMISSIONS_HPP_
