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

#include "mpgate/synthetic.hpp"

#include <cmath>
#include <optional>

#include "mpgate/error.hpp"
#include "mpgate/sampler.hpp"

namespace mpgate {

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.cells < 1) throw Error(ErrorCode::kInvalidArgument, "synthetic data needs at least one cell");
  if (!(spec.separation > 0.0)) throw Error(ErrorCode::kInvalidArgument, "separation must be positive");
  spec.hyper.validate();
  const RandomSource master(spec.seed);
  const std::size_t dims = spec.table.num_markers();

  std::optional<MondrianTree> tree;
  for (int attempt = 0; attempt < kSyntheticAttempts && !tree; ++attempt) {
    RandomSource rng = master.derive(static_cast<std::uint64_t>(attempt));
    MondrianTree t = sample_mondrian(spec.hyper.lambda0, AxisBox::unit(dims), spec.table, spec.hyper, rng);
    bool single = true;
    for (NodeId leaf : t.leaves()) single = single && t.node(leaf).table->num_types() == 1;
    if (single) tree = std::move(t);
  }
  if (!tree) {
    throw Error(ErrorCode::kInvalidArgument,
                "no tree with one cell type per leaf after " + std::to_string(kSyntheticAttempts) +
                    " draws; try a larger lambda0");
  }

  const auto leaves = tree->leaves();
  std::vector<double> volume;
  for (NodeId leaf : leaves) {
    const AxisBox& box = tree->node(leaf).box;
    LeafGaussian g{std::vector<double>(dims), std::vector<double>(dims)};
    for (std::size_t d = 0; d < dims; ++d) {
      const double sd = box.length(d) / (4.0 * spec.separation);
      g.mean[d] = box.center(d);
      g.variance[d] = sd * sd;
    }
    tree->set_gaussian(leaf, std::move(g));
    volume.push_back(box.volume());
  }

  RandomSource rng = master.derive(0xCE11u);
  std::vector<double> values;
  values.reserve(spec.cells * dims);
  LabelVector truth;
  truth.reserve(spec.cells);
  for (std::size_t i = 0; i < spec.cells; ++i) {
    const Node& leaf = tree->node(leaves[rng.categorical(volume)]);
    for (std::size_t d = 0; d < dims; ++d) {
      const double sd = std::sqrt(leaf.gaussian->variance[d]);
      double x;
      do {
        x = leaf.gaussian->mean[d] + sd * rng.normal();
      } while (!(x > leaf.box.lower(d) && x < leaf.box.upper(d)));
      values.push_back(x);
    }
    truth.push_back(leaf.table->types().front());
  }
  return {CellMatrix(spec.table.markers(), std::move(values)), std::move(truth), std::move(*tree)};
}

}  // namespace mpgate
