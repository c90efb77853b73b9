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

#ifndef MPGATE_SYNTHETIC_HPP_
#define MPGATE_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>

#include "mpgate/classify.hpp"
#include "mpgate/emissions.hpp"
#include "mpgate/partition.hpp"
#include "mpgate/prior_table.hpp"

namespace mpgate {

struct SyntheticSpec {
  PriorTable table;
  Hyperparameters hyper;
  std::size_t cells = 1000;
  double separation = 2.0;  // leaf standard deviation is length / (4 * separation)
  std::uint64_t seed = 0;
};

struct SyntheticData {
  CellMatrix cells;
  LabelVector truth;
  MondrianTree tree;  // generating tree, Gaussians attached
};

inline constexpr int kSyntheticAttempts = 100;

/// Draws a tree from the prior on the unit box, retrying until every leaf has
/// exactly one candidate type, then draws cells i.i.d.: a leaf with
/// probability proportional to its volume, then a Gaussian centered in the
/// leaf truncated (by rejection) to the leaf's interior.
/// Throws kInvalidArgument after kSyntheticAttempts failed trees.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace mpgate

#endif  // MPGATE_SYNTHETIC_HPP_
