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

#ifndef MPGATE_CLASSIFY_HPP_
#define MPGATE_CLASSIFY_HPP_

#include <span>
#include <string>
#include <vector>

#include "mpgate/emissions.hpp"
#include "mpgate/inference.hpp"
#include "mpgate/partition.hpp"
#include "mpgate/random.hpp"

namespace mpgate {

/// Label for cells in a leaf that no cell type survives to.
inline constexpr const char* kUnknownLabel = "UNKNOWN";

/// Per-cell type names (prior-table row names or kUnknownLabel).
using LabelVector = std::vector<std::string>;

/// Types consistent with the leaf's cut history: the rows of its table.
std::vector<std::string> leaf_type_candidates(const MondrianTree& tree, NodeId leaf);

/// Labels every cell with its leaf's candidate. A leaf with several
/// candidates draws one uniformly (one draw per leaf, leaves visited in
/// depth-first order); a leaf with none yields kUnknownLabel.
LabelVector classify_sample(const MondrianTree& tree, const CellMatrix& data, RandomSource& rng);

struct VoteResult {
  LabelVector labels;
  std::vector<double> fraction;  // share of samples that voted for the winner
};

/// Per-cell plurality over samples, ignoring kUnknownLabel votes. Ties go to
/// the tied label chosen by the sample with the highest `log_posteriors`
/// entry (earliest sample on equal values). Cells with only unknown votes stay
/// unknown. Throws kLengthMismatch if sample lengths differ.
VoteResult vote(std::span<const LabelVector> samples, std::span<const double> log_posteriors);

/// Fraction of equal entries; an unknown prediction only matches an unknown
/// truth. Throws kLengthMismatch on unequal lengths.
double accuracy(const LabelVector& predicted, const LabelVector& truth);

struct Classification {
  std::vector<LabelVector> per_sample;
  VoteResult voted;
};

/// Classifies `data` under every posterior sample (each with its chain's
/// classification stream) and votes, breaking ties by log posterior.
Classification classify_posterior(const Posterior& posterior, const CellMatrix& data);

}  // namespace mpgate

#endif  // MPGATE_CLASSIFY_HPP_
