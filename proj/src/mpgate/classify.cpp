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

#include "mpgate/classify.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "mpgate/error.hpp"

namespace mpgate {

std::vector<std::string> leaf_type_candidates(const MondrianTree& tree, NodeId leaf) {
  const Node& n = tree.node(leaf);
  if (!n.is_leaf() || !n.table) {
    throw Error(ErrorCode::kInvalidArgument, "leaf_type_candidates: node is not a leaf with a table");
  }
  return n.table->types();
}

LabelVector classify_sample(const MondrianTree& tree, const CellMatrix& data, RandomSource& rng) {
  std::vector<std::string> leaf_label(tree.size());
  for (NodeId leaf : tree.leaves()) {
    const auto candidates = leaf_type_candidates(tree, leaf);
    if (candidates.empty()) {
      leaf_label[leaf] = kUnknownLabel;
    } else if (candidates.size() == 1) {
      leaf_label[leaf] = candidates.front();
    } else {
      leaf_label[leaf] = candidates[rng.uniform_index(candidates.size())];
    }
  }
  const auto owner = assign(tree, data);
  LabelVector out(owner.size());
  for (std::size_t i = 0; i < owner.size(); ++i) out[i] = leaf_label[owner[i]];
  return out;
}

VoteResult vote(std::span<const LabelVector> samples, std::span<const double> log_posteriors) {
  if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "vote: no samples");
  if (log_posteriors.size() != samples.size()) {
    throw Error(ErrorCode::kLengthMismatch, "vote: one log posterior per sample is required");
  }
  const std::size_t n = samples.front().size();
  for (const auto& s : samples) {
    if (s.size() != n) throw Error(ErrorCode::kLengthMismatch, "vote: samples have different lengths");
  }

  // Samples ranked by decreasing posterior, earliest first on ties.
  std::vector<std::size_t> rank(samples.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(),
                   [&](std::size_t a, std::size_t b) { return log_posteriors[a] > log_posteriors[b]; });

  // Intern labels so the per-cell count is a small vector.
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> coded(samples.size(), std::vector<std::size_t>(n));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto [it, inserted] = ids.try_emplace(samples[s][i], names.size());
      if (inserted) names.push_back(samples[s][i]);
      coded[s][i] = it->second;
    }
  }
  const auto unknown_it = ids.find(kUnknownLabel);
  const std::size_t unknown = unknown_it == ids.end() ? names.size() : unknown_it->second;

  VoteResult out{LabelVector(n), std::vector<double>(n, 0.0)};
  std::vector<std::size_t> counts(names.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t s = 0; s < samples.size(); ++s) ++counts[coded[s][i]];
    std::size_t best = 0;
    for (std::size_t l = 0; l < names.size(); ++l) {
      if (l != unknown) best = std::max(best, counts[l]);
    }
    std::size_t winner = unknown;
    if (best > 0) {
      for (std::size_t s : rank) {
        const std::size_t l = coded[s][i];
        if (l != unknown && counts[l] == best) {
          winner = l;
          break;
        }
      }
    }
    if (winner == unknown) {
      out.labels[i] = kUnknownLabel;
      out.fraction[i] = 1.0;
    } else {
      out.labels[i] = names[winner];
      out.fraction[i] = static_cast<double>(best) / static_cast<double>(samples.size());
    }
  }
  return out;
}

double accuracy(const LabelVector& predicted, const LabelVector& truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, "accuracy: predicted and true labels differ in length");
  }
  if (truth.empty()) throw Error(ErrorCode::kInvalidArgument, "accuracy: no labels");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

Classification classify_posterior(const Posterior& posterior, const CellMatrix& data) {
  Classification out;
  std::vector<double> scores;
  for (const auto& s : posterior.samples) {
    RandomSource rng = chain_stream(s.seed, Stream::kClassify);
    out.per_sample.push_back(classify_sample(s.tree, data, rng));
    scores.push_back(s.log_posterior());
  }
  out.voted = vote(out.per_sample, scores);
  return out;
}

}  // namespace mpgate
