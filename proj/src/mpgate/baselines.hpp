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

#ifndef MPGATE_BASELINES_HPP_
#define MPGATE_BASELINES_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mpgate/classify.hpp"
#include "mpgate/emissions.hpp"
#include "mpgate/prior_table.hpp"

namespace mpgate {

struct GMMComponents {
  std::vector<double> weights;
  std::vector<std::vector<double>> means;
  std::vector<std::vector<double>> variances;

  std::size_t size() const { return weights.size(); }
};

struct GMMFit {
  GMMComponents components;
  /// Data log likelihood before each M-step; non-decreasing.
  std::vector<double> log_lik_trace;
  bool converged = false;
};

struct EMOptions {
  std::size_t max_iterations = 500;
  double relative_tolerance = 1e-6;
};

/// Diagonal-covariance Gaussian mixture fit by expectation-maximization,
/// seeded k-means++ style on standardized coordinates. Variances are floored
/// at 1e-6 * (data range)^2 per dimension. Throws kInvalidArgument if K == 0
/// or there are fewer cells than components, and kInconsistent if the log
/// likelihood ever decreases.
GMMFit gmm_em_fit(const CellMatrix& data, std::size_t components, std::uint64_t seed,
                  const EMOptions& options = {});

/// Index of the component with the highest responsibility for each cell.
std::vector<std::size_t> gmm_assign(const GMMComponents& components, const CellMatrix& data);

/// Number of informative (+1/-1) entries of `row` that agree with `signs`.
std::size_t signature_agreement(std::span<const std::int8_t> row, std::span<const int> signs);

/// Type whose signature best matches the component mean's side of the data
/// median in each dimension (first row wins ties).
std::size_t match_component(std::span<const double> mean, std::span<const double> medians,
                            const PriorTable& table);

std::vector<double> column_medians(const CellMatrix& data);

/// Hard GMM assignment mapped to cell types through match_component.
LabelVector gmm_classify(const GMMComponents& components, const CellMatrix& data,
                         const PriorTable& table);

/// MP-Prior baseline: `samples` trees from the prior over the observed range
/// of `data` (the same streams init_chains uses), classified and voted with
/// ties broken by log prior. Reads the data only through its ranges and the
/// final leaf lookup.
VoteResult mp_prior_classify(const CellMatrix& data, const PriorTable& table,
                             const Hyperparameters& hyper, std::size_t samples, std::uint64_t seed);

}  // namespace mpgate

#endif  // MPGATE_BASELINES_HPP_
