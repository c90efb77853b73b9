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

#ifndef MPGATE_POSTERIOR_IO_HPP_
#define MPGATE_POSTERIOR_IO_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpgate/classify.hpp"
#include "mpgate/inference.hpp"

namespace mpgate {

/// JSON document holding the table, hyperparameters, MCMC settings and every
/// posterior sample (tree plus its scores). The trace is written separately.
std::string export_posterior(const Posterior& posterior);
Posterior parse_posterior(std::string_view text);

/// chain,iteration,log_prior,log_lik,acceptance_rate
std::string export_trace(const std::vector<TraceRow>& trace);

/// cell,label,vote_fraction[,sample_0,...]. Per-sample columns are written
/// when `per_sample` is nonempty.
std::string export_labels(const VoteResult& voted, const std::vector<LabelVector>& per_sample = {});

/// Reads the `label` column of any label CSV (truth or predicted). Cells must
/// be numbered 0..N-1 in order.
LabelVector parse_labels(std::string_view text);
LabelVector read_labels_file(const std::string& path);

/// method,accuracy rows, and the same table as aligned text.
std::string export_accuracy_csv(const std::vector<std::pair<std::string, double>>& rows);
std::string export_accuracy_text(const std::vector<std::pair<std::string, double>>& rows);

}  // namespace mpgate

#endif  // MPGATE_POSTERIOR_IO_HPP_
