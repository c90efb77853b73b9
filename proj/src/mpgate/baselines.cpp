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

#include "mpgate/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpgate/error.hpp"
#include "mpgate/inference.hpp"
#include "mpgate/sampler.hpp"

namespace mpgate {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double component_log_density(std::span<const double> x, const std::vector<double>& mean,
                             const std::vector<double>& var) {
  double total = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double dev = x[d] - mean[d];
    total -= 0.5 * (kLog2Pi + std::log(var[d]) + dev * dev / var[d]);
  }
  return total;
}

// Log responsibilities of one cell (unnormalized) and their log-sum-exp.
double log_joint(const GMMComponents& g, std::span<const double> x, std::vector<double>& out) {
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < g.size(); ++k) {
    out[k] = g.weights[k] > 0.0
                 ? std::log(g.weights[k]) + component_log_density(x, g.means[k], g.variances[k])
                 : -std::numeric_limits<double>::infinity();
    mx = std::max(mx, out[k]);
  }
  double s = 0.0;
  for (double v : out) s += std::exp(v - mx);
  return mx + std::log(s);
}

}  // namespace

GMMFit gmm_em_fit(const CellMatrix& data, std::size_t K, std::uint64_t seed, const EMOptions& options) {
  const std::size_t n = data.rows();
  const std::size_t dims = data.cols();
  if (K == 0) throw Error(ErrorCode::kInvalidArgument, "gmm_em_fit: need at least one component");
  if (n < K) throw Error(ErrorCode::kInvalidArgument, "gmm_em_fit: fewer cells than components");

  std::vector<double> floor(dims), global_mean(dims, 0.0), global_var(dims, 0.0);
  for (std::size_t d = 0; d < dims; ++d) {
    double mn = data.at(0, d), mx = mn;
    for (std::size_t i = 0; i < n; ++i) {
      mn = std::min(mn, data.at(i, d));
      mx = std::max(mx, data.at(i, d));
      global_mean[d] += data.at(i, d);
    }
    global_mean[d] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = data.at(i, d) - global_mean[d];
      global_var[d] += dev * dev;
    }
    global_var[d] /= static_cast<double>(n);
    floor[d] = variance_floor(mx - mn);
    if (!(floor[d] > 0.0)) floor[d] = 1e-12;
  }

  // k-means++ seeding in standardized coordinates.
  RandomSource rng(seed);
  auto dist2 = [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
      const double dev = data.at(i, d) - data.at(j, d);
      s += dev * dev / std::max(global_var[d], floor[d]);
    }
    return s;
  };
  std::vector<std::size_t> centers{static_cast<std::size_t>(rng.uniform_index(n))};
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (centers.size() < K) {
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], dist2(i, centers.back()));
    double total = 0.0;
    for (double v : nearest) total += v;
    centers.push_back(total > 0.0 ? rng.categorical(nearest) : rng.uniform_index(n));
  }
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
      const double v = dist2(i, centers[k]);
      if (v < best) {
        best = v;
        label[i] = k;
      }
    }
  }

  GMMComponents g;
  g.weights.assign(K, 0.0);
  g.means.assign(K, std::vector<double>(dims, 0.0));
  g.variances.assign(K, std::vector<double>(dims, 0.0));
  std::vector<double> count(K, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    count[label[i]] += 1.0;
    for (std::size_t d = 0; d < dims; ++d) g.means[label[i]][d] += data.at(i, d);
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t d = 0; d < dims; ++d) {
      g.means[k][d] = count[k] > 0.0 ? g.means[k][d] / count[k] : data.at(centers[k], d);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dims; ++d) {
      const double dev = data.at(i, d) - g.means[label[i]][d];
      g.variances[label[i]][d] += dev * dev;
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    g.weights[k] = std::max(count[k], 1.0);
    for (std::size_t d = 0; d < dims; ++d) {
      g.variances[k][d] = count[k] >= 2.0 ? std::max(g.variances[k][d] / count[k], floor[d])
                                          : std::max(global_var[d], floor[d]);
    }
  }
  double wsum = 0.0;
  for (double w : g.weights) wsum += w;
  for (double& w : g.weights) w /= wsum;

  GMMFit fit;
  std::vector<double> resp(n * K), row(K);
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    // E-step.
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double lse = log_joint(g, data.row(i), row);
      ll += lse;
      for (std::size_t k = 0; k < K; ++k) resp[i * K + k] = std::exp(row[k] - lse);
    }
    if (ll < previous - 1e-9 * std::max(1.0, std::abs(previous))) {
      throw Error(ErrorCode::kInconsistent, "gmm_em_fit: log likelihood decreased");
    }
    fit.log_lik_trace.push_back(ll);
    if (std::isfinite(previous) && ll - previous < options.relative_tolerance * std::abs(previous)) {
      fit.converged = true;
      break;
    }
    previous = ll;

    // M-step.
    for (std::size_t k = 0; k < K; ++k) {
      double nk = 0.0;
      for (std::size_t i = 0; i < n; ++i) nk += resp[i * K + k];
      if (nk <= 1e-12) {
        g.weights[k] = 0.0;  // dead component: keep its parameters
        continue;
      }
      g.weights[k] = nk / static_cast<double>(n);
      for (std::size_t d = 0; d < dims; ++d) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += resp[i * K + k] * data.at(i, d);
        m /= nk;
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double dev = data.at(i, d) - m;
          v += resp[i * K + k] * dev * dev;
        }
        g.means[k][d] = m;
        g.variances[k][d] = std::max(v / nk, floor[d]);
      }
    }
  }
  fit.components = std::move(g);
  return fit;
}

std::vector<std::size_t> gmm_assign(const GMMComponents& g, const CellMatrix& data) {
  std::vector<std::size_t> out(data.rows());
  std::vector<double> row(g.size());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    log_joint(g, data.row(i), row);
    out[i] = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

std::size_t signature_agreement(std::span<const std::int8_t> row, std::span<const int> signs) {
  std::size_t score = 0;
  for (std::size_t d = 0; d < row.size(); ++d) score += row[d] != 0 && row[d] == signs[d];
  return score;
}

std::vector<double> column_medians(const CellMatrix& data) {
  std::vector<double> out(data.cols());
  std::vector<double> col(data.rows());
  for (std::size_t d = 0; d < data.cols(); ++d) {
    for (std::size_t i = 0; i < data.rows(); ++i) col[i] = data.at(i, d);
    std::sort(col.begin(), col.end());
    const std::size_t m = col.size() / 2;
    out[d] = col.size() % 2 ? col[m] : 0.5 * (col[m - 1] + col[m]);
  }
  return out;
}

std::size_t match_component(std::span<const double> mean, std::span<const double> medians,
                            const PriorTable& table) {
  if (table.empty()) throw Error(ErrorCode::kInvalidArgument, "match_component: empty table");
  std::vector<int> signs(mean.size());
  for (std::size_t d = 0; d < mean.size(); ++d) {
    signs[d] = mean[d] > medians[d] ? 1 : mean[d] < medians[d] ? -1 : 0;
  }
  std::size_t best = 0, best_score = 0;
  for (std::size_t c = 0; c < table.num_types(); ++c) {
    const std::size_t score = signature_agreement(table.row(c), signs);
    if (score > best_score) {
      best = c;
      best_score = score;
    }
  }
  return best;
}

LabelVector gmm_classify(const GMMComponents& g, const CellMatrix& data, const PriorTable& table) {
  if (data.markers() != table.markers()) {
    throw Error(ErrorCode::kInconsistent, "gmm_classify: cell markers are not aligned with the table");
  }
  const auto medians = column_medians(data);
  std::vector<std::string> component_type(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    component_type[k] = table.types()[match_component(g.means[k], medians, table)];
  }
  const auto comp = gmm_assign(g, data);
  LabelVector out(comp.size());
  for (std::size_t i = 0; i < comp.size(); ++i) out[i] = component_type[comp[i]];
  return out;
}

VoteResult mp_prior_classify(const CellMatrix& data, const PriorTable& table,
                             const Hyperparameters& hyper, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw Error(ErrorCode::kInvalidArgument, "mp_prior_classify: need at least one sample");
  if (data.markers() != table.markers()) {
    throw Error(ErrorCode::kInconsistent, "mp_prior_classify: cell markers are not aligned with the table");
  }
  const AxisBox box = observed_domain(data);
  std::vector<LabelVector> labels;
  std::vector<double> scores;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::uint64_t s = chain_seed(seed, i);
    RandomSource prior_rng = chain_stream(s, Stream::kPrior);
    const MondrianTree tree = sample_mondrian(hyper.lambda0, box, table, hyper, prior_rng);
    RandomSource class_rng = chain_stream(s, Stream::kClassify);
    labels.push_back(classify_sample(tree, data, class_rng));
    scores.push_back(log_prior(tree, table, hyper));
  }
  return vote(labels, scores);
}

}  // namespace mpgate
