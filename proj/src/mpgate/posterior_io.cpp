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

#include "mpgate/posterior_io.hpp"

#include <algorithm>

#include <json.hpp>

#include "mpgate/csv.hpp"
#include "mpgate/error.hpp"
#include "mpgate/tree_io.hpp"

namespace mpgate {

using nlohmann::json;

std::string export_posterior(const Posterior& post) {
  const auto& markers = post.table.markers();
  json samples = json::array();
  for (const auto& s : post.samples) {
    samples.push_back({{"chain", s.chain},
                       {"seed", s.seed},
                       {"log_prior", s.log_prior},
                       {"log_lik", s.log_lik},
                       {"initial_log_prior", s.initial_log_prior},
                       {"initial_log_lik", s.initial_log_lik},
                       {"acceptance_rate", s.acceptance_rate},
                       {"tree", tree_to_json(s.tree, markers)}});
  }
  const json doc = {
      {"format", "mpgate-posterior"},
      {"version", 1},
      {"markers", markers},
      {"table", table_to_json(post.table)},
      {"hyper",
       {{"gamma0", post.hyper.gamma0},
        {"gamma1", post.hyper.gamma1},
        {"phi0", post.hyper.phi0},
        {"phi1", post.hyper.phi1},
        {"lambda0", post.hyper.lambda0}}},
      {"mcmc",
       {{"chains", post.config.chains},
        {"iterations", post.config.iterations},
        {"step", post.config.step},
        {"seed", post.config.seed}}},
      {"samples", std::move(samples)}};
  return doc.dump(1) + "\n";
}

Posterior parse_posterior(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != "mpgate-posterior") {
      throw Error(ErrorCode::kParse, "not an mpgate posterior document");
    }
    Posterior post;
    const auto markers = doc.at("markers").get<std::vector<std::string>>();
    post.table = table_from_json(doc.at("table"), markers);
    const auto& h = doc.at("hyper");
    post.hyper = {h.at("gamma0").get<double>(), h.at("gamma1").get<double>(), h.at("phi0").get<double>(),
                  h.at("phi1").get<double>(), h.at("lambda0").get<double>()};
    const auto& m = doc.at("mcmc");
    post.config.chains = m.at("chains").get<std::size_t>();
    post.config.iterations = m.at("iterations").get<std::size_t>();
    post.config.step = m.at("step").get<double>();
    post.config.seed = m.at("seed").get<std::uint64_t>();
    for (const auto& s : doc.at("samples")) {
      PosteriorSample ps;
      ps.chain = s.at("chain").get<std::size_t>();
      ps.seed = s.at("seed").get<std::uint64_t>();
      ps.log_prior = s.at("log_prior").get<double>();
      ps.log_lik = s.at("log_lik").get<double>();
      ps.initial_log_prior = s.at("initial_log_prior").get<double>();
      ps.initial_log_lik = s.at("initial_log_lik").get<double>();
      ps.acceptance_rate = s.at("acceptance_rate").get<double>();
      ps.tree = tree_from_json(s.at("tree"));
      if (ps.tree.dims() != markers.size()) throw Error(ErrorCode::kInconsistent, "sample tree dimension mismatch");
      post.samples.push_back(std::move(ps));
    }
    if (post.samples.empty()) throw Error(ErrorCode::kParse, "posterior document has no samples");
    return post;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("posterior document: ") + e.what());
  }
}

std::string export_trace(const std::vector<TraceRow>& trace) {
  std::string out = "chain,iteration,log_prior,log_lik,acceptance_rate\n";
  for (const auto& r : trace) {
    out += std::to_string(r.chain) + "," + std::to_string(r.iteration) + "," + csv::format_double(r.log_prior) +
           "," + csv::format_double(r.log_lik) + "," + csv::format_double(r.acceptance_rate) + "\n";
  }
  return out;
}

std::string export_labels(const VoteResult& voted, const std::vector<LabelVector>& per_sample) {
  std::string out = "cell,label,vote_fraction";
  for (std::size_t s = 0; s < per_sample.size(); ++s) out += ",sample_" + std::to_string(s);
  out += "\n";
  for (std::size_t i = 0; i < voted.labels.size(); ++i) {
    out += std::to_string(i) + "," + voted.labels[i] + "," + csv::format_fixed(voted.fraction[i], 4);
    for (const auto& s : per_sample) out += "," + s.at(i);
    out += "\n";
  }
  return out;
}

LabelVector parse_labels(std::string_view text) {
  const auto records = csv::parse(text);
  if (records.size() < 2) throw Error(ErrorCode::kParse, "labels: no rows");
  const auto& header = records.front().fields;
  const auto cell_col = std::find(header.begin(), header.end(), "cell");
  const auto label_col = std::find(header.begin(), header.end(), "label");
  if (cell_col == header.end() || label_col == header.end()) {
    throw Error(ErrorCode::kParse, "labels: header needs 'cell' and 'label' columns");
  }
  const auto ci = static_cast<std::size_t>(cell_col - header.begin());
  const auto li = static_cast<std::size_t>(label_col - header.begin());
  LabelVector out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "labels line " + std::to_string(rec.line);
    if (rec.fields.size() != header.size()) throw Error(ErrorCode::kParse, where + ": wrong field count");
    if (csv::parse_integer(rec.fields[ci], where) != static_cast<long long>(out.size())) {
      throw Error(ErrorCode::kParse, where + ": cells must be numbered 0..N-1 in order");
    }
    out.push_back(rec.fields[li]);
  }
  return out;
}

LabelVector read_labels_file(const std::string& path) {
  const std::string text = csv::read_file(path);
  try {
    return parse_labels(text);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string export_accuracy_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = "method,accuracy\n";
  for (const auto& [name, acc] : rows) out += name + "," + csv::format_fixed(acc, 6) + "\n";
  return out;
}

std::string export_accuracy_text(const std::vector<std::pair<std::string, double>>& rows) {
  std::size_t width = 6;
  for (const auto& row : rows) width = std::max(width, row.first.size());
  std::string out = "method" + std::string(width - 6 + 2, ' ') + "accuracy\n";
  for (const auto& [name, acc] : rows) {
    out += name + std::string(width - name.size() + 2, ' ') + csv::format_fixed(100.0 * acc, 1) + "%\n";
  }
  return out;
}

}  // namespace mpgate
