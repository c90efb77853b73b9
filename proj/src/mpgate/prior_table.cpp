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

#include "mpgate/prior_table.hpp"

#include <cmath>
#include <set>

#include "mpgate/csv.hpp"
#include "mpgate/error.hpp"

namespace mpgate {

namespace {

void check_names(const std::vector<std::string>& names, const char* what) {
  std::set<std::string_view> seen;
  for (const auto& name : names) {
    if (!csv::is_valid_name(name)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " name '" + name + "' is empty or has characters outside [A-Za-z0-9_+-]");
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::kInvalidArgument, std::string("duplicate ") + what + " name '" + name + "'");
    }
  }
}

}  // namespace

PriorTable::PriorTable(std::vector<std::string> types, std::vector<std::string> markers,
                       std::vector<std::int8_t> entries)
    : types_(std::move(types)), markers_(std::move(markers)), entries_(std::move(entries)) {
  if (markers_.empty()) throw Error(ErrorCode::kInvalidArgument, "prior table needs at least one marker");
  check_names(types_, "cell type");
  check_names(markers_, "marker");
  if (entries_.size() != types_.size() * markers_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "prior table entry count does not match its shape");
  }
  for (auto e : entries_) {
    if (e < -1 || e > 1) throw Error(ErrorCode::kInvalidArgument, "prior table entries must be -1, 0 or +1");
  }
}

std::size_t PriorTable::marker_index(std::string_view name) const {
  for (std::size_t d = 0; d < markers_.size(); ++d) {
    if (markers_[d] == name) return d;
  }
  return static_cast<std::size_t>(-1);
}

PriorTable PriorTable::select_rows(std::span<const std::size_t> rows) const {
  PriorTable out;
  out.markers_ = markers_;
  out.types_.reserve(rows.size());
  out.entries_.reserve(rows.size() * markers_.size());
  for (std::size_t r : rows) {
    out.types_.push_back(types_.at(r));
    const auto src = row(r);
    out.entries_.insert(out.entries_.end(), src.begin(), src.end());
  }
  return out;
}

void Hyperparameters::validate() const {
  for (double v : {gamma0, gamma1, phi0, phi1, lambda0}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "hyperparameters must be positive and finite");
    }
  }
  if (!(gamma1 < gamma0)) throw Error(ErrorCode::kInvalidArgument, "gamma1 must be smaller than gamma0");
  if (!(phi1 < phi0)) throw Error(ErrorCode::kInvalidArgument, "phi1 must be smaller than phi0");
}

LabelSet label_set(const PriorTable& table, std::size_t dim) {
  if (dim >= table.num_markers()) throw Error(ErrorCode::kInvalidArgument, "label_set: dimension out of range");
  LabelSet s;
  for (std::size_t c = 0; c < table.num_types(); ++c) {
    switch (table.entry(c, dim)) {
      case -1: s.low = true; break;
      case 0: s.zero = true; break;
      default: s.high = true; break;
    }
  }
  return s;
}

double dimension_weight(const LabelSet& labels, const Hyperparameters& hyper) {
  if (labels.empty()) throw Error(ErrorCode::kInvalidArgument, "dimension_weight: empty label set");
  if (labels.low && labels.high) return hyper.gamma0;
  if (labels.low || labels.high) return hyper.gamma1;
  return 1.0;
}

BetaShape cut_beta_params(const LabelSet& labels, const Hyperparameters& hyper) {
  if (labels.empty()) throw Error(ErrorCode::kInvalidArgument, "cut_beta_params: empty label set");
  if (labels.low && labels.high) return {hyper.phi0, hyper.phi0};
  if (labels.low) return {hyper.phi1, hyper.phi0};
  if (labels.high) return {hyper.phi0, hyper.phi1};
  return {1.0, 1.0};
}

PriorTable filter_rows(const PriorTable& table, std::size_t dim, Side side) {
  if (dim >= table.num_markers()) throw Error(ErrorCode::kInvalidArgument, "filter_rows: dimension out of range");
  const int excluded = side == Side::kLeft ? +1 : -1;
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < table.num_types(); ++c) {
    if (table.entry(c, dim) != excluded) keep.push_back(c);
  }
  return table.select_rows(keep);
}

PriorTable parse_table(std::string_view text) {
  const auto records = csv::parse(text);
  if (records.empty()) throw Error(ErrorCode::kParse, "prior table: no header row");
  const auto& header = records.front();
  if (header.fields.size() < 2) {
    throw Error(ErrorCode::kParse, "prior table line " + std::to_string(header.line) +
                                       ": header needs a type column and at least one marker");
  }
  std::vector<std::string> markers(header.fields.begin() + 1, header.fields.end());
  if (records.size() < 2) throw Error(ErrorCode::kParse, "prior table: empty body");

  std::vector<std::string> types;
  std::vector<std::int8_t> entries;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "prior table line " + std::to_string(rec.line);
    if (rec.fields.size() != header.fields.size()) {
      throw Error(ErrorCode::kParse, where + ": expected " + std::to_string(header.fields.size()) +
                                         " fields, found " + std::to_string(rec.fields.size()));
    }
    types.push_back(rec.fields[0]);
    for (std::size_t d = 0; d < markers.size(); ++d) {
      const std::string& f = rec.fields[d + 1];
      int v;
      if (f == "-1") v = -1;
      else if (f == "0" || f == "-0" || f == "+0") v = 0;
      else if (f == "1" || f == "+1") v = 1;
      else {
        throw Error(ErrorCode::kParse, where + ", column " + std::to_string(d + 2) + " (" + markers[d] +
                                           "): entry '" + f + "' is not one of -1, 0, +1");
      }
      entries.push_back(static_cast<std::int8_t>(v));
    }
  }
  try {
    return PriorTable(std::move(types), std::move(markers), std::move(entries));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, std::string("prior table: ") + e.what());
  }
}

PriorTable read_table_file(const std::string& path) {
  const std::string text = csv::read_file(path);
  try {
    return parse_table(text);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string serialize_table(const PriorTable& table) {
  std::string out = "cell_type";
  for (const auto& m : table.markers()) out += "," + m;
  out += "\n";
  for (std::size_t c = 0; c < table.num_types(); ++c) {
    out += table.types()[c];
    for (std::size_t d = 0; d < table.num_markers(); ++d) {
      const int e = table.entry(c, d);
      out += e < 0 ? ",-1" : e > 0 ? ",1" : ",0";
    }
    out += "\n";
  }
  return out;
}

}  // namespace mpgate
