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

#include "mpgate/render.hpp"

#include "mpgate/csv.hpp"
#include "mpgate/error.hpp"

namespace mpgate {

namespace {

std::string num(double v) { return csv::format_fixed(v, 2); }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_posterior_cuts(std::span<const MondrianTree> samples, const CellMatrix& data,
                                  std::size_t x_dim, std::size_t y_dim) {
  if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "render: no posterior samples");
  if (x_dim >= data.cols() || y_dim >= data.cols() || x_dim == y_dim) {
    throw Error(ErrorCode::kInvalidArgument, "render: plot dimensions must be two distinct markers");
  }
  const AxisBox& window = samples.front().domain();
  if (window.dims() != data.cols()) throw Error(ErrorCode::kInconsistent, "render: tree/data dimension mismatch");
  const double span = kPlotSize - 2.0 * kPlotMargin;
  auto px = [&](double v) { return kPlotMargin + (v - window.lower(x_dim)) / window.length(x_dim) * span; };
  auto py = [&](double v) {
    return kPlotSize - kPlotMargin - (v - window.lower(y_dim)) / window.length(y_dim) * span;
  };

  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n"
      "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n";
  out += "<rect x=\"" + num(kPlotMargin) + "\" y=\"" + num(kPlotMargin) + "\" width=\"" + num(span) +
         "\" height=\"" + num(span) + "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<g id=\"cells\" fill=\"black\">\n";
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out += "<circle cx=\"" + num(px(data.at(i, x_dim))) + "\" cy=\"" + num(py(data.at(i, y_dim))) +
           "\" r=\"1.5\"/>\n";
  }
  out += "</g>\n<g id=\"cuts\" stroke=\"blue\" stroke-width=\"1\" stroke-opacity=\"0.4\">\n";
  for (const auto& tree : samples) {
    for (const auto& n : tree.nodes()) {
      if (n.is_leaf() || (n.cut->dim != x_dim && n.cut->dim != y_dim)) continue;
      double x1, y1, x2, y2;
      if (n.cut->dim == x_dim) {
        x1 = x2 = px(n.cut->position);
        y1 = py(n.box.lower(y_dim));
        y2 = py(n.box.upper(y_dim));
      } else {
        y1 = y2 = py(n.cut->position);
        x1 = px(n.box.lower(x_dim));
        x2 = px(n.box.upper(x_dim));
      }
      out += "<line class=\"cut\" x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
             num(y2) + "\"/>\n";
    }
  }
  out += "</g>\n";
  out += "<text x=\"400\" y=\"" + num(kPlotSize - 10.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape(data.markers()[x_dim]) + "</text>\n";
  out += "<text x=\"16\" y=\"400\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\" "
         "transform=\"rotate(-90 16 400)\">" +
         escape(data.markers()[y_dim]) + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace mpgate
