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

#ifndef MPGATE_RENDER_HPP_
#define MPGATE_RENDER_HPP_

#include <cstddef>
#include <span>
#include <string>

#include "mpgate/emissions.hpp"
#include "mpgate/partition.hpp"

namespace mpgate {

inline constexpr double kPlotSize = 800.0;
inline constexpr double kPlotMargin = 40.0;  // 5% of kPlotSize

/// Scatter of the cells in the (x_dim, y_dim) plane, black dots, overlaid
/// with every cut on either dimension from every sample as a blue segment
/// spanning the cut's box. The plot window is the first sample's root box.
/// Cut segments carry class="cut". Throws kInvalidArgument for an invalid or
/// repeated dimension or an empty sample list.
std::string render_posterior_cuts(std::span<const MondrianTree> samples, const CellMatrix& data,
                                  std::size_t x_dim, std::size_t y_dim);

}  // namespace mpgate

#endif  // MPGATE_RENDER_HPP_
