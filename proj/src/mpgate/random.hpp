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

#ifndef MPGATE_RANDOM_HPP_
#define MPGATE_RANDOM_HPP_

#include <cstdint>
#include <limits>
#include <span>

namespace mpgate {

/// Counter-based generator: draw k is a SplitMix64 finalization of
/// (key + k * golden gamma). Two sources with the same key produce the same
/// stream on every platform, and independent streams are obtained with
/// derive() rather than by sharing state.
///
/// The distribution helpers below are implemented here instead of via
/// <random> because the standard distributions are implementation-defined.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  explicit RandomSource(std::uint64_t seed = 0) : key_(seed) {}

  std::uint64_t seed() const { return key_; }
  std::uint64_t position() const { return counter_; }

  /// Independent child stream identified by `tag`. Does not advance this one.
  RandomSource derive(std::uint64_t tag) const;

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);
  double normal();
  double exponential(double rate);
  double gamma(double shape);
  double beta(double alpha, double beta);
  /// Index drawn with probability proportional to `weights` (nonnegative,
  /// positive sum).
  std::size_t categorical(std::span<const double> weights);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace mpgate

#endif  // MPGATE_RANDOM_HPP_
