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

#include "mpgate/random.hpp"

#include <cmath>
#include <numbers>

#include "mpgate/error.hpp"

namespace mpgate {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kInvalidCut: return "invalid cut";
    case ErrorCode::kInvalidWeight: return "invalid weight";
    case ErrorCode::kInvalidDomain: return "invalid domain";
    case ErrorCode::kOutOfDomain: return "out of domain";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kInconsistent: return "inconsistent input";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kDepthExceeded: return "depth exceeded";
    case ErrorCode::kLengthMismatch: return "length mismatch";
  }
  return "unknown error";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomSource RandomSource::derive(std::uint64_t tag) const {
  return RandomSource(splitmix64(key_ ^ splitmix64(tag + kGoldenGamma)));
}

std::uint64_t RandomSource::next() {
  ++counter_;
  return splitmix64(key_ + counter_ * kGoldenGamma);
}

double RandomSource::uniform() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RandomSource::uniform_index(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "uniform_index: n == 0");
  // Rejection keeps the draw unbiased for n that do not divide 2^64.
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

double RandomSource::normal() {
  // Box-Muller; the second variate is discarded to keep draws stateless.
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomSource::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::kInvalidArgument, "exponential: rate must be positive");
  }
  return -std::log(uniform()) / rate;
}

double RandomSource::gamma(double shape) {
  if (!(shape > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost to shape + 1 and scale back (Marsaglia & Tsang, section 6).
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RandomSource::beta(double alpha, double beta_shape) {
  const double x = gamma(alpha);
  const double y = gamma(beta_shape);
  return x / (x + y);
}

std::size_t RandomSource::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::kInvalidWeight, "categorical: negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidWeight, "categorical: weights sum to zero");
  const double target = uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  // Rounding can leave target == total; fall back to the last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return weights.size() - 1;
}

}  // namespace mpgate
