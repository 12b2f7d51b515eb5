// Copyright 2026 The lopsim Authors
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

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace lopsim {

/// Engines are derived per work item (trial, solver start) so results do
/// not depend on execution order or thread count.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index = 0) {
  return std::mt19937_64(mix_seed(seed, index));
}

/// Uniform double in [0, 1). Derived from raw 64-bit output rather than
/// std::uniform_real_distribution so streams are stable across library
/// versions.
inline double uniform_unit(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(eng);
}

/// Single-qubit amplitudes drawn uniformly on the Bloch sphere.
inline std::pair<std::complex<double>, std::complex<double>> random_bloch_qubit(
    std::mt19937_64& eng) {
  const double theta = std::acos(1.0 - 2.0 * uniform_unit(eng));
  const double phi = uniform_in(eng, 0.0, 2.0 * std::numbers::pi);
  return {std::complex<double>(std::cos(theta / 2.0), 0.0),
          std::polar(std::sin(theta / 2.0), phi)};
}

}  // namespace lopsim
