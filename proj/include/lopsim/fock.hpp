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
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lopsim/matrix.hpp"
#include "lopsim/parallel.hpp"
#include "lopsim/permanent.hpp"

namespace lopsim {

/// Occupation numbers, one entry per mode.
using FockState = std::vector<int>;

inline int total_photons(const FockState& s) {
  return std::accumulate(s.begin(), s.end(), 0);
}

/// Default resource caps. Evolution refuses larger jobs instead of
/// degrading; callers may raise the photon cap explicitly.
inline constexpr int kDefaultPhotonCap = 7;
inline constexpr std::uint64_t kMaxFockStates = 10'000'000;

inline std::uint64_t fock_dimension(int modes, int photons) {
  // C(photons + modes - 1, photons), with an overflow-safe running product
  std::uint64_t result = 1;
  for (int i = 1; i <= photons; ++i) {
    result = result * static_cast<std::uint64_t>(modes - 1 + i) /
             static_cast<std::uint64_t>(i);
    if (result > kMaxFockStates)
      throw std::length_error("fock_dimension: state space exceeds cap");
  }
  return result;
}

/// All occupation vectors of `photons` photons in `modes` modes, first mode
/// counting down from `photons` to 0 (so (2,0) precedes (1,1) precedes
/// (0,2)). Deterministic.
inline std::vector<FockState> enumerate_fock(int modes, int photons) {
  if (modes < 1) throw std::invalid_argument("enumerate_fock: modes >= 1");
  if (photons < 0) throw std::invalid_argument("enumerate_fock: photons >= 0");
  fock_dimension(modes, photons);  // cap guard
  std::vector<FockState> out;
  FockState current(modes, 0);
  auto rec = [&](auto&& self, int mode, int remaining) -> void {
    if (mode == modes - 1) {
      current[mode] = remaining;
      out.push_back(current);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      current[mode] = k;
      self(self, mode + 1, remaining - k);
    }
  };
  rec(rec, 0, photons);
  return out;
}

/// Superposition of Fock states with fixed mode count and photon number.
struct StateVector {
  std::map<FockState, Complex> terms;

  double norm_squared() const {
    double n = 0.0;
    for (const auto& [state, amp] : terms) n += std::norm(amp);
    return n;
  }

  bool is_normalized(double tol = 1e-9) const {
    return std::abs(norm_squared() - 1.0) <= tol;
  }

  int modes() const {
    return terms.empty() ? 0 : static_cast<int>(terms.begin()->first.size());
  }

  int photons() const {
    return terms.empty() ? 0 : total_photons(terms.begin()->first);
  }

  void add(const FockState& state, Complex amp) {
    if (!terms.empty()) {
      if (static_cast<int>(state.size()) != modes())
        throw std::invalid_argument("StateVector: mode count mismatch");
      if (total_photons(state) != photons())
        throw std::invalid_argument("StateVector: photon number mismatch");
    }
    terms[state] += amp;
  }

  Complex amplitude(const FockState& state) const {
    auto it = terms.find(state);
    return it == terms.end() ? Complex{} : it->second;
  }
};

namespace detail {

inline double occupation_normalization(const FockState& s) {
  double f = 1.0;
  for (int c : s)
    for (int i = 2; i <= c; ++i) f *= i;
  return f;
}

/// Amplitude rule without the unitarity precheck. `inv` is the inverse
/// (adjoint) of the network matrix: the creation operator of input mode j
/// picks up output mode k with weight inv(j, k), so the multi-photon
/// amplitude is the permanent of inv with row j repeated s_j times and
/// column k repeated t_k times, normalized by sqrt(prod s! prod t!).
inline Complex transition_amplitude_prechecked(const ComplexMatrix& inv,
                                               const FockState& input,
                                               const FockState& output) {
  if (total_photons(input) != total_photons(output)) return Complex{};
  if (total_photons(input) == 0) return Complex{1.0, 0.0};
  IndexSelection sel;
  for (std::size_t j = 0; j < input.size(); ++j)
    for (int c = 0; c < input[j]; ++c) sel.rows.push_back(j + 1);
  for (std::size_t k = 0; k < output.size(); ++k)
    for (int c = 0; c < output[k]; ++c) sel.cols.push_back(k + 1);
  const Complex p = permanent_with_multiplicity(inv, sel);
  return p / std::sqrt(occupation_normalization(input) *
                       occupation_normalization(output));
}

}  // namespace detail

/// Amplitude of observing `output` when `input` is sent through the
/// network described by unitary u.
inline Complex transition_amplitude(const ComplexMatrix& u,
                                    const FockState& input,
                                    const FockState& output) {
  if (!is_unitary(u, 1e-10))
    throw std::logic_error("transition_amplitude: matrix is not unitary");
  if (input.size() != u.rows() || output.size() != u.rows())
    throw std::invalid_argument("transition_amplitude: mode count mismatch");
  return detail::transition_amplitude_prechecked(adjoint(u), input, output);
}

/// Full output state over every Fock configuration with the input's photon
/// number. Norm is preserved to ~1e-12; amplitudes are exact permanents,
/// no truncation.
inline StateVector evolve(const ComplexMatrix& u, const StateVector& state,
                          int photon_cap = kDefaultPhotonCap) {
  if (state.terms.empty()) return state;
  if (!is_unitary(u, 1e-10))
    throw std::logic_error("evolve: matrix is not unitary");
  const int m = state.modes();
  if (static_cast<std::size_t>(m) != u.rows())
    throw std::invalid_argument("evolve: mode count mismatch");
  const int n = state.photons();
  if (n > photon_cap)
    throw std::length_error("evolve: photon number exceeds cap");
  const ComplexMatrix inv = adjoint(u);
  const std::vector<FockState> basis = enumerate_fock(m, n);
  std::vector<Complex> out(basis.size());
  parallel_for(basis.size(), [&](std::size_t i) {
    Complex acc{};
    for (const auto& [in_state, amp] : state.terms)
      acc += amp * detail::transition_amplitude_prechecked(inv, in_state,
                                                           basis[i]);
    out[i] = acc;
  });
  StateVector result;
  for (std::size_t i = 0; i < basis.size(); ++i)
    result.terms.emplace(basis[i], out[i]);
  return result;
}

}  // namespace lopsim
