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

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lopsim/fock.hpp"
#include "lopsim/matrix.hpp"
#include "lopsim/mesh.hpp"
#include "lopsim/rng.hpp"

namespace lopsim {

// ---------------------------------------------------------------------------
// Qubit structure: dual-rail pairs with auxiliary rails interleaved.
// ---------------------------------------------------------------------------

/// Mode assignment for n dual-rail qubits with an auxiliary rail between
/// neighbouring pairs. Qubit j occupies rails (w0, w1); each auxiliary rail
/// carries aux_photons photons. The standard interleaved assignment over
/// 3n-1 modes is (w0^0, w1^0, wA^1, w0^1, w1^1, wA^2, ...).
struct QubitLayout {
  int n_qubits = 0;
  int aux_photons = 1;
  int modes = 0;
  std::vector<std::array<int, 2>> qubit_modes;  // 0-based (w0, w1) per qubit
  std::vector<int> aux_modes;                   // 0-based

  static QubitLayout regular(int n, int aux_photons = 1) {
    if (n < 1) throw std::invalid_argument("QubitLayout: n >= 1");
    if (aux_photons < 1)
      throw std::invalid_argument("QubitLayout: aux photon count >= 1");
    QubitLayout l;
    l.n_qubits = n;
    l.aux_photons = aux_photons;
    l.modes = 3 * n - 1;
    for (int j = 0; j < n; ++j) l.qubit_modes.push_back({3 * j, 3 * j + 1});
    for (int j = 0; j + 1 < n; ++j) l.aux_modes.push_back(3 * j + 2);
    return l;
  }

  int photons() const {
    return n_qubits + aux_photons * static_cast<int>(aux_modes.size());
  }

  /// Occupation vector for computational basis bits (qubit 0 first).
  FockState basis_occupation(std::uint32_t bits) const {
    FockState occ(modes, 0);
    for (int j = 0; j < n_qubits; ++j) {
      const int b = (bits >> (n_qubits - 1 - j)) & 1u;
      occ[qubit_modes[j][b]] = 1;
    }
    for (int a : aux_modes) occ[a] = aux_photons;
    return occ;
  }
};

inline std::string bits_to_string(std::uint32_t bits, int n) {
  std::string s(n, '0');
  for (int j = 0; j < n; ++j)
    if ((bits >> (n - 1 - j)) & 1u) s[j] = '1';
  return s;
}

/// Product register: per-qubit amplitude pairs (alpha, beta), each
/// normalized.
struct QubitRegister {
  std::vector<std::array<Complex, 2>> qubits;

  static QubitRegister basis(std::uint32_t bits, int n) {
    QubitRegister r;
    for (int j = 0; j < n; ++j) {
      const int b = (bits >> (n - 1 - j)) & 1u;
      r.qubits.push_back(b ? std::array<Complex, 2>{Complex{}, Complex{1.0}}
                           : std::array<Complex, 2>{Complex{1.0}, Complex{}});
    }
    return r;
  }

  void validate() const {
    for (const auto& q : qubits)
      if (std::abs(std::norm(q[0]) + std::norm(q[1]) - 1.0) > 1e-12)
        throw std::invalid_argument("QubitRegister: qubit not normalized");
  }

  /// Coefficient of the computational basis string.
  Complex coefficient(std::uint32_t bits) const {
    Complex c{1.0, 0.0};
    const int n = static_cast<int>(qubits.size());
    for (int j = 0; j < n; ++j) c *= qubits[j][(bits >> (n - 1 - j)) & 1u];
    return c;
  }
};

/// Path-encoded product state: each qubit contributes one photon across its
/// rail pair, each auxiliary rail carries its photons.
inline StateVector encode(const QubitRegister& reg, const QubitLayout& layout) {
  if (static_cast<int>(reg.qubits.size()) != layout.n_qubits)
    throw std::invalid_argument("encode: register size != layout qubits");
  reg.validate();
  StateVector sv;
  const std::uint32_t count = 1u << layout.n_qubits;
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    const Complex c = reg.coefficient(bits);
    if (c != Complex{}) sv.add(layout.basis_occupation(bits), c);
  }
  return sv;
}

// ---------------------------------------------------------------------------
// Post-selection.
// ---------------------------------------------------------------------------

/// Structure-preserving part of an output state: one photon somewhere in
/// each rail pair, aux_photons in each auxiliary rail. Everything else is
/// discarded probability.
struct PostSelectionResult {
  std::map<std::string, Complex> logical_amplitudes;
  Complex success_amplitude;  // largest-magnitude surviving amplitude
  double success_probability = 0.0;
  double discarded_probability = 0.0;
};

inline PostSelectionResult postselect(const StateVector& out,
                                      const QubitLayout& layout) {
  if (!out.terms.empty() && out.modes() != layout.modes)
    throw std::invalid_argument("postselect: state mode count != layout");
  PostSelectionResult res;
  const std::uint32_t count = 1u << layout.n_qubits;
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    const Complex a = out.amplitude(layout.basis_occupation(bits));
    res.logical_amplitudes[bits_to_string(bits, layout.n_qubits)] = a;
    res.success_probability += std::norm(a);
    if (std::abs(a) > std::abs(res.success_amplitude))
      res.success_amplitude = a;
  }
  res.discarded_probability = 1.0 - res.success_probability;
  return res;
}

/// 2^n x 2^n matrix of structure-preserving transition amplitudes: column
/// `in`, row `out` holds the amplitude between the encoded basis states.
/// The post-selected action of the network is this operator applied to the
/// logical input coefficients; a working gate makes it proportional to a
/// unitary.
inline ComplexMatrix logical_operator(const ComplexMatrix& u,
                                      const QubitLayout& layout) {
  if (static_cast<int>(u.rows()) != layout.modes)
    throw std::invalid_argument("logical_operator: mode count mismatch");
  if (!is_unitary(u, 1e-10))
    throw std::logic_error("logical_operator: matrix is not unitary");
  const ComplexMatrix inv = adjoint(u);
  const std::uint32_t dim = 1u << layout.n_qubits;
  ComplexMatrix L(dim, dim);
  for (std::uint32_t in = 0; in < dim; ++in) {
    const FockState s = layout.basis_occupation(in);
    for (std::uint32_t out = 0; out < dim; ++out)
      L(out, in) = detail::transition_amplitude_prechecked(
          inv, s, layout.basis_occupation(out));
  }
  return L;
}

// ---------------------------------------------------------------------------
// Gate settings. Coarse values are the four-digit tabulated solutions of
// the permanent conditions and serve as solver seeds and golden-test
// inputs. The refined values were converged by the condition solver to
// residual < 1e-12 and are the defaults for every construction; the Reck
// vector is matched to the Clements block unitary so both schemes build
// the same matrix to machine precision.
// ---------------------------------------------------------------------------

inline constexpr std::array<double, 3> kCzSettingsCoarse{0.3686, -0.2192,
                                                         0.8686};
inline constexpr std::array<double, 3> kCzSettings{
    0.3686227457838128, -0.21922359359558466, 0.8686227457838127};

inline constexpr std::array<double, 10> kCczClementsSettingsCoarse{
    -0.7893, -0.9428, -0.3809, -0.3284, -0.2583,
    0.8719,  0.03792, 0.3689,  0.7943,  0.8559};
inline constexpr std::array<double, 10> kCczClementsSettings{
    -0.7893155652600169,  -0.9428149019178171, -0.3809262651998436,
    -0.3284100224362925,  -0.25829795690251994, 0.8718794033266254,
    0.03791119506240907,  0.3689256174947607,   0.794306158335603,
    0.8559088447702569};

inline constexpr std::array<double, 10> kCczReckSettingsCoarse{
    -0.9428, -0.3022, -0.1496, -0.2531, 0.9540,
    -0.3768, -0.09816, -0.9507, -0.5064, 0.8559};
inline constexpr std::array<double, 10> kCczReckSettings{
    -0.9428149019178171,  -0.30221829324237726, -0.1495883383794269,
    -0.2530933731354749,  0.9539473113777782,   -0.3767637378265623,
    -0.09816033914998902, -0.950707980793342,   -0.5063561327887943,
    0.855908844770257};

/// Success amplitudes of the refined settings (|A|^2 is the success
/// probability); the *Ref values are the four-digit tabulated ones used
/// as comparison targets.
inline constexpr double kCzAmplitude = 0.3903882032022077;
inline constexpr double kCczAmplitude = 0.16323480710415833;
inline constexpr double kCzAmplitudeRef = 0.3904;
inline constexpr double kCczAmplitudeRef = 0.163231;
inline constexpr double kCzSuccessRef = 0.15241;
inline constexpr double kCczSuccessRef = 0.02665;

/// Tower of three-mode solutions indexed by auxiliary photon count
/// k = 1..7: coarse four-digit (t1, t2, t3, A) rows, refined settings and
/// amplitudes.
inline constexpr int kAuxTowerMax = 7;
inline constexpr std::array<std::array<double, 4>, 7> kAuxTowerCoarse{{
    {0.3686, -0.2192, 0.8686, 0.3904},
    {0.3095, -0.1517, 0.7812, 0.3101},
    {0.2758, -0.1166, 0.7090, 0.2811},
    {0.2517, -0.09463, 0.6518, 0.2664},
    {0.2331, -0.07963, 0.6058, 0.2576},
    {0.2181, -0.06873, 0.5681, 0.2518},
    {0.2057, -0.06044, 0.5364, 0.2476},
}};
inline constexpr std::array<std::array<double, 4>, 7> kAuxTower{{
    {0.3686227457838128, -0.21922359359558466, 0.8686227457838127,
     0.3903882032022077},
    {0.30946607339892224, -0.15171478625592813, 0.7812471944419263,
     0.31013651820747434},
    {0.27583613107260835, -0.11655483852457937, 0.708983737561653,
     0.2811034764890657},
    {0.25174099928607485, -0.09462891413796753, 0.6517957574278631,
     0.26642167370802033},
    {0.23312979399559156, -0.07963025719433708, 0.6058332067298279,
     0.2576199718558221},
    {0.21814202195989027, -0.06872554038093678, 0.5680822405672663,
     0.2517722801000322},
    {0.20572276196492653, -0.06044192222968736, 0.5364490189257314,
     0.2476111004691905},
}};

// ---------------------------------------------------------------------------
// Gate constructions.
// ---------------------------------------------------------------------------

enum class Scheme { Clements, Reck };

inline const char* scheme_name(Scheme s) {
  return s == Scheme::Clements ? "clements" : "reck";
}

namespace detail {

/// Three-MZI core on modes (lo, lo+1, lo+2): pairs (lo,lo+1), (lo+1,lo+2),
/// (lo,lo+1) in application order.
inline void append_cz_core(NetworkSpec& spec, int lo,
                           const std::array<double, 3>& t) {
  spec.add_mzi(lo, t[0]);
  spec.add_mzi(lo + 1, t[1]);
  spec.add_mzi(lo, t[2]);
}

/// Ten-MZI core on the five modes starting at lo, parameters in
/// application order.
inline void append_ccz_core(NetworkSpec& spec, int lo, Scheme scheme,
                            const std::array<double, 10>& t) {
  if (scheme == Scheme::Clements) {
    static constexpr std::array<int, 10> offs{1, 3, 0, 2, 1, 3, 0, 2, 1, 3};
    for (int i = 0; i < 10; ++i) spec.add_mzi(lo + offs[i], t[i]);
  } else {
    static constexpr std::array<int, 10> offs{3, 2, 1, 0, 3, 2, 1, 3, 2, 3};
    for (int i = 0; i < 10; ++i) spec.add_mzi(lo + offs[i], t[i]);
  }
}

inline void append_cz_block(NetworkSpec& spec, int lo,
                            const std::array<double, 3>& t) {
  spec.add_swap(lo + 3);
  append_cz_core(spec, lo + 1, t);
  spec.add_swap(lo + 3);
}

inline void append_ccz_block(NetworkSpec& spec, int lo, Scheme scheme,
                             const std::array<double, 10>& t) {
  spec.add_swap(lo + 2);
  spec.add_swap(lo + 1);
  spec.add_swap(lo + 6);
  append_ccz_core(spec, lo + 2, scheme, t);
  spec.add_swap(lo + 6);
  spec.add_swap(lo + 1);
  spec.add_swap(lo + 2);
}

}  // namespace detail

/// Controlled-Z on two interleaved dual-rail qubits (five modes): the
/// three-MZI core on (w1^0, wA, w1^1) conjugated by the (4,5) crossing
/// that restores the interleaved rail order.
inline NetworkSpec cz_network(const std::array<double, 3>& t = kCzSettings) {
  NetworkSpec spec(5);
  detail::append_cz_block(spec, 1, t);
  return spec;
}

/// CNOT with control q0, target q1: the CZ core dressed by balanced MZIs
/// on the target rails and a (1, 0) element on the control rails.
inline NetworkSpec cnot_network(const std::array<double, 3>& t = kCzSettings) {
  NetworkSpec spec(5);
  spec.add_mzi(4, 1.0 / std::numbers::sqrt2);
  detail::append_cz_core(spec, 2, t);
  spec.add_mzi(4, 1.0 / std::numbers::sqrt2);
  spec.add_mzi(1, 1.0);
  return spec;
}

/// Controlled-controlled-Z on three interleaved qubits (eight modes); both
/// schemes build the same unitary with the refined settings.
inline NetworkSpec ccz_network(Scheme scheme) {
  NetworkSpec spec(8);
  detail::append_ccz_block(spec, 1, scheme,
                           scheme == Scheme::Clements ? kCczClementsSettings
                                                      : kCczReckSettings);
  return spec;
}

inline NetworkSpec ccz_network(Scheme scheme, const std::array<double, 10>& t) {
  NetworkSpec spec(8);
  detail::append_ccz_block(spec, 1, scheme, t);
  return spec;
}

/// Toffoli with controls q0, q1 and target q2: the full CCZ block dressed
/// by balanced MZIs on the target rails (modes 7, 8). Dressing the inner
/// swap-less core instead leaves a residual controlled sign between the
/// two control qubits, so the outer embedding is the one that realizes the
/// textbook truth table.
inline NetworkSpec toffoli_network(Scheme scheme) {
  NetworkSpec spec(8);
  spec.add_mzi(7, 1.0 / std::numbers::sqrt2);
  detail::append_ccz_block(spec, 1, scheme,
                           scheme == Scheme::Clements ? kCczClementsSettings
                                                      : kCczReckSettings);
  spec.add_mzi(7, 1.0 / std::numbers::sqrt2);
  return spec;
}

/// Two CZ blocks sharing the middle qubit: q0-q1 then q1-q2 on the
/// three-qubit interleaved layout (eight modes).
inline NetworkSpec cascaded_cz_network() {
  NetworkSpec spec(8);
  detail::append_cz_block(spec, 1, kCzSettings);
  detail::append_cz_block(spec, 4, kCzSettings);
  return spec;
}

/// Two CCZ blocks sharing the middle qubit: (q0,q1,q2) then (q2,q3,q4) on
/// the five-qubit interleaved layout (fourteen modes).
inline NetworkSpec cascaded_ccz_network(Scheme scheme = Scheme::Clements) {
  NetworkSpec spec(14);
  const auto& t = scheme == Scheme::Clements ? kCczClementsSettings
                                             : kCczReckSettings;
  detail::append_ccz_block(spec, 1, scheme, t);
  detail::append_ccz_block(spec, 7, scheme, t);
  return spec;
}

// ---------------------------------------------------------------------------
// Ideal gates (computational-basis action; qubit 0 is the leftmost bit).
// ---------------------------------------------------------------------------

enum class GateName { Z, X, CZ, CNOT, CCZ, Toffoli };

struct IdealGate {
  GateName name;
  int n_qubits;
  ComplexMatrix unitary;
};

inline IdealGate ideal_gate(GateName name) {
  switch (name) {
    case GateName::Z:
      return {name, 1, ComplexMatrix(2, 2, {1, 0, 0, -1})};
    case GateName::X:
      return {name, 1, ComplexMatrix(2, 2, {0, 1, 1, 0})};
    case GateName::CZ: {
      ComplexMatrix u = ComplexMatrix::identity(4);
      u(3, 3) = -1.0;
      return {name, 2, u};
    }
    case GateName::CNOT: {
      ComplexMatrix u = ComplexMatrix::identity(4);
      u(2, 2) = u(3, 3) = 0.0;
      u(2, 3) = u(3, 2) = 1.0;
      return {name, 2, u};
    }
    case GateName::CCZ: {
      ComplexMatrix u = ComplexMatrix::identity(8);
      u(7, 7) = -1.0;
      return {name, 3, u};
    }
    case GateName::Toffoli: {
      ComplexMatrix u = ComplexMatrix::identity(8);
      u(6, 6) = u(7, 7) = 0.0;
      u(6, 7) = u(7, 6) = 1.0;
      return {name, 3, u};
    }
  }
  throw std::invalid_argument("ideal_gate: unknown gate");
}

inline IdealGate ideal_gate(const std::string& name) {
  if (name == "z") return ideal_gate(GateName::Z);
  if (name == "x") return ideal_gate(GateName::X);
  if (name == "cz") return ideal_gate(GateName::CZ);
  if (name == "cnot") return ideal_gate(GateName::CNOT);
  if (name == "ccz") return ideal_gate(GateName::CCZ);
  if (name == "toffoli") return ideal_gate(GateName::Toffoli);
  throw std::invalid_argument("ideal_gate: unknown gate " + name);
}

// ---------------------------------------------------------------------------
// Verification: fidelity over random product inputs, truth tables,
// cascading checks.
// ---------------------------------------------------------------------------

struct FidelityReport {
  double min_fidelity = 1.0;
  double max_fidelity = 0.0;
  double p_succ_min = 1.0;
  double p_succ_max = 0.0;
  int zero_success_inputs = 0;
};

/// Post-selected fidelity against an ideal gate over `trials` random
/// product states (per-qubit Bloch-uniform, engine derived from seed and
/// trial index). Fidelity is |<ideal out | post-selected out>|^2 on the
/// normalized post-selected state, i.e. modulo global phase. Inputs with
/// zero success probability are counted, not thrown.
inline FidelityReport gate_fidelity(const NetworkSpec& spec,
                                    const QubitLayout& layout,
                                    const IdealGate& ideal, int trials,
                                    std::uint64_t seed) {
  if (static_cast<int>(spec.modes) != layout.modes)
    throw std::invalid_argument("gate_fidelity: spec modes != layout modes");
  if (ideal.n_qubits != layout.n_qubits)
    throw std::invalid_argument("gate_fidelity: qubit count mismatch");
  if (trials < 1) throw std::invalid_argument("gate_fidelity: trials >= 1");
  const ComplexMatrix L = logical_operator(build_network(spec), layout);
  const std::uint32_t dim = 1u << layout.n_qubits;
  FidelityReport rep;
  for (int trial = 0; trial < trials; ++trial) {
    auto eng = make_engine(seed, static_cast<std::uint64_t>(trial));
    QubitRegister reg;
    for (int q = 0; q < layout.n_qubits; ++q) {
      auto [alpha, beta] = random_bloch_qubit(eng);
      reg.qubits.push_back({alpha, beta});
    }
    std::vector<Complex> psi(dim);
    for (std::uint32_t b = 0; b < dim; ++b) psi[b] = reg.coefficient(b);
    std::vector<Complex> out(dim), want(dim);
    for (std::uint32_t r = 0; r < dim; ++r) {
      Complex o{}, w{};
      for (std::uint32_t c = 0; c < dim; ++c) {
        o += L(r, c) * psi[c];
        w += ideal.unitary(r, c) * psi[c];
      }
      out[r] = o;
      want[r] = w;
    }
    double p = 0.0;
    Complex overlap{};
    for (std::uint32_t r = 0; r < dim; ++r) {
      p += std::norm(out[r]);
      overlap += std::conj(want[r]) * out[r];
    }
    if (p < 1e-30) {
      ++rep.zero_success_inputs;
      continue;
    }
    const double fid = std::norm(overlap) / p;
    rep.min_fidelity = std::min(rep.min_fidelity, fid);
    rep.max_fidelity = std::max(rep.max_fidelity, fid);
    rep.p_succ_min = std::min(rep.p_succ_min, p);
    rep.p_succ_max = std::max(rep.p_succ_max, p);
  }
  return rep;
}

struct CascadeRow {
  std::string bits;
  Complex amplitude;
  int expected_sign = 1;
  double column_leakage = 0.0;  // largest off-diagonal amplitude magnitude
};

struct CascadeReport {
  std::vector<CascadeRow> rows;
  double expected_magnitude = 0.0;
  double max_magnitude_error = 0.0;
  double max_leakage = 0.0;
  bool signs_match = true;
  double success_probability = 0.0;  // per basis input
};

namespace detail {

template <typename SignFn>
CascadeReport cascade_report(const NetworkSpec& spec, const QubitLayout& layout,
                             double magnitude, SignFn&& sign_of) {
  const ComplexMatrix L = logical_operator(build_network(spec), layout);
  const std::uint32_t dim = 1u << layout.n_qubits;
  CascadeReport rep;
  rep.expected_magnitude = magnitude;
  for (std::uint32_t b = 0; b < dim; ++b) {
    CascadeRow row;
    row.bits = bits_to_string(b, layout.n_qubits);
    row.amplitude = L(b, b);
    row.expected_sign = sign_of(b);
    for (std::uint32_t r = 0; r < dim; ++r)
      if (r != b)
        row.column_leakage = std::max(row.column_leakage, std::abs(L(r, b)));
    rep.max_magnitude_error =
        std::max(rep.max_magnitude_error,
                 std::abs(std::abs(row.amplitude) - magnitude));
    rep.max_leakage = std::max(rep.max_leakage, row.column_leakage);
    if (row.expected_sign * row.amplitude.real() <= 0.0) rep.signs_match = false;
    rep.rows.push_back(std::move(row));
  }
  double p = 0.0;
  for (std::uint32_t r = 0; r < dim; ++r) p += std::norm(L(r, 0));
  rep.success_probability = p;
  return rep;
}

}  // namespace detail

/// Two shared-qubit CZ blocks: every basis string keeps magnitude
/// A_cz^2 and picks up sign (-1)^(j0 j1 + j1 j2).
inline CascadeReport cascade_cz() {
  return detail::cascade_report(
      cascaded_cz_network(), QubitLayout::regular(3),
      kCzAmplitude * kCzAmplitude, [](std::uint32_t b) {
        const int j0 = (b >> 2) & 1, j1 = (b >> 1) & 1, j2 = b & 1;
        return (j0 * j1 + j1 * j2) % 2 == 0 ? 1 : -1;
      });
}

/// Two shared-qubit CCZ blocks on five qubits (fourteen modes, seven
/// photons): sign (-1)^(j0 j1 j2 + j2 j3 j4), magnitude A_ccz^2.
inline CascadeReport cascade_ccz(Scheme scheme = Scheme::Clements) {
  return detail::cascade_report(
      cascaded_ccz_network(scheme), QubitLayout::regular(5),
      kCczAmplitude * kCczAmplitude, [](std::uint32_t b) {
        const int j0 = (b >> 4) & 1, j1 = (b >> 3) & 1, j2 = (b >> 2) & 1,
                  j3 = (b >> 1) & 1, j4 = b & 1;
        return (j0 * j1 * j2 + j2 * j3 * j4) % 2 == 0 ? 1 : -1;
      });
}

}  // namespace lopsim
