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
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lopsim/matrix.hpp"

namespace lopsim {

/// Tunable 2x2 beam splitter realized by a Mach-Zehnder interferometer,
/// in the canonical real form (global phase dropped):
///
///   [[e^{i phi} t,        sqrt(1 - t^2)],
///    [e^{i phi} sqrt(1-t^2),        -t ]]
///
/// Negative t transmits with ratio t^2 and adds a pi shift between the
/// transmitted and reflected amplitudes.
struct MziSetting {
  double t = 1.0;
  double phi = 0.0;
};

/// MZI as built: two balanced splitters around an internal phase pair
/// (theta1, theta2), preceded by an input phase pair (phi1, phi2). Carries
/// the physical global phase, unlike MziSetting.
struct HardwareMziSetting {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
};

/// Lossless beam splitter [[t, ir], [ir, t]] with t^2 + r^2 = 1.
struct BeamSplitterSetting {
  double t = 1.0;
  double r = 0.0;
};

/// Mode crossing; shorthand for MziSetting{0, 0}.
struct SwapSetting {};

using ElementSetting =
    std::variant<MziSetting, SwapSetting, HardwareMziSetting, BeamSplitterSetting>;

/// One placed 2x2 element coupling adjacent modes (mode, mode + 1),
/// 1-based.
struct NetworkElement {
  int mode = 1;
  ElementSetting setting;
};

/// Planar interferometer: ordered 2x2 elements over m modes. The element
/// list is in physical propagation order -- the first element is applied
/// first, i.e. it is the rightmost factor of the matrix product.
struct NetworkSpec {
  int modes = 0;
  std::vector<NetworkElement> elements;

  NetworkSpec() = default;
  explicit NetworkSpec(int m) : modes(m) {
    if (m < 1) throw std::invalid_argument("NetworkSpec: modes >= 1");
  }

  NetworkSpec& add(int mode, ElementSetting setting) {
    if (mode < 1 || mode >= modes)
      throw std::invalid_argument("NetworkSpec: element mode out of range");
    elements.push_back({mode, std::move(setting)});
    return *this;
  }
  NetworkSpec& add_mzi(int mode, double t, double phi = 0.0) {
    return add(mode, MziSetting{t, phi});
  }
  NetworkSpec& add_swap(int mode) { return add(mode, SwapSetting{}); }
};

inline ComplexMatrix mzi_unitary(const MziSetting& s) {
  if (std::abs(s.t) > 1.0)
    throw std::domain_error("mzi_unitary: |t| must be <= 1");
  const double r = std::sqrt(std::max(0.0, 1.0 - s.t * s.t));
  const Complex e = std::polar(1.0, s.phi);
  ComplexMatrix u(2, 2);
  u(0, 0) = e * s.t;
  u(0, 1) = r;
  u(1, 0) = e * r;
  u(1, 1) = -s.t;
  return u;
}

/// Full hardware matrix including the global phase
/// i e^{i(theta1 + theta2 + 2 phi2)/2}; agrees with mzi_unitary of the
/// equivalent setting (t = sin((theta1-theta2)/2), phi = phi1-phi2) up to
/// that scalar.
inline ComplexMatrix hardware_mzi_unitary(const HardwareMziSetting& s) {
  const double half = (s.theta1 - s.theta2) / 2.0;
  const double t = std::sin(half);
  const double c = std::cos(half);
  const Complex pref =
      Complex(0.0, 1.0) *
      std::polar(1.0, (s.theta1 + s.theta2 + 2.0 * s.phi2) / 2.0);
  const Complex e = std::polar(1.0, s.phi1 - s.phi2);
  ComplexMatrix u(2, 2);
  u(0, 0) = pref * e * t;
  u(0, 1) = pref * c;
  u(1, 0) = pref * e * c;
  u(1, 1) = pref * -t;
  return u;
}

/// Canonical-form setting whose mzi_unitary is the hardware matrix up to a
/// unit scalar. For |theta1 - theta2| <= pi this is plainly
/// t = sin((theta1 - theta2)/2); past that the canonical form's
/// non-negative reflectance forces the sign of t to fold into the scalar.
inline MziSetting equivalent_mzi(const HardwareMziSetting& s) {
  const double half = (s.theta1 - s.theta2) / 2.0;
  const double t = std::cos(half) >= 0.0 ? std::sin(half) : -std::sin(half);
  return {t, s.phi1 - s.phi2};
}

inline ComplexMatrix beamsplitter_unitary(double t, double r) {
  if (std::abs(t * t + r * r - 1.0) > 1e-12)
    throw std::domain_error(
        "beamsplitter_unitary: t^2 + r^2 != 1 (loss is not modeled)");
  ComplexMatrix u(2, 2);
  u(0, 0) = t;
  u(0, 1) = Complex(0.0, r);
  u(1, 0) = Complex(0.0, r);
  u(1, 1) = t;
  return u;
}

inline ComplexMatrix element_unitary(const ElementSetting& setting) {
  return std::visit(
      [](const auto& s) -> ComplexMatrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MziSetting>) return mzi_unitary(s);
        if constexpr (std::is_same_v<T, SwapSetting>)
          return mzi_unitary(MziSetting{0.0, 0.0});
        if constexpr (std::is_same_v<T, HardwareMziSetting>)
          return hardware_mzi_unitary(s);
        if constexpr (std::is_same_v<T, BeamSplitterSetting>)
          return beamsplitter_unitary(s.t, s.r);
      },
      setting);
}

/// Identity everywhere except the 2x2 block at rows/cols (i, i+1), 1-based.
inline ComplexMatrix embed(const ComplexMatrix& u2, int i, int m) {
  if (u2.rows() != 2 || u2.cols() != 2)
    throw std::invalid_argument("embed: element must be 2x2");
  if (i < 1 || i >= m) throw std::invalid_argument("embed: index out of range");
  ComplexMatrix u = ComplexMatrix::identity(m);
  u(i - 1, i - 1) = u2(0, 0);
  u(i - 1, i) = u2(0, 1);
  u(i, i - 1) = u2(1, 0);
  u(i, i) = u2(1, 1);
  return u;
}

/// Ordered product of the embedded elements. List order is application
/// order, so each new element multiplies from the left.
inline ComplexMatrix build_network(const NetworkSpec& spec) {
  ComplexMatrix u = ComplexMatrix::identity(spec.modes);
  for (const NetworkElement& e : spec.elements)
    u = matmul(embed(element_unitary(e.setting), e.mode, spec.modes), u);
  return u;
}

/// Rectangular scheme skeleton: m layers of crossings on alternating
/// diagonals, starting with the (2,3),(4,5),... diagonal; m(m-1)/2 MZI
/// placeholders (t=1, phi=0) in application order. Placed on the central
/// block of a larger mesh this matches the eight-mode constructions used
/// by the three-qubit gates.
inline NetworkSpec clements_layout(int m) {
  if (m < 2) throw std::invalid_argument("clements_layout: m >= 2");
  NetworkSpec spec(m);
  for (int layer = 0; layer < m; ++layer) {
    const int start = (layer % 2 == 0) ? 2 : 1;
    for (int i = start; i + 1 <= m; i += 2) spec.add_mzi(i, 1.0, 0.0);
  }
  return spec;
}

/// Triangular scheme skeleton: diagonals of MZIs walking up from the
/// bottom pair; diagonal d covers pairs (m-1, m) down to (d, d+1).
inline NetworkSpec reck_layout(int m) {
  if (m < 2) throw std::invalid_argument("reck_layout: m >= 2");
  NetworkSpec spec(m);
  for (int d = 1; d <= m - 1; ++d)
    for (int i = m - 1; i >= d; --i) spec.add_mzi(i, 1.0, 0.0);
  return spec;
}

enum class Arm { Upper, Lower };

/// Phase-shifter setting that realizes transmittance t = sin(Theta/2) on
/// hardware where tuning only adds phase. Returns the driven value of
/// theta1 (upper arm) or theta2 (lower arm); the other arm stays at its
/// zero-voltage phase. Branches that add 2*pi flip the sign of the
/// canonical-form t but realize the identical hardware unitary, which is
/// 2*pi-periodic in each phase.
inline double phase_solve(double target_theta, double theta1_zero,
                          double theta2_zero, Arm arm) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (target_theta <= -two_pi || target_theta >= two_pi)
    throw std::domain_error("phase_solve: Theta must lie in (-2*pi, 2*pi)");
  if (arm == Arm::Upper)
    return target_theta >= 0.0 ? theta2_zero + target_theta
                               : theta2_zero + two_pi + target_theta;
  return target_theta >= 0.0 ? theta1_zero + two_pi - target_theta
                             : theta1_zero - target_theta;
}

}  // namespace lopsim
