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

#include "lopsim/permanent.hpp"

#include <gtest/gtest.h>

#include "lopsim/gates.hpp"
#include "reference_data.hpp"

namespace lopsim {
namespace {

TEST(PermanentTest, IdentityDiagonalOnly) {
  EXPECT_EQ(permanent(ComplexMatrix::identity(3)), Complex(1.0, 0.0));
}

TEST(PermanentTest, OneByOneIsTheEntry) {
  EXPECT_EQ(permanent(ComplexMatrix(1, 1, {0.5})), Complex(0.5, 0.0));
}

TEST(PermanentTest, RejectsNonSquare) {
  EXPECT_THROW(permanent(ComplexMatrix(2, 3)), std::invalid_argument);
}

TEST(PermanentTest, CentralBlockOfCzNetwork) {
  // The three coupled modes of the five-mode controlled-Z construction:
  // the full-block permanent is minus the success amplitude.
  const ComplexMatrix u = build_network(cz_network(kCzSettingsCoarse));
  ComplexMatrix block(3, 3);
  const std::array<int, 3> sel{1, 2, 4};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) block(i, j) = u(sel[i], sel[j]);
  EXPECT_NEAR(permanent(block).real(), -0.3904, 1e-3);
  EXPECT_NEAR(permanent(block).imag(), 0.0, 1e-12);
}

TEST(PermanentTest, RyserMatchesNaiveExpansion) {
  auto eng = make_engine(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(eng() % 7);
    const ComplexMatrix m = testdata::random_complex_matrix(eng, n);
    const Complex a = permanent(m);
    const Complex b = permanent_naive(m);
    EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(b)))
        << "n=" << n << " trial=" << trial;
  }
}

TEST(PermanentTest, SixBySixAgainstOracle) {
  auto eng = make_engine(22);
  const ComplexMatrix m = testdata::random_complex_matrix(eng, 6);
  const Complex a = permanent(m);
  const Complex b = permanent_naive(m);
  EXPECT_LE(std::abs(a - b), 1e-12 * std::abs(b));
}

TEST(PermanentTest, InvariantUnderRowAndColumnPermutations) {
  auto eng = make_engine(23);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix m = testdata::random_complex_matrix(eng, 5);
    std::array<std::size_t, 5> rp{0, 1, 2, 3, 4}, cp{0, 1, 2, 3, 4};
    for (int i = 4; i > 0; --i) {
      std::swap(rp[i], rp[eng() % (i + 1)]);
      std::swap(cp[i], cp[eng() % (i + 1)]);
    }
    ComplexMatrix p(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) p(i, j) = m(rp[i], cp[j]);
    EXPECT_LE(std::abs(permanent(p) - permanent(m)),
              1e-12 * std::max(1.0, std::abs(permanent(m))));
  }
}

TEST(PermanentTest, MultilinearInRows) {
  auto eng = make_engine(24);
  for (int trial = 0; trial < 50; ++trial) {
    ComplexMatrix m = testdata::random_complex_matrix(eng, 4);
    const Complex base = permanent(m);
    const std::size_t row = eng() % 4;
    const Complex c(uniform_in(eng, -2.0, 2.0), uniform_in(eng, -2.0, 2.0));
    for (int j = 0; j < 4; ++j) m(row, j) *= c;
    EXPECT_LE(std::abs(permanent(m) - c * base),
              1e-12 * std::max(1.0, std::abs(c * base)));
  }
}

TEST(PermanentTest, ZeroRowGivesZero) {
  auto eng = make_engine(25);
  ComplexMatrix m = testdata::random_complex_matrix(eng, 4);
  for (int j = 0; j < 4; ++j) m(2, j) = Complex{};
  EXPECT_EQ(permanent(m), Complex{});
}

TEST(PermanentWithMultiplicityTest, RepeatedIdentityRows) {
  // I2 with row/col 1 doubled expands to the all-ones 2x2 matrix.
  const ComplexMatrix m = ComplexMatrix::identity(2);
  EXPECT_EQ(permanent_with_multiplicity(m, {{1, 1}, {1, 1}}),
            Complex(2.0, 0.0));
}

TEST(PermanentWithMultiplicityTest, MultiplicityOneIsPlainPermanent) {
  auto eng = make_engine(26);
  const ComplexMatrix m = testdata::random_complex_matrix(eng, 2);
  EXPECT_EQ(permanent_with_multiplicity(m, {{1, 2}, {1, 2}}), permanent(m));
}

TEST(PermanentWithMultiplicityTest, PlainSubmatrixSelection) {
  auto eng = make_engine(27);
  const ComplexMatrix m = testdata::random_complex_matrix(eng, 5);
  ComplexMatrix sub(2, 2);
  sub(0, 0) = m(0, 2);
  sub(0, 1) = m(0, 4);
  sub(1, 0) = m(3, 2);
  sub(1, 1) = m(3, 4);
  EXPECT_EQ(permanent_with_multiplicity(m, {{1, 4}, {3, 5}}), permanent(sub));
}

TEST(PermanentWithMultiplicityTest, TwoAuxiliaryPhotonAmplitude) {
  // Second tower row: with two photons in the auxiliary rail, the
  // all-zeros amplitude (aux row/column doubled, normalized by 2!) is the
  // tabulated 0.3101.
  const auto& row = kAuxTowerCoarse[1];
  NetworkSpec spec(3);
  detail::append_cz_core(spec, 1, {row[0], row[1], row[2]});
  const ComplexMatrix v = adjoint(build_network(spec));
  const Complex a = permanent_with_multiplicity(v, {{2, 2}, {2, 2}}) / 2.0;
  EXPECT_NEAR(a.real(), 0.3101, 1e-3);
  EXPECT_NEAR(a.imag(), 0.0, 1e-12);
}

TEST(PermanentWithMultiplicityTest, ErrorPaths) {
  const ComplexMatrix m = ComplexMatrix::identity(3);
  EXPECT_THROW(permanent_with_multiplicity(m, {{1, 2}, {1}}),
               std::invalid_argument);
  EXPECT_THROW(permanent_with_multiplicity(m, {{0, 1}, {1, 2}}),
               std::invalid_argument);
  EXPECT_THROW(permanent_with_multiplicity(m, {{1, 4}, {1, 2}}),
               std::invalid_argument);
}

}  // namespace
}  // namespace lopsim
