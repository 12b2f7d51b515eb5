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

#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lopsim/matrix.hpp"

namespace lopsim {

/// Largest matrix the permanent kernel accepts; Ryser is O(2^n * n).
inline constexpr std::size_t kMaxPermanentSize = 20;

/// Permanent via Ryser's formula with Gray-code updates of the row sums.
/// Summation order is the fixed Gray-code sequence, so results are
/// bit-identical across calls; no internal parallelism.
inline Complex permanent(const ComplexMatrix& m) {
  if (!m.is_square())
    throw std::invalid_argument("permanent: matrix must be square");
  const std::size_t n = m.rows();
  if (n > kMaxPermanentSize)
    throw std::invalid_argument("permanent: size exceeds supported maximum");
  std::vector<Complex> row_sums(n, Complex{});
  Complex total{};
  std::uint64_t gray = 0;
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < end; ++k) {
    const std::uint64_t next = k ^ (k >> 1);
    const std::uint64_t changed = next ^ gray;
    const std::size_t j =
        static_cast<std::size_t>(std::countr_zero(changed));
    if (next & changed) {
      for (std::size_t i = 0; i < n; ++i) row_sums[i] += m(i, j);
    } else {
      for (std::size_t i = 0; i < n; ++i) row_sums[i] -= m(i, j);
    }
    gray = next;
    Complex prod{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) prod *= row_sums[i];
    const bool negate = ((n - std::popcount(next)) & 1u) != 0;
    total += negate ? -prod : prod;
  }
  return total;
}

/// Reference expansion over all n! permutations. Test oracle only; keep
/// n small.
inline Complex permanent_naive(const ComplexMatrix& m) {
  if (!m.is_square())
    throw std::invalid_argument("permanent_naive: matrix must be square");
  const std::size_t n = m.rows();
  if (n > 10)
    throw std::invalid_argument("permanent_naive: n too large for n! sum");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Complex total{};
  do {
    Complex prod{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) prod *= m(i, perm[i]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Square submatrix selection with repeats. Indices are 1-based; repeating
/// an index repeats the corresponding row/column in the expanded matrix
/// (occupation numbers > 1 enter the amplitude rule this way).
struct IndexSelection {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

inline ComplexMatrix select_with_multiplicity(const ComplexMatrix& m,
                                              const IndexSelection& sel) {
  if (sel.rows.size() != sel.cols.size())
    throw std::invalid_argument(
        "IndexSelection: row and column lists must have equal length");
  if (sel.rows.empty())
    throw std::invalid_argument("IndexSelection: empty selection");
  for (std::size_t r : sel.rows)
    if (r < 1 || r > m.rows())
      throw std::invalid_argument("IndexSelection: row index out of bounds");
  for (std::size_t c : sel.cols)
    if (c < 1 || c > m.cols())
      throw std::invalid_argument(
          "IndexSelection: column index out of bounds");
  ComplexMatrix sub(sel.rows.size(), sel.cols.size());
  for (std::size_t i = 0; i < sel.rows.size(); ++i)
    for (std::size_t j = 0; j < sel.cols.size(); ++j)
      sub(i, j) = m(sel.rows[i] - 1, sel.cols[j] - 1);
  return sub;
}

inline Complex permanent_with_multiplicity(const ComplexMatrix& m,
                                           const IndexSelection& sel) {
  return permanent(select_with_multiplicity(m, sel));
}

}  // namespace lopsim
