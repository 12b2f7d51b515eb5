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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lopsim/gates.hpp"
#include "lopsim/matrix.hpp"
#include "lopsim/mesh.hpp"
#include "lopsim/parallel.hpp"
#include "lopsim/permanent.hpp"
#include "lopsim/rng.hpp"

namespace lopsim {

// ---------------------------------------------------------------------------
// Condition systems: the structure-preserving amplitudes of a gate block
// must all be equal, with the all-rails-occupied one flipped in sign.
// Expressed as sub-permanent residuals over the block transmittances
// (all phases fixed to zero, so the blocks are real orthogonal and the
// residuals real).
// ---------------------------------------------------------------------------

enum class ProblemKind { Cz, Ccz, Tower };

struct ConditionProblem {
  ProblemKind kind = ProblemKind::Cz;
  int aux_photons = 1;               // Tower
  Scheme scheme = Scheme::Clements;  // Ccz

  static ConditionProblem cz() { return {ProblemKind::Cz, 1, Scheme::Clements}; }
  static ConditionProblem ccz(Scheme s) { return {ProblemKind::Ccz, 1, s}; }
  static ConditionProblem tower(int k) {
    if (k < 1) throw std::invalid_argument("ConditionProblem: k >= 1");
    return {ProblemKind::Tower, k, Scheme::Clements};
  }

  int parameter_count() const { return kind == ProblemKind::Ccz ? 10 : 3; }
  int residual_count() const { return kind == ProblemKind::Ccz ? 7 : 3; }
  int block_modes() const { return kind == ProblemKind::Ccz ? 5 : 3; }

  const char* name() const {
    switch (kind) {
      case ProblemKind::Cz: return "cz";
      case ProblemKind::Ccz: return "ccz";
      case ProblemKind::Tower: return "tower";
    }
    return "?";
  }
};

namespace detail {

inline void check_domain(std::span<const double> t) {
  for (double v : t)
    if (std::abs(v) > 1.0)
      throw std::domain_error("condition system: |t| must be <= 1");
}

/// Row/column selections (1-based, within the block) of the eight equated
/// expressions for the five-mode system: auxiliary rails are block modes
/// 2 and 4, the |1> rails of the three qubits are 1, 3, 5. Per-expression
/// permanent term counts are the factorials of the selection sizes:
/// 2, 6, 6, 24, 6, 24, 24, 120.
inline const std::array<std::vector<std::size_t>, 8>& ccz_selections() {
  static const std::array<std::vector<std::size_t>, 8> sels = [] {
    std::array<std::vector<std::size_t>, 8> s{{{2, 4},
                                               {2, 4, 5},
                                               {2, 3, 4},
                                               {2, 3, 4, 5},
                                               {1, 2, 4},
                                               {1, 2, 4, 5},
                                               {1, 2, 3, 4},
                                               {1, 2, 3, 4, 5}}};
    static constexpr std::array<int, 8> expected_terms{2, 6, 6, 24, 6, 24, 24, 120};
    for (std::size_t i = 0; i < s.size(); ++i) {
      int fact = 1;
      for (std::size_t v = 2; v <= s[i].size(); ++v) fact *= static_cast<int>(v);
      if (fact != expected_terms[i])
        throw std::logic_error("ccz_selections: term-count table corrupt");
    }
    return s;
  }();
  return sels;
}

inline double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace detail

/// Block unitary of the condition problem at parameter vector t.
inline ComplexMatrix condition_block(const ConditionProblem& problem,
                                     std::span<const double> t) {
  if (static_cast<int>(t.size()) != problem.parameter_count())
    throw std::invalid_argument("condition_block: wrong parameter count");
  detail::check_domain(t);
  if (problem.kind == ProblemKind::Ccz) {
    NetworkSpec spec(5);
    std::array<double, 10> a;
    std::copy(t.begin(), t.end(), a.begin());
    detail::append_ccz_core(spec, 1, problem.scheme, a);
    return build_network(spec);
  }
  NetworkSpec spec(3);
  std::array<double, 3> a;
  std::copy(t.begin(), t.end(), a.begin());
  detail::append_cz_core(spec, 1, a);
  return build_network(spec);
}

/// Residuals of the two-qubit system: with u the three-mode block and
/// v = u^-1, the structure-preserving amplitudes v(2,2), perm v(1,2;1,2),
/// perm v(2,3;2,3) must coincide and perm v must be their negative.
inline std::vector<double> cz_residuals(std::span<const double> t) {
  if (t.size() != 3) throw std::invalid_argument("cz_residuals: need 3 values");
  detail::check_domain(t);
  ConditionProblem p = ConditionProblem::cz();
  const ComplexMatrix v = adjoint(condition_block(p, t));
  const double e0 = v(1, 1).real();
  const double e1 = permanent_with_multiplicity(v, {{1, 2}, {1, 2}}).real();
  const double e2 = permanent_with_multiplicity(v, {{2, 3}, {2, 3}}).real();
  const double e3 = permanent(v).real();
  return {e0 - e1, e0 - e2, e0 + e3};
}

inline std::vector<double> cz_residuals(std::initializer_list<double> t) {
  return cz_residuals(std::span<const double>(t.begin(), t.size()));
}

/// Generalization to k photons in the auxiliary rail: the auxiliary
/// row/column enters each amplitude with multiplicity k, normalized by k!
/// (number-resolved detection). k = 1 reduces exactly to cz_residuals.
inline std::vector<double> tower_residuals(std::span<const double> t, int k) {
  if (t.size() != 3)
    throw std::invalid_argument("tower_residuals: need 3 values");
  if (k < 1) throw std::invalid_argument("tower_residuals: k >= 1");
  detail::check_domain(t);
  ConditionProblem p = ConditionProblem::tower(k);
  const ComplexMatrix v = adjoint(condition_block(p, t));
  const double kf = detail::factorial_d(k);
  std::vector<std::size_t> aux(static_cast<std::size_t>(k), 2);
  auto amp = [&](bool q0, bool q1) {
    IndexSelection sel;
    if (q0) sel.rows.push_back(1);
    sel.rows.insert(sel.rows.end(), aux.begin(), aux.end());
    if (q1) sel.rows.push_back(3);
    sel.cols = sel.rows;
    return permanent_with_multiplicity(v, sel).real() / kf;
  };
  const double a00 = amp(false, false);
  return {a00 - amp(true, false), a00 - amp(false, true), a00 + amp(true, true)};
}

inline std::vector<double> tower_residuals(std::initializer_list<double> t,
                                           int k) {
  return tower_residuals(std::span<const double>(t.begin(), t.size()), k);
}

/// Residuals of the three-qubit system: seven pairwise differences of the
/// eight equated sub-permanents, the last with flipped sign.
inline std::vector<double> ccz_residuals(std::span<const double> t,
                                         Scheme scheme) {
  if (t.size() != 10)
    throw std::invalid_argument("ccz_residuals: need 10 values");
  detail::check_domain(t);
  ConditionProblem p = ConditionProblem::ccz(scheme);
  const ComplexMatrix v = adjoint(condition_block(p, t));
  const auto& sels = detail::ccz_selections();
  std::array<double, 8> e;
  for (std::size_t i = 0; i < 8; ++i)
    e[i] = permanent_with_multiplicity(v, {sels[i], sels[i]}).real();
  std::vector<double> r(7);
  for (std::size_t i = 0; i < 6; ++i) r[i] = e[0] - e[i + 1];
  r[6] = e[0] + e[7];
  return r;
}

inline std::vector<double> condition_residuals(const ConditionProblem& problem,
                                               std::span<const double> t) {
  switch (problem.kind) {
    case ProblemKind::Cz: return cz_residuals(t);
    case ProblemKind::Tower: return tower_residuals(t, problem.aux_photons);
    case ProblemKind::Ccz: return ccz_residuals(t, problem.scheme);
  }
  throw std::logic_error("condition_residuals: unreachable");
}

/// Success amplitude: the structure-preserving amplitude of the all-zeros
/// configuration (only auxiliary photons enter the block). |A|^2 is the
/// gate success probability.
inline Complex success_amplitude(std::span<const double> t,
                                 const ConditionProblem& problem) {
  const ComplexMatrix v = adjoint(condition_block(problem, t));
  switch (problem.kind) {
    case ProblemKind::Cz:
      return v(1, 1);
    case ProblemKind::Tower: {
      const int k = problem.aux_photons;
      std::vector<std::size_t> aux(static_cast<std::size_t>(k), 2);
      return permanent_with_multiplicity(v, {aux, aux}) /
             detail::factorial_d(k);
    }
    case ProblemKind::Ccz:
      return permanent_with_multiplicity(v, {{2, 4}, {2, 4}});
  }
  throw std::logic_error("success_amplitude: unreachable");
}

// ---------------------------------------------------------------------------
// Least-squares machinery.
// ---------------------------------------------------------------------------

namespace detail {

/// Gaussian elimination with partial pivoting; A is n x n row-major.
/// Returns false on (numerical) singularity.
inline bool solve_linear(std::vector<double> a, std::vector<double> b, int n,
                         std::vector<double>& x) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (std::abs(a[pivot * n + col]) < 1e-300) return false;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
    x[r] = s / a[r * n + r];
  }
  return true;
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace detail

/// Central finite-difference Jacobian of the residual system (step 1e-7,
/// probes clamped into the |t| <= 1 domain).
inline std::vector<std::vector<double>> residual_jacobian(
    const ConditionProblem& problem, std::span<const double> t,
    double step = 1e-7) {
  const int n = static_cast<int>(t.size());
  const int m = problem.residual_count();
  std::vector<std::vector<double>> jac(m, std::vector<double>(n, 0.0));
  std::vector<double> probe(t.begin(), t.end());
  for (int j = 0; j < n; ++j) {
    const double orig = probe[j];
    const double hi = std::min(1.0, orig + step);
    const double lo = std::max(-1.0, orig - step);
    probe[j] = hi;
    const std::vector<double> rp = condition_residuals(problem, probe);
    probe[j] = lo;
    const std::vector<double> rm = condition_residuals(problem, probe);
    probe[j] = orig;
    for (int i = 0; i < m; ++i) jac[i][j] = (rp[i] - rm[i]) / (hi - lo);
  }
  return jac;
}

struct SolveOptions {
  int starts = 200;
  std::uint64_t seed = 42;
  std::vector<std::vector<double>> seed_points;  // tried before random starts
  double accept_tol = 1e-10;
  int max_iterations = 250;
  bool amplitude_ascent = false;  // walk the Ccz solution manifold uphill in |A|
};

struct SolverSolution {
  std::vector<double> t;
  double residual_norm = 0.0;
  Complex amplitude;
  double probability = 0.0;
  bool canonical_form_applied = false;
};

struct SolveDiagnostics {
  std::vector<double> start_residual_norms;  // final norm per start
};

namespace detail {

/// Damped least-squares descent on 1/2 ||r(t)||^2 with iterates clipped to
/// the parameter box.
inline std::pair<std::vector<double>, double> levenberg_refine(
    const ConditionProblem& problem, std::vector<double> x, double tol,
    int max_iterations) {
  const int n = static_cast<int>(x.size());
  for (double& v : x) v = std::clamp(v, -1.0, 1.0);
  std::vector<double> r = condition_residuals(problem, x);
  double rn = norm2(r);
  double lambda = 1e-3;
  for (int iter = 0; iter < max_iterations && rn > tol; ++iter) {
    const auto jac = residual_jacobian(problem, x);
    const int m = static_cast<int>(jac.size());
    std::vector<double> jtj(n * n, 0.0), jtr(n, 0.0);
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < n; ++a) {
        jtr[a] += jac[i][a] * r[i];
        for (int b = 0; b < n; ++b) jtj[a * n + b] += jac[i][a] * jac[i][b];
      }
    bool stepped = false;
    for (int tries = 0; tries < 60; ++tries) {
      std::vector<double> damped = jtj;
      for (int a = 0; a < n; ++a) damped[a * n + a] += lambda;
      std::vector<double> neg_g(n), dx;
      for (int a = 0; a < n; ++a) neg_g[a] = -jtr[a];
      if (!detail::solve_linear(damped, neg_g, n, dx)) {
        lambda *= 10.0;
        continue;
      }
      std::vector<double> xn(n);
      for (int a = 0; a < n; ++a) xn[a] = std::clamp(x[a] + dx[a], -1.0, 1.0);
      const std::vector<double> rnew = condition_residuals(problem, xn);
      const double rn_new = norm2(rnew);
      if (rn_new < rn) {
        x = std::move(xn);
        r = rnew;
        rn = rn_new;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e14) break;
    }
    if (!stepped) break;
  }
  return {std::move(x), rn};
}

/// Symmetry group of the three-mode system: swapping the outer
/// transmittances and flipping the signs of both together leave the
/// conditions invariant. Canonical representative: t3 >= t1 >= 0 when
/// reachable (t2 untouched), lexicographically greatest image otherwise.
inline std::vector<double> canonical_cz_form(const std::vector<double>& t,
                                             bool* changed) {
  const std::array<std::array<double, 3>, 4> images{{
      {t[0], t[1], t[2]},
      {t[2], t[1], t[0]},
      {-t[0], t[1], -t[2]},
      {-t[2], t[1], -t[0]},
  }};
  const auto better = [](const std::array<double, 3>& a,
                         const std::array<double, 3>& b) {
    const bool ca = a[0] >= 0.0 && a[2] >= a[0];
    const bool cb = b[0] >= 0.0 && b[2] >= b[0];
    if (ca != cb) return ca;
    return a > b;  // lexicographic tie-break
  };
  std::array<double, 3> best = images[0];
  for (std::size_t i = 1; i < images.size(); ++i)
    if (better(images[i], best)) best = images[i];
  if (changed) *changed = !(best[0] == t[0] && best[2] == t[2]);
  return {best[0], best[1], best[2]};
}

/// Projected-gradient walk along the solution manifold, increasing |A|
/// while re-correcting the residuals after every step.
inline std::vector<double> ascend_amplitude(const ConditionProblem& problem,
                                            std::vector<double> x, double tol,
                                            int max_iterations) {
  const int n = static_cast<int>(x.size());
  const int m = problem.residual_count();
  double best = std::abs(success_amplitude(x, problem));
  for (int step = 0; step < 500; ++step) {
    // finite-difference gradient of |A|
    std::vector<double> g(n, 0.0);
    for (int j = 0; j < n; ++j) {
      const double orig = x[j];
      const double hi = std::min(1.0, orig + 1e-7);
      const double lo = std::max(-1.0, orig - 1e-7);
      x[j] = hi;
      const double ap = std::abs(success_amplitude(x, problem));
      x[j] = lo;
      const double am = std::abs(success_amplitude(x, problem));
      x[j] = orig;
      g[j] = (ap - am) / (hi - lo);
    }
    // project out the row space of the residual Jacobian: g -= J^T lambda,
    // (J J^T) lambda = J g
    const auto jac = residual_jacobian(problem, x);
    std::vector<double> jjt(m * m, 0.0), jg(m, 0.0);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k)
        for (int a = 0; a < n; ++a) jjt[i * m + k] += jac[i][a] * jac[k][a];
      jjt[i * m + i] += 1e-12;
      for (int a = 0; a < n; ++a) jg[i] += jac[i][a] * g[a];
    }
    std::vector<double> lambda;
    if (!solve_linear(jjt, jg, m, lambda)) break;
    double gn = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int i = 0; i < m; ++i) g[a] -= jac[i][a] * lambda[i];
      gn += g[a] * g[a];
    }
    gn = std::sqrt(gn);
    if (gn < 1e-12) break;
    std::vector<double> xn(n);
    for (int a = 0; a < n; ++a)
      xn[a] = std::clamp(x[a] + 1e-3 * g[a] / gn, -1.0, 1.0);
    auto [corrected, rn] = levenberg_refine(problem, xn, tol, max_iterations);
    if (rn > tol) break;
    const double a_new = std::abs(success_amplitude(corrected, problem));
    if (a_new <= best + 1e-8) break;
    best = a_new;
    x = std::move(corrected);
  }
  return x;
}

}  // namespace detail

/// Multi-start damped least-squares search. Starts are the caller's seed
/// points followed by uniform random draws in [-1, 1]^d (engine derived
/// from seed and start index, so results are independent of execution
/// order). Accepted solutions are canonicalized, deduplicated modulo the
/// documented symmetry group, and sorted by |A| descending then
/// lexicographic t.
inline std::vector<SolverSolution> solve(const ConditionProblem& problem,
                                         const SolveOptions& options,
                                         SolveDiagnostics* diagnostics = nullptr) {
  if (options.starts < 0)
    throw std::invalid_argument("solve: starts must be >= 0");
  if (options.starts == 0 && options.seed_points.empty())
    throw std::invalid_argument("solve: need at least one start");
  const int dim = problem.parameter_count();
  for (const auto& sp : options.seed_points)
    if (static_cast<int>(sp.size()) != dim)
      throw std::invalid_argument("solve: seed point has wrong dimension");

  const std::size_t total =
      options.seed_points.size() + static_cast<std::size_t>(options.starts);
  std::vector<std::pair<std::vector<double>, double>> results(total);
  parallel_for(total, [&](std::size_t i) {
    std::vector<double> x0;
    if (i < options.seed_points.size()) {
      x0 = options.seed_points[i];
    } else {
      auto eng = make_engine(options.seed, i - options.seed_points.size());
      x0.resize(dim);
      for (int j = 0; j < dim; ++j) x0[j] = uniform_in(eng, -1.0, 1.0);
    }
    results[i] = detail::levenberg_refine(problem, std::move(x0),
                                          options.accept_tol * 1e-2,
                                          options.max_iterations);
  });

  if (diagnostics) {
    diagnostics->start_residual_norms.clear();
    for (const auto& [x, rn] : results)
      diagnostics->start_residual_norms.push_back(rn);
  }

  std::vector<SolverSolution> accepted;
  std::vector<std::vector<long long>> seen;
  for (auto& [x, rn] : results) {
    if (rn > options.accept_tol) continue;
    SolverSolution sol;
    if (problem.kind == ProblemKind::Ccz) {
      if (options.amplitude_ascent)
        x = detail::ascend_amplitude(problem, std::move(x),
                                     options.accept_tol, options.max_iterations);
      sol.t = std::move(x);
    } else {
      sol.t = detail::canonical_cz_form(x, &sol.canonical_form_applied);
    }
    sol.residual_norm = detail::norm2(condition_residuals(problem, sol.t));
    if (sol.residual_norm > options.accept_tol) continue;
    std::vector<long long> key(sol.t.size());
    for (std::size_t j = 0; j < sol.t.size(); ++j)
      key[j] = std::llround(sol.t[j] * 1e6);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(std::move(key));
    sol.amplitude = success_amplitude(sol.t, problem);
    sol.probability = std::norm(sol.amplitude);
    accepted.push_back(std::move(sol));
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const SolverSolution& a, const SolverSolution& b) {
              const double ma = std::abs(a.amplitude), mb = std::abs(b.amplitude);
              if (ma != mb) return ma > mb;
              return a.t < b.t;
            });
  return accepted;
}

}  // namespace lopsim
