#pragma once

// Two-strategy polymatrix games. Player i owns rows (and columns) 2i and
// 2i+1 of a single 2n x 2n matrix A with entries in [0,1] and zero 2x2
// diagonal blocks; against the stacked profile y her two pure payoffs are
// the inner products A[2i]·y and A[2i+1]·y. The diagonal-block condition
// makes a player's own mix irrelevant to her own payoff.
//
// solve_poly_small finds an eps-well-supported equilibrium by support
// enumeration at n <= 4: 3 choices per player (pure first row, pure second
// row, mixed), patterns tried in lexicographic order, mixed supports pinned
// by exact indifference via rational Gaussian elimination.

#include <optional>
#include <stdexcept>
#include <vector>

#include "anongame/rational.hpp"
#include "anongame/verify.hpp"

namespace anongame {

struct PolymatrixGame {
  int n = 0;
  std::vector<std::vector<Rational>> A;  // 2n x 2n

  PolymatrixGame() = default;
  explicit PolymatrixGame(int n_) : n(n_), A(2 * n_, std::vector<Rational>(2 * n_)) {}

  void validate() const {
    if (n < 1) throw std::invalid_argument("PolymatrixGame: need n >= 1");
    if (static_cast<int>(A.size()) != 2 * n) throw std::invalid_argument("PolymatrixGame: row count mismatch");
    for (int r = 0; r < 2 * n; ++r) {
      if (static_cast<int>(A[r].size()) != 2 * n) throw std::invalid_argument("PolymatrixGame: column count mismatch");
      for (int c = 0; c < 2 * n; ++c) {
        if (r / 2 == c / 2 && !A[r][c].is_zero())
          throw std::invalid_argument("PolymatrixGame: nonzero diagonal block at player " + std::to_string(r / 2 + 1));
        if (A[r][c].sign() < 0 || A[r][c] > Rational(1))
          throw std::invalid_argument("PolymatrixGame: entry outside [0,1]");
      }
    }
  }
};

struct PolyProfile {
  std::vector<Rational> y;  // length 2n; y[2i] + y[2i+1] = 1

  void validate() const {
    if (y.size() % 2 != 0) throw std::invalid_argument("PolyProfile: odd length");
    for (std::size_t i = 0; i < y.size(); i += 2) {
      if (y[i].sign() < 0 || y[i + 1].sign() < 0) throw std::invalid_argument("PolyProfile: negative probability");
      if (y[i] + y[i + 1] != Rational(1))
        throw std::invalid_argument("PolyProfile: block " + std::to_string(i / 2 + 1) + " does not sum to 1");
    }
  }
};

// All 2n pure payoffs A·y.
inline std::vector<Rational> poly_payoffs(const PolymatrixGame& g, const PolyProfile& p) {
  if (static_cast<int>(p.y.size()) != 2 * g.n) throw std::invalid_argument("poly_payoffs: profile length mismatch");
  std::vector<Rational> u(2 * g.n);
  for (int r = 0; r < 2 * g.n; ++r)
    for (int c = 0; c < 2 * g.n; ++c)
      if (!g.A[r][c].is_zero() && !p.y[c].is_zero()) u[r] += g.A[r][c] * p.y[c];
  return u;
}

// eps-well-supported check: a row played with positive probability may not
// be beaten by the sibling row by more than eps. Witness conventions match
// verify_equilibrium (strict violators on reject, saturated pairs on accept).
inline EquilibriumCertificate verify_poly_wsne(const PolymatrixGame& g, const PolyProfile& p, const Rational& eps) {
  if (eps.sign() < 0) throw std::invalid_argument("verify_poly_wsne: negative epsilon");
  p.validate();
  std::vector<Rational> u = poly_payoffs(g, p);
  EquilibriumCertificate cert;
  cert.mode = VerifyMode::well_supported;
  cert.epsilon = eps;
  std::vector<Witness> violations, saturated;
  for (int i = 0; i < g.n; ++i) {
    for (int own = 0; own < 2; ++own) {
      int a = 2 * i + own, b = 2 * i + 1 - own;
      if (p.y[a].is_zero()) continue;
      Rational gap = u[b] - u[a];
      if (gap > eps) violations.push_back({i, a, b, gap});
      else if (gap == eps) saturated.push_back({i, a, b, gap});
    }
  }
  cert.accepted = violations.empty();
  cert.witnesses = cert.accepted ? std::move(saturated) : std::move(violations);
  return cert;
}

namespace detail {

// Solves M q = rhs exactly. Partial pivoting by largest absolute value
// (lowest row on ties); free variables are fixed at 1/2 so nominally mixed
// players stay mixed. Returns nothing if the system is inconsistent.
inline std::optional<std::vector<Rational>> solve_linear(std::vector<std::vector<Rational>> M,
                                                         std::vector<Rational> rhs) {
  const std::size_t rows = M.size();
  const std::size_t cols = rows ? M[0].size() : 0;
  std::vector<std::size_t> pivot_col_of_row;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = r;
    for (std::size_t rr = r + 1; rr < rows; ++rr)
      if (abs(M[rr][c]) > abs(M[best][c])) best = rr;
    if (M[best][c].is_zero()) continue;
    std::swap(M[r], M[best]);
    std::swap(rhs[r], rhs[best]);
    for (std::size_t rr = 0; rr < rows; ++rr) {
      if (rr == r || M[rr][c].is_zero()) continue;
      Rational f = M[rr][c] / M[r][c];
      for (std::size_t cc = c; cc < cols; ++cc) M[rr][cc] -= f * M[r][cc];
      rhs[rr] -= f * rhs[r];
    }
    pivot_col_of_row.push_back(c);
    ++r;
  }
  for (std::size_t rr = r; rr < rows; ++rr)
    if (!rhs[rr].is_zero()) return std::nullopt;  // 0 = nonzero: inconsistent

  std::vector<Rational> q(cols, Rational(1, 2));
  for (std::size_t i = 0; i < pivot_col_of_row.size(); ++i) {
    std::size_t c = pivot_col_of_row[i];
    Rational v = rhs[i];
    for (std::size_t cc = 0; cc < cols; ++cc)
      if (cc != c && !M[i][cc].is_zero()) v -= M[i][cc] * q[cc];
    q[c] = v / M[i][c];
  }
  return q;
}

}  // namespace detail

// Support enumeration for n <= 4. Per-player support codes: 0 = pure on the
// first row, 1 = pure on the second, 2 = mixed; patterns run in
// lexicographic order with player 1 most significant, and the first pattern
// whose assembled profile passes verify_poly_wsne wins.
inline PolyProfile solve_poly_small(const PolymatrixGame& g, const Rational& eps) {
  g.validate();
  if (g.n > 4) throw std::invalid_argument("solve_poly_small: supports n <= 4 only");

  long total = 1;
  for (int i = 0; i < g.n; ++i) total *= 3;

  for (long code = 0; code < total; ++code) {
    std::vector<int> pattern(g.n);
    long rem = code;
    for (int i = g.n - 1; i >= 0; --i) {
      pattern[i] = static_cast<int>(rem % 3);
      rem /= 3;
    }

    std::vector<int> mixed;
    for (int i = 0; i < g.n; ++i)
      if (pattern[i] == 2) mixed.push_back(i);

    // y as an affine function of q (the mixed players' first-row weights):
    // evaluate the indifference rows at q = 0 and read off coefficients.
    auto assemble = [&](const std::vector<Rational>& q) {
      PolyProfile p;
      p.y.assign(2 * g.n, Rational(0));
      for (int i = 0; i < g.n; ++i) {
        if (pattern[i] == 0) p.y[2 * i] = Rational(1);
        else if (pattern[i] == 1) p.y[2 * i + 1] = Rational(1);
      }
      for (std::size_t j = 0; j < mixed.size(); ++j) {
        p.y[2 * mixed[j]] = q[j];
        p.y[2 * mixed[j] + 1] = Rational(1) - q[j];
      }
      return p;
    };

    std::vector<Rational> q0(mixed.size(), Rational(0));
    PolyProfile base = assemble(q0);

    std::vector<std::vector<Rational>> M(mixed.size(), std::vector<Rational>(mixed.size()));
    std::vector<Rational> rhs(mixed.size());
    bool ok = true;
    for (std::size_t e = 0; e < mixed.size(); ++e) {
      int i = mixed[e];
      // indifference: (A[2i] - A[2i+1]) · y = 0
      Rational c0;
      for (int c = 0; c < 2 * g.n; ++c) c0 += (g.A[2 * i][c] - g.A[2 * i + 1][c]) * base.y[c];
      rhs[e] = -c0;
      for (std::size_t j = 0; j < mixed.size(); ++j) {
        int col = 2 * mixed[j];
        M[e][j] = (g.A[2 * i][col] - g.A[2 * i + 1][col]) - (g.A[2 * i][col + 1] - g.A[2 * i + 1][col + 1]);
      }
    }

    auto q = detail::solve_linear(M, rhs);
    if (!q) continue;
    for (const auto& v : *q)
      if (v.sign() < 0 || v > Rational(1)) { ok = false; break; }
    if (!ok) continue;

    PolyProfile candidate = assemble(*q);
    if (verify_poly_wsne(g, candidate, eps).accepted) return candidate;
  }
  throw std::runtime_error("solve_poly_small: no equilibrium found by support enumeration");
}

}  // namespace anongame
