#pragma once

// Nash's fixed-point map for anonymous games with payoffs in [0,1].
//
// F_{i,j}(X) = (x_{i,j} + max(0, u_i(j,X) - u_i(X))) / (1 + sum_k max(0, u_i(k,X) - u_i(X)))
//
// Fixed points of F are exactly the Nash equilibria; an eps-approximate
// fixed point (infinity norm) is an alpha^2 eps^{1/3}-approximate Nash
// equilibrium, and F is Lipschitz with constant at most 10 n alpha^{n+2}.
// residual_report machine-checks the first implication on every call; the
// implied tolerance uses an exact rational upper bound on the cube root so
// the check errs toward the verifier, never away from it.
//
// iterate_to_fixed_point is a desk-scale damped iteration, not a
// convergence theorem: it reports the best residual seen and keeps rational
// bit growth bounded by flooring iterates onto a coarser dyadic grid
// whenever denominators exceed a bit budget (mass deficit returned to the
// row's largest entry, preserving exact simplex membership).

#include <stdexcept>
#include <vector>

#include "anongame/game.hpp"
#include "anongame/rational.hpp"
#include "anongame/verify.hpp"

namespace anongame {

struct FixedPointReport {
  MixedProfile profile;
  Rational residual;            // infinity norm of F(X) - X
  Rational implied_ne_epsilon;  // rational upper bound on alpha^2 residual^{1/3}
  int iterations = 0;
};

namespace detail {

inline void require_unit_payoffs(const AnonymousGame& g) {
  for (const auto& per_player : g.payoffs)
    for (const auto& per_strategy : per_player)
      for (const auto& v : per_strategy)
        if (v.sign() < 0 || v > Rational(1))
          throw std::domain_error("nash_map: payoffs must lie in [0,1]");
}

}  // namespace detail

inline MixedProfile nash_map(const AnonymousGame& g, const MixedProfile& x) {
  detail::require_unit_payoffs(g);
  if (static_cast<int>(x.x.size()) != g.n) throw std::invalid_argument("nash_map: profile size mismatch");
  x.validate();
  MixedProfile out = x;
  for (int p = 0; p < g.n; ++p) {
    SeenDistribution dist = seen_distribution(g, x, p);
    std::vector<Rational> u(g.alpha);
    Rational mixed;
    for (int b = 0; b < g.alpha; ++b) {
      u[b] = expected_payoff(g, p, b, dist);
      mixed += x.x[p][b] * u[b];
    }
    std::vector<Rational> gain(g.alpha);
    Rational total;
    for (int b = 0; b < g.alpha; ++b) {
      if (u[b] > mixed) {
        gain[b] = u[b] - mixed;
        total += gain[b];
      }
    }
    Rational denom = Rational(1) + total;
    for (int b = 0; b < g.alpha; ++b) out.x[p][b] = (x.x[p][b] + gain[b]) / denom;
  }
  return out;
}

// Smallest-effort rational upper bound on r^{1/3}, within relative slack
// 2^{-32}; always an over-approximation, so tolerance checks built on it
// stay sound.
inline Rational cube_root_upper(const Rational& r) {
  if (r.sign() < 0) throw std::domain_error("cube_root_upper: negative input");
  if (r.is_zero()) return Rational(0);
  Rational lo(0), hi = r > Rational(1) ? r : Rational(1);
  Rational rel = Rational::pow2(-33);
  while (hi - lo > hi * rel) {
    Rational mid = (lo + hi) / Rational(2);
    if (mid * mid * mid >= r)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

inline Rational profile_distance(const MixedProfile& a, const MixedProfile& b) {
  if (a.x.size() != b.x.size()) throw std::invalid_argument("profile_distance: shape mismatch");
  Rational d;
  for (std::size_t p = 0; p < a.x.size(); ++p) {
    if (a.x[p].size() != b.x[p].size()) throw std::invalid_argument("profile_distance: shape mismatch");
    for (std::size_t s = 0; s < a.x[p].size(); ++s) {
      Rational e = abs(a.x[p][s] - b.x[p][s]);
      if (e > d) d = e;
    }
  }
  return d;
}

inline FixedPointReport residual_report(const AnonymousGame& g, const MixedProfile& x) {
  FixedPointReport rep;
  rep.profile = x;
  rep.residual = profile_distance(nash_map(g, x), x);
  rep.implied_ne_epsilon =
      Rational(static_cast<long>(g.alpha) * g.alpha) * cube_root_upper(rep.residual);
  // the fixed-point lemma promises this acceptance; a reject means a bug
  if (!verify_equilibrium(g, x, rep.implied_ne_epsilon, VerifyMode::approximate).accepted)
    throw std::logic_error("residual_report: fixed-point lemma cross-check failed");
  return rep;
}

// Exact ratio ||F(X)-F(Y)|| / ||X-Y|| in the infinity norm; by the
// Lipschitz lemma it never exceeds 10 n alpha^{n+2}.
inline Rational lipschitz_probe(const AnonymousGame& g, const MixedProfile& x, const MixedProfile& y) {
  Rational dxy = profile_distance(x, y);
  if (dxy.is_zero()) throw std::invalid_argument("lipschitz_probe: profiles coincide");
  return profile_distance(nash_map(g, x), nash_map(g, y)) / dxy;
}

namespace detail {

// Floor every entry onto the 2^{-bits} grid and hand the lost mass to the
// row's largest entry; keeps rows exactly on the simplex.
inline void coarsen_profile(MixedProfile& x, unsigned long bits) {
  for (auto& row : x.x) {
    Rational sum;
    std::size_t top = 0;
    for (std::size_t s = 0; s < row.size(); ++s) {
      row[s] = floor_dyadic(row[s], bits);
      sum += row[s];
      if (row[s] > row[top]) top = s;
    }
    row[top] += Rational(1) - sum;
  }
}

inline std::size_t profile_bits(const MixedProfile& x) {
  std::size_t most = 0;
  for (const auto& row : x.x)
    for (const auto& v : row) most = std::max(most, bit_size(v));
  return most;
}

}  // namespace detail

inline FixedPointReport iterate_to_fixed_point(const AnonymousGame& g, const Rational& target_residual,
                                               int max_iters, const Rational& damping = Rational(1, 2),
                                               std::size_t bit_budget = 1024) {
  if (damping.sign() <= 0 || damping > Rational(1))
    throw std::invalid_argument("iterate_to_fixed_point: damping must lie in (0,1]");
  detail::require_unit_payoffs(g);

  MixedProfile x = MixedProfile::uniform(g.n, g.alpha);
  FixedPointReport best;
  best.residual = Rational(2);  // sentinel above any reachable residual
  int iter = 0;
  for (;;) {
    MixedProfile fx = nash_map(g, x);
    Rational res = profile_distance(fx, x);
    if (res < best.residual) {
      best.profile = x;
      best.residual = res;
    }
    if (res <= target_residual || iter >= max_iters) break;
    ++iter;
    for (int p = 0; p < g.n; ++p)
      for (int b = 0; b < g.alpha; ++b)
        x.x[p][b] = (Rational(1) - damping) * x.x[p][b] + damping * fx.x[p][b];
    if (detail::profile_bits(x) > bit_budget) detail::coarsen_profile(x, bit_budget / 4);
  }

  FixedPointReport rep = residual_report(g, best.profile);
  rep.iterations = iter;
  return rep;
}

}  // namespace anongame
