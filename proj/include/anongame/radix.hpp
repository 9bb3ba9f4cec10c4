#pragma once

// Radix games. G(n, N) has n main players P_1..P_n plus two auxiliary
// players Q and R over six strategies (s, t, q1, q2, r1, r2); with delta =
// 1/N its unique equilibrium forces P_i to play s with probability exactly
// delta^i, Q to split q1/q2 evenly and R to play r1 with probability
// kappa = prod_i delta^i. Each player gets a distinct digit scale out of an
// anonymous game, which is what the later payoff embedding relies on.
//
// The generalized variant splits s into two interchangeable copies s1, s2:
// every payoff reads the merged count k_s1 + k_s2 and is otherwise
// unchanged, so only the combined s-mass is pinned, not the split.
//
// Payoff cases (delta = 1/N, kappa = prod_{j<=n} delta^j):
//   P_i on s : delta^i + kappa if k_s = n-1, else kappa
//   P_i on t : 2 if k_r1 = 1, else 0
//   Q on q1  : 1 if k_s = n, else 0        Q on q2: 1 if k_r1 = 1, else 0
//   R on r1  : 1 if k_q1 = 1, else 0       R on r2: 1 if k_q2 = 1, else 0
// and every strategy a player is not interested in pays -1 everywhere.

#include <set>
#include <stdexcept>
#include <vector>

#include "anongame/game.hpp"
#include "anongame/rational.hpp"

namespace anongame {

// Fixed strategy rosters. Main players are 0..n-1 (P_i has exponent i+1),
// then Q at index n and R at index n+1.
namespace strat6 { enum : int { s = 0, t = 1, q1 = 2, q2 = 3, r1 = 4, r2 = 5, count = 6 }; }
namespace strat7 { enum : int { s1 = 0, s2 = 1, t = 2, q1 = 3, q2 = 4, r1 = 5, r2 = 6, count = 7 }; }

struct RadixParams {
  int n = 0;
  long N = 0;
  Rational delta;
  Rational kappa;

  RadixParams() = default;
  RadixParams(int n_, long N_) : n(n_), N(N_) {
    if (n < 1) throw std::invalid_argument("RadixParams: need n >= 1");
    if (N < 2) throw std::invalid_argument("RadixParams: need N >= 2");
    delta = Rational(1, N);
    kappa = pow(delta, static_cast<long>(n) * (n + 1) / 2);
  }
};

namespace detail {

// Shared payoff logic; ks is the (merged) count of s-players among the
// n+1 players the observer sees.
inline Rational radix_payoff(const RadixParams& pr, int player, bool strat_s, bool strat_t, bool strat_q1,
                             bool strat_q2, bool strat_r1, bool strat_r2, int ks, int kq1, int kq2, int kr1) {
  const int n = pr.n;
  if (player < n) {  // P_{player+1}
    if (strat_s) return ks == n - 1 ? pow(pr.delta, player + 1) + pr.kappa : pr.kappa;
    if (strat_t) return kr1 == 1 ? Rational(2) : Rational(0);
    return Rational(-1);
  }
  if (player == n) {  // Q
    if (strat_q1) return ks == n ? Rational(1) : Rational(0);
    if (strat_q2) return kr1 == 1 ? Rational(1) : Rational(0);
    return Rational(-1);
  }
  // R
  if (strat_r1) return kq1 == 1 ? Rational(1) : Rational(0);
  if (strat_r2) return kq2 == 1 ? Rational(1) : Rational(0);
  return Rational(-1);
}

}  // namespace detail

inline AnonymousGame build_radix(int n, long N) {
  RadixParams pr(n, N);
  AnonymousGame g(n + 2, strat6::count, Rational(-1), Rational(2));
  for (int p = 0; p < g.n; ++p)
    for (int b = 0; b < g.alpha; ++b)
      for (std::size_t k = 0; k < g.space.size(); ++k) {
        const Histogram& h = g.space.at(k);
        g.payoffs[p][b][k] =
            detail::radix_payoff(pr, p, b == strat6::s, b == strat6::t, b == strat6::q1, b == strat6::q2,
                                 b == strat6::r1, b == strat6::r2, h[strat6::s], h[strat6::q1], h[strat6::q2],
                                 h[strat6::r1]);
      }
  return g;
}

inline AnonymousGame build_generalized_radix(int n, long N) {
  RadixParams pr(n, N);
  AnonymousGame g(n + 2, strat7::count, Rational(-1), Rational(2));
  for (int p = 0; p < g.n; ++p)
    for (int b = 0; b < g.alpha; ++b)
      for (std::size_t k = 0; k < g.space.size(); ++k) {
        const Histogram& h = g.space.at(k);
        bool is_s = (b == strat7::s1 || b == strat7::s2);
        g.payoffs[p][b][k] =
            detail::radix_payoff(pr, p, is_s, b == strat7::t, b == strat7::q1, b == strat7::q2, b == strat7::r1,
                                 b == strat7::r2, h[strat7::s1] + h[strat7::s2], h[strat7::q1], h[strat7::q2],
                                 h[strat7::r1]);
      }
  return g;
}

// The unique equilibrium of G(n, N): x_i = delta^i on s, Q splits evenly,
// R plays r1 with probability kappa.
inline MixedProfile canonical_radix_ne(int n, long N) {
  RadixParams pr(n, N);
  MixedProfile p;
  p.x.assign(n + 2, std::vector<Rational>(strat6::count, Rational(0)));
  for (int i = 0; i < n; ++i) {
    Rational xi = pow(pr.delta, i + 1);
    p.x[i][strat6::s] = xi;
    p.x[i][strat6::t] = Rational(1) - xi;
  }
  p.x[n][strat6::q1] = Rational(1, 2);
  p.x[n][strat6::q2] = Rational(1, 2);
  p.x[n + 1][strat6::r1] = pr.kappa;
  p.x[n + 1][strat6::r2] = Rational(1) - pr.kappa;
  return p;
}

// Canonical equilibrium of the generalized game: all s-mass on s1.
inline MixedProfile canonical_generalized_ne(int n, long N) {
  RadixParams pr(n, N);
  MixedProfile p;
  p.x.assign(n + 2, std::vector<Rational>(strat7::count, Rational(0)));
  for (int i = 0; i < n; ++i) {
    Rational xi = pow(pr.delta, i + 1);
    p.x[i][strat7::s1] = xi;
    p.x[i][strat7::t] = Rational(1) - xi;
  }
  p.x[n][strat7::q1] = Rational(1, 2);
  p.x[n][strat7::q2] = Rational(1, 2);
  p.x[n + 1][strat7::r1] = pr.kappa;
  p.x[n + 1][strat7::r2] = Rational(1) - pr.kappa;
  return p;
}

// Entrywise distance max |payoff - payoff'| over identically shaped games.
inline Rational closeness_distance(const AnonymousGame& a, const AnonymousGame& b) {
  if (a.n != b.n || a.alpha != b.alpha) throw std::invalid_argument("closeness_distance: shape mismatch");
  Rational best;
  for (int p = 0; p < a.n; ++p)
    for (int s = 0; s < a.alpha; ++s)
      for (std::size_t k = 0; k < a.space.size(); ++k) {
        Rational d = abs(a.payoffs[p][s][k] - b.payoffs[p][s][k]);
        if (d > best) best = d;
      }
  return best;
}

// Strategies a player cares about in the 7-strategy roster; everything else
// pays -1 for her in every near-radix game.
inline std::set<int> interested_set(int player, int n) {
  if (player < n) return {strat7::s1, strat7::s2, strat7::t};
  if (player == n) return {strat7::q1, strat7::q2};
  return {strat7::r1, strat7::r2};
}

inline bool respects_interested_sets(const MixedProfile& p, int n) {
  for (int pl = 0; pl < n + 2; ++pl) {
    auto in = interested_set(pl, n);
    for (int b = 0; b < strat7::count; ++b)
      if (!in.count(b) && !p.x[pl][b].is_zero()) return false;
  }
  return true;
}

struct ScalingReport {
  bool ok = false;
  std::vector<Rational> slack;  // |x_{i,s1}+x_{i,s2} - delta^i| per main player
};

// Checks x_{i,s1} + x_{i,s2} = delta^i (1 +- tau) for every main player.
inline ScalingReport check_scaling(const MixedProfile& p, const RadixParams& pr, const Rational& tau) {
  if (p.alpha() != strat7::count || p.players() != pr.n + 2)
    throw std::invalid_argument("check_scaling: profile shape mismatch");
  ScalingReport rep;
  rep.ok = true;
  for (int i = 0; i < pr.n; ++i) {
    Rational di = pow(pr.delta, i + 1);
    Rational slack = abs(p.x[i][strat7::s1] + p.x[i][strat7::s2] - di);
    if (slack > tau * di) rep.ok = false;
    rep.slack.push_back(slack);
  }
  return rep;
}

}  // namespace anongame
