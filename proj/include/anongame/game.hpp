#pragma once

// Anonymous games with exact rational payoffs. A player's payoff depends on
// her own pure strategy and the histogram of the other n-1 players' pure
// strategies only. Payoff tables are dense over the histogram space in
// lexicographic order.
//
// seen_distribution is the workhorse: the exact distribution over histograms
// induced by a mixed profile, computed by convolving players one at a time
// (never by enumerating pure profiles; the brute-force version lives in the
// test oracles).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "anongame/histogram.hpp"
#include "anongame/rational.hpp"

namespace anongame {

struct AnonymousGame {
  int n = 0;      // number of players
  int alpha = 0;  // number of pure strategies, shared by all players
  Rational lo, hi;  // declared inclusive payoff range
  // payoffs[p][b][k]: payoff of player p playing b against histogram index k
  std::vector<std::vector<std::vector<Rational>>> payoffs;
  HistogramSpace space;  // shape (n-1, alpha)

  AnonymousGame() = default;
  AnonymousGame(int n_, int alpha_, Rational lo_, Rational hi_)
      : n(n_), alpha(alpha_), lo(std::move(lo_)), hi(std::move(hi_)), space(n_ - 1, alpha_) {
    if (n < 1 || alpha < 1) throw std::invalid_argument("AnonymousGame: need n >= 1, alpha >= 1");
    payoffs.assign(n, std::vector<std::vector<Rational>>(alpha, std::vector<Rational>(space.size())));
  }

  Rational& payoff(int p, int b, std::size_t k) { return payoffs[p][b][k]; }
  const Rational& payoff(int p, int b, std::size_t k) const { return payoffs[p][b][k]; }
  Rational& payoff(int p, int b, const Histogram& h) { return payoffs[p][b][space.rank(h)]; }
  const Rational& payoff(int p, int b, const Histogram& h) const { return payoffs[p][b][space.rank(h)]; }

  // Shape and declared-range check; throws on violation.
  void validate() const {
    if (n < 1 || alpha < 1) throw std::invalid_argument("AnonymousGame: bad dimensions");
    if (lo > hi) throw std::invalid_argument("AnonymousGame: empty payoff range");
    if (static_cast<int>(payoffs.size()) != n) throw std::invalid_argument("AnonymousGame: player count mismatch");
    for (const auto& rows : payoffs) {
      if (static_cast<int>(rows.size()) != alpha) throw std::invalid_argument("AnonymousGame: strategy count mismatch");
      for (const auto& row : rows) {
        if (row.size() != space.size()) throw std::invalid_argument("AnonymousGame: histogram count mismatch");
        for (const auto& v : row)
          if (v < lo || v > hi)
            throw std::invalid_argument("AnonymousGame: payoff outside declared range [" + lo.str() + ", " + hi.str() + "]");
      }
    }
  }
};

struct MixedProfile {
  // x[p][b]: probability that player p plays strategy b
  std::vector<std::vector<Rational>> x;

  int players() const { return static_cast<int>(x.size()); }
  int alpha() const { return x.empty() ? 0 : static_cast<int>(x[0].size()); }

  // Exact simplex check: rows sum to 1, entries nonnegative.
  void validate() const {
    for (const auto& row : x) {
      Rational sum;
      for (const auto& v : row) {
        if (v.sign() < 0) throw std::invalid_argument("MixedProfile: negative probability");
        sum += v;
      }
      if (sum != Rational(1)) throw std::invalid_argument("MixedProfile: row sums to " + sum.str() + ", not 1");
    }
  }

  static MixedProfile uniform(int n, int alpha) {
    MixedProfile p;
    p.x.assign(n, std::vector<Rational>(alpha, Rational(1, alpha)));
    return p;
  }
};

struct SeenDistribution {
  int observer = 0;
  // pr[k]: probability that the observer sees histogram index k
  std::vector<Rational> pr;
};

// Exact distribution over the histograms seen by `observer`: convolve the
// other players in one at a time. Level j holds the distribution over
// histograms of the first j convolved players.
inline SeenDistribution seen_distribution(int n, int alpha, const MixedProfile& profile, int observer) {
  if (profile.players() != n || profile.alpha() != alpha)
    throw std::invalid_argument("seen_distribution: profile shape mismatch");
  if (observer < 0 || observer >= n) throw std::invalid_argument("seen_distribution: observer out of range");

  std::vector<Rational> cur(1, Rational(1));  // level 0: the empty histogram
  int level = 0;
  for (int q = 0; q < n; ++q) {
    if (q == observer) continue;
    HistogramSpace from(level, alpha), to(level + 1, alpha);
    std::vector<Rational> next(to.size());
    for (std::size_t k = 0; k < from.size(); ++k) {
      if (cur[k].is_zero()) continue;
      Histogram h = from.at(k);
      for (int b = 0; b < alpha; ++b) {
        const Rational& xb = profile.x[q][b];
        if (xb.is_zero()) continue;
        ++h[b];
        next[to.rank(h)] += cur[k] * xb;
        --h[b];
      }
    }
    cur = std::move(next);
    ++level;
  }
  SeenDistribution out;
  out.observer = observer;
  out.pr = std::move(cur);
  return out;
}

inline SeenDistribution seen_distribution(const AnonymousGame& g, const MixedProfile& profile, int observer) {
  return seen_distribution(g.n, g.alpha, profile, observer);
}

// u_p(b, X): expected payoff of player p for pure strategy b against dist.
inline Rational expected_payoff(const AnonymousGame& g, int p, int b, const SeenDistribution& dist) {
  if (dist.pr.size() != g.space.size()) throw std::invalid_argument("expected_payoff: distribution shape mismatch");
  Rational u;
  for (std::size_t k = 0; k < dist.pr.size(); ++k)
    if (!dist.pr[k].is_zero()) u += g.payoffs[p][b][k] * dist.pr[k];
  return u;
}

inline Rational expected_payoff(const AnonymousGame& g, const MixedProfile& profile, int p, int b) {
  return expected_payoff(g, p, b, seen_distribution(g, profile, p));
}

// u_p(X): expected payoff of p's own mix against dist.
inline Rational expected_payoff_mixed(const AnonymousGame& g, const MixedProfile& profile, int p,
                                      const SeenDistribution& dist) {
  Rational u;
  for (int b = 0; b < g.alpha; ++b)
    if (!profile.x[p][b].is_zero()) u += profile.x[p][b] * expected_payoff(g, p, b, dist);
  return u;
}

inline Rational expected_payoff_mixed(const AnonymousGame& g, const MixedProfile& profile, int p) {
  return expected_payoff_mixed(g, profile, p, seen_distribution(g, profile, p));
}

}  // namespace anongame
