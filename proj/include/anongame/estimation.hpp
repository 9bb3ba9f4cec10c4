#pragma once

// Estimating one player's strategy weight from another player's view.
//
// In a near-radix 7-strategy game, observer P_ell sees the main players
// S = [n] \ {ell}; with L = {i in S : i <= r} and m = |L|, the s-mass of
// each i in L is close to delta^i, so the joint (s1-count, s2-count) of
// exactly the players in L acts like a radix encoding: the probability of
// seeing total s-count m with a given s1/s2 split is dominated by "everyone
// in L on s" and scales like h(L) = prod_{i in L} delta^i.
//
// The coefficient vectors built here turn that into a sparse linear form
// over Pr[k_s1 = a, k_s2 = b]:
//
//   B = delta^r/h(L) * sum_{j=1..m} j * w(L)  at (j, m-j)
//     - delta^r/h(L')* sum_{j=1..m-1} j * w(L') at (j, m-1-j)
//
// with L' = L \ {r}, where w(T) = (prod_{i in S\T} (1 - delta^i))^{-1}
// corrects for the players outside T sitting on their t-ish mass. Evaluated
// against the observer's seen distribution this is x_{r,1} up to an
// O(r^2 delta^{r+1}) additive error; C is the s1<->s2 mirror for x_{r,2}.
//
// poly_P implements the symmetric polynomial P_d = sum over d-subsets T of
// L of prod_{i in T} x_{i,1} * prod_{i in L\T} delta^i; the inclusion-
// exclusion identities the construction rests on are exercised in the tests.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "anongame/game.hpp"
#include "anongame/radix.hpp"
#include "anongame/rational.hpp"
#include "anongame/rng.hpp"

namespace anongame {

struct EstimationContext {
  int n = 0;
  long N = 0;
  Rational delta;
  Rational lambda;     // 2^{-n^3}, the allowed wobble of the s-mass totals
  int ell = 0, r = 0;  // 1-based; estimate player r's weight from P_ell's view
  std::vector<int> L;  // {i in S : i <= r}, ascending, 1-based
  int m = 0;
  Rational hL;         // prod_{i in L} delta^i

  // N is pinned to 2^n so that lambda = delta^{n^2} as well.
  static EstimationContext make(int n, int ell, int r) {
    if (n < 2) throw std::invalid_argument("EstimationContext: need n >= 2");
    if (ell < 1 || ell > n || r < 1 || r > n || ell == r)
      throw std::invalid_argument("EstimationContext: need distinct ell, r in [n]");
    EstimationContext c;
    c.n = n;
    c.N = 1L << n;
    c.delta = Rational(1, c.N);
    c.lambda = Rational::pow2(-static_cast<long>(n) * n * n);
    c.ell = ell;
    c.r = r;
    for (int i = 1; i <= r; ++i)
      if (i != ell) c.L.push_back(i);
    c.m = static_cast<int>(c.L.size());
    c.hL = Rational(1);
    for (int i : c.L) c.hL *= pow(c.delta, i);
    return c;
  }
};

// P_d over the context's L: sum over d-subsets T of prod x_{i,1} over T
// times prod delta^i over L \ T. The profile is over the 7-strategy roster.
inline Rational poly_P(int d, const EstimationContext& ctx, const MixedProfile& profile) {
  if (d < 0 || d > ctx.m) throw std::invalid_argument("poly_P: d out of range");
  Rational sum;
  for (std::uint32_t mask = 0; mask < (1u << ctx.m); ++mask) {
    if (__builtin_popcount(mask) != d) continue;
    Rational term(1);
    for (int idx = 0; idx < ctx.m; ++idx) {
      int i = ctx.L[idx];
      term *= (mask >> idx & 1) ? profile.x[i - 1][strat7::s1] : pow(ctx.delta, i);
    }
    sum += term;
  }
  return sum;
}

// Sparse coefficient vector over (s1-count, s2-count) pairs.
struct CoeffVector {
  int ell = 0, r = 0;
  std::map<std::pair<int, int>, Rational> B;  // estimates x_{r,1}
  std::map<std::pair<int, int>, Rational> C;  // estimates x_{r,2}
  Rational bound;                             // declared magnitude cap N^{n^2}
};

inline CoeffVector build_coeffs(const EstimationContext& ctx) {
  CoeffVector cv;
  cv.ell = ctx.ell;
  cv.r = ctx.r;
  cv.bound = pow(Rational(ctx.N), static_cast<long>(ctx.n) * ctx.n);

  auto weight = [&](const std::vector<int>& L) {
    // (prod over observed mains outside L of (1 - delta^i))^{-1}
    Rational w(1);
    for (int i = 1; i <= ctx.n; ++i) {
      if (i == ctx.ell) continue;
      bool in_L = false;
      for (int j : L)
        if (j == i) in_L = true;
      if (!in_L) w *= Rational(1) - pow(ctx.delta, i);
    }
    return Rational(1) / w;
  };

  Rational dr = pow(ctx.delta, ctx.r);
  Rational plus_scale = dr * weight(ctx.L) / ctx.hL;
  for (int j = 1; j <= ctx.m; ++j) {
    cv.B[{j, ctx.m - j}] += Rational(j) * plus_scale;
    cv.C[{ctx.m - j, j}] += Rational(j) * plus_scale;
  }

  if (ctx.m >= 2) {
    // L' = L \ {r}; r is always the largest element of L
    std::vector<int> Lp(ctx.L.begin(), ctx.L.end() - 1);
    Rational hLp = ctx.hL / dr;
    Rational minus_scale = dr * weight(Lp) / hLp;
    for (int j = 1; j <= ctx.m - 1; ++j) {
      cv.B[{j, ctx.m - 1 - j}] -= Rational(j) * minus_scale;
      cv.C[{ctx.m - 1 - j, j}] -= Rational(j) * minus_scale;
    }
  }
  return cv;
}

// Inner product of a coefficient vector with the aggregated law of the
// (s1-count, s2-count) pair under the observer's seen distribution.
inline Rational evaluate_estimate(const std::map<std::pair<int, int>, Rational>& coeffs,
                                  const SeenDistribution& dist, const HistogramSpace& space) {
  if (dist.pr.size() != space.size()) throw std::invalid_argument("evaluate_estimate: shape mismatch");
  if (space.alpha() != strat7::count) throw std::invalid_argument("evaluate_estimate: need the 7-strategy roster");
  std::map<std::pair<int, int>, Rational> law;
  for (std::size_t k = 0; k < space.size(); ++k) {
    if (dist.pr[k].is_zero()) continue;
    const Histogram& h = space.at(k);
    law[{h[strat7::s1], h[strat7::s2]}] += dist.pr[k];
  }
  Rational est;
  for (const auto& [key, c] : coeffs) {
    auto it = law.find(key);
    if (it != law.end()) est += c * it->second;
  }
  return est;
}

// A profile of the shape the estimation guarantee speaks about: main player
// i has s-mass delta^i + eta_i with |eta_i| <= lambda, split arbitrarily
// between s1 and s2, remainder on t; Q and R mix inside their own pairs.
inline MixedProfile sample_conforming_profile(int n, Sampler& rng, const Rational& lambda,
                                              unsigned bits = 24) {
  Rational delta = Rational(1, 1L << n);
  MixedProfile p;
  p.x.assign(n + 2, std::vector<Rational>(strat7::count, Rational(0)));
  for (int i = 0; i < n; ++i) {
    Rational total = pow(delta, i + 1) + rng.in(-lambda, lambda, bits);
    Rational share = rng.unit(bits);
    p.x[i][strat7::s1] = total * share;
    p.x[i][strat7::s2] = total * (Rational(1) - share);
    p.x[i][strat7::t] = Rational(1) - total;
  }
  Rational y = rng.unit(bits), z = rng.unit(bits);
  p.x[n][strat7::q1] = y;
  p.x[n][strat7::q2] = Rational(1) - y;
  p.x[n + 1][strat7::r1] = z;
  p.x[n + 1][strat7::r2] = Rational(1) - z;
  return p;
}

struct CalibrationRow {
  int ell = 0, r = 0;
  Rational denom;        // r^2 delta^{r+1}
  Rational max_ratio_s1; // max |estimate - x_{r,1}| / denom over the trials
  Rational max_ratio_s2;
};

// Measures the hidden constants of the estimation error bound empirically:
// for each (ell, r) pair, the worst |estimate - target| / (r^2 delta^{r+1})
// across `trials` conforming profiles. Deterministic given the seed.
inline std::vector<CalibrationRow> measure_error_constant(int n, int trials, std::uint64_t seed) {
  if (n < 2 || n > 4) throw std::invalid_argument("measure_error_constant: supports 2 <= n <= 4");
  if (trials == 0) return {};
  Sampler rng(seed);
  Rational lambda = Rational::pow2(-static_cast<long>(n) * n * n);
  Rational delta(1, 1L << n);
  HistogramSpace space(n + 1, strat7::count);

  std::vector<CalibrationRow> table;
  for (int ell = 1; ell <= n; ++ell)
    for (int r = 1; r <= n; ++r) {
      if (r == ell) continue;
      CalibrationRow row;
      row.ell = ell;
      row.r = r;
      row.denom = Rational(static_cast<long>(r) * r) * pow(delta, r + 1);
      table.push_back(row);
    }

  for (int t = 0; t < trials; ++t) {
    MixedProfile p = sample_conforming_profile(n, rng, lambda);
    std::vector<SeenDistribution> dists;
    for (int ell = 1; ell <= n; ++ell) dists.push_back(seen_distribution(n + 2, strat7::count, p, ell - 1));
    for (auto& row : table) {
      CoeffVector cv = build_coeffs(EstimationContext::make(n, row.ell, row.r));
      Rational e1 = abs(evaluate_estimate(cv.B, dists[row.ell - 1], space) - p.x[row.r - 1][strat7::s1]) / row.denom;
      Rational e2 = abs(evaluate_estimate(cv.C, dists[row.ell - 1], space) - p.x[row.r - 1][strat7::s2]) / row.denom;
      if (e1 > row.max_ratio_s1) row.max_ratio_s1 = e1;
      if (e2 > row.max_ratio_s2) row.max_ratio_s2 = e2;
    }
  }
  return table;
}

}  // namespace anongame
