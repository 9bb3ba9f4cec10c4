#pragma once

// Compiling a two-action polymatrix game into a near-radix anonymous game.
//
// Main player P_ell simulates rows 2*ell-1 and 2*ell of the [0,1] matrix A:
// the s1/s2 payoffs of the generalized radix game are perturbed, per seen
// histogram, by xi* times the estimation coefficients of every other main
// player's s1/s2 weight. In any eps-well-supported equilibrium the totals
// x_{ell,1}+x_{ell,2} lock onto delta^ell, the estimates become accurate,
// and the s1-vs-s2 preference of P_ell reproduces the preference between
// the two matrix rows, so normalizing each (x_{ell,1}, x_{ell,2}) pair
// recovers a (1/n)-well-supported equilibrium of A.
//
// Also here: the affine payoff normalization onto [0,1], the padding
// construction that inflates the player count while preserving verdicts,
// the decoder, and the approximate-to-well-supported mass-shift conversion.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "anongame/estimation.hpp"
#include "anongame/game.hpp"
#include "anongame/polymatrix.hpp"
#include "anongame/radix.hpp"
#include "anongame/rational.hpp"
#include "anongame/verify.hpp"

namespace anongame {

struct ReductionParams {
  int n = 0;
  long N = 0;
  Rational delta;     // 2^{-n}
  Rational lambda;    // 2^{-n^3}
  Rational xi;        // 2^{-n^4}
  Rational xi_star;   // 2^{-n^5}
  Rational epsilon;   // 2^{-n^6}
  Rational kappa;     // delta^{n(n+1)/2}
  Rational tau;       // (36 xi + 18 eps) / kappa, must be <= 1/2

  static ReductionParams from_n(int n) {
    if (n < 1) throw std::invalid_argument("ReductionParams: need n >= 1");
    ReductionParams p;
    p.n = n;
    p.N = 1L << n;
    long n2 = static_cast<long>(n) * n;
    p.delta = Rational::pow2(-n);
    p.lambda = Rational::pow2(-n2 * n);
    p.xi = Rational::pow2(-n2 * n2);
    p.xi_star = Rational::pow2(-n2 * n2 * n);
    p.epsilon = Rational::pow2(-n2 * n2 * n2);
    p.kappa = pow(p.delta, static_cast<long>(n) * (n + 1) / 2);
    p.tau = (Rational(36) * p.xi + Rational(18) * p.epsilon) / p.kappa;
    if (p.tau > Rational(1, 2))
      throw std::domain_error("ReductionParams: tau = (36 xi + 18 eps)/kappa exceeds 1/2 at n = " +
                              std::to_string(n));
    return p;
  }
};

struct ReductionBundle {
  ReductionParams params;
  PolymatrixGame A;
  AnonymousGame game;        // raw compiled game, payoffs in [-1, 3]
  AnonymousGame normalized;  // payoffs mapped onto [0, 1]
  Rational norm_factor;      // epsilon scale between the two, here 4
  std::vector<CoeffVector> coeffs;  // all (ell, j) estimation vectors, ell-major

  const CoeffVector& coeff(int ell, int j) const {
    for (const auto& cv : coeffs)
      if (cv.ell == ell && cv.r == j) return cv;
    throw std::out_of_range("ReductionBundle: no coefficient vector for this pair");
  }
};

struct NormalizedGame {
  AnonymousGame game;
  Rational factor;  // b - a; an eps-WSNE of the output is a factor*eps-WSNE of the input
};

inline NormalizedGame normalize(const AnonymousGame& g, const Rational& a, const Rational& b) {
  if (!(a < b)) throw std::invalid_argument("normalize: need a < b");
  NormalizedGame out{g, b - a};
  out.game.lo = Rational(0);
  out.game.hi = Rational(1);
  for (auto& per_player : out.game.payoffs)
    for (auto& per_strategy : per_player)
      for (auto& v : per_strategy) {
        if (v < a || v > b) throw std::domain_error("normalize: payoff outside [a, b]");
        v = (v - a) / out.factor;
      }
  return out;
}

inline ReductionBundle compile(const PolymatrixGame& A) {
  A.validate();
  int n = A.n;
  if (n > 4) throw std::length_error("compile: table guard allows n <= 4 only");
  ReductionBundle bundle;
  bundle.params = ReductionParams::from_n(n);  // rejects n = 1 (tau infeasible)
  bundle.A = A;
  bundle.game = build_generalized_radix(n, bundle.params.N);
  bundle.game.hi = Rational(3);

  for (int ell = 1; ell <= n; ++ell)
    for (int j = 1; j <= n; ++j)
      if (j != ell) bundle.coeffs.push_back(build_coeffs(EstimationContext::make(n, ell, j)));

  const HistogramSpace& space = bundle.game.space;
  for (int ell = 1; ell <= n; ++ell) {
    for (int sigma : {strat7::s1, strat7::s2}) {
      int row = sigma == strat7::s1 ? 2 * ell - 2 : 2 * ell - 1;
      for (std::size_t k = 0; k < space.size(); ++k) {
        const Histogram& h = space.at(k);
        std::pair<int, int> key{h[strat7::s1], h[strat7::s2]};
        Rational pert;
        for (int j = 1; j <= n; ++j) {
          if (j == ell) continue;
          const CoeffVector& cv = bundle.coeff(ell, j);
          Rational term;
          if (auto it = cv.B.find(key); it != cv.B.end()) term += A.A[row][2 * j - 2] * it->second;
          if (auto it = cv.C.find(key); it != cv.C.end()) term += A.A[row][2 * j - 1] * it->second;
          if (!term.is_zero()) pert += Rational::pow2(static_cast<long>(n) * j) * term;
        }
        if (!pert.is_zero()) bundle.game.payoffs[ell - 1][sigma][k] += bundle.params.xi_star * pert;
      }
    }
  }
  bundle.game.validate();

  NormalizedGame norm = normalize(bundle.game, Rational(-1), Rational(3));
  bundle.normalized = std::move(norm.game);
  bundle.norm_factor = norm.factor;
  return bundle;
}

// Smallest integer M with M^t_den >= n^t_num, i.e. ceil(n^{t_num/t_den}).
inline long padded_player_count(int n, long t_num, long t_den) {
  if (n < 1) throw std::invalid_argument("padded_player_count: need n >= 1");
  if (t_den <= 0 || t_num <= t_den) throw std::invalid_argument("padded_player_count: need exponent > 1");
  mpz_class power;
  mpz_pow_ui(power.get_mpz_t(), mpz_class(n).get_mpz_t(), static_cast<unsigned long>(t_num));
  mpz_class root;
  int exact = mpz_root(root.get_mpz_t(), power.get_mpz_t(), static_cast<unsigned long>(t_den));
  if (!exact) root += 1;
  if (root > 1000) throw std::length_error("padded_player_count: padded game too large");
  return root.get_si();
}

// Padded game on M = ceil(n^t) players: the new players always earn 1 on
// strategy 1 and 0 elsewhere, and the original players read their old
// payoffs through the shift map phi(k) = (k_1 - (M - n), k_2, ..., k_alpha)
// whenever the first count is large enough to account for all new players.
inline AnonymousGame pad(const AnonymousGame& g, long t_num, long t_den) {
  g.validate();
  long M = padded_player_count(g.n, t_num, t_den);
  std::size_t entries = static_cast<std::size_t>(M) * g.alpha * histogram_count(static_cast<int>(M) - 1, g.alpha);
  if (entries > 2'000'000) throw std::length_error("pad: payoff table guard exceeded");

  AnonymousGame out(static_cast<int>(M), g.alpha, std::min(g.lo, Rational(0)), std::max(g.hi, Rational(1)));
  long fill = M - g.n;
  for (std::size_t k = 0; k < out.space.size(); ++k) {
    const Histogram& h = out.space.at(k);
    bool reachable = h[0] >= fill;
    std::size_t orig = 0;
    if (reachable) {
      Histogram shifted = h;
      shifted[0] -= static_cast<int>(fill);
      orig = g.space.rank(shifted);
    }
    for (int p = 0; p < out.n; ++p)
      for (int b = 0; b < out.alpha; ++b)
        out.payoffs[p][b][k] = p < g.n ? (reachable ? g.payoffs[p][b][orig] : Rational(0))
                                       : Rational(b == 0 ? 1 : 0);
  }
  return out;
}

// Profile extension matching pad: original rows kept, new players pure on
// strategy 1.
inline MixedProfile pad_profile(const MixedProfile& x, long players) {
  MixedProfile out = x;
  if (players < static_cast<long>(x.x.size())) throw std::invalid_argument("pad_profile: fewer players than profile");
  std::size_t alpha = x.x.empty() ? 0 : x.x[0].size();
  std::vector<Rational> filler(alpha, Rational(0));
  if (!filler.empty()) filler[0] = Rational(1);
  out.x.resize(players, filler);
  return out;
}

// Normalize each main player's (s1, s2) pair into a two-action profile.
inline PolyProfile decode(const MixedProfile& x, const ReductionParams& params) {
  PolyProfile out;
  out.y.resize(2 * params.n);
  for (int ell = 1; ell <= params.n; ++ell) {
    const Rational& a = x.x.at(ell - 1)[strat7::s1];
    const Rational& b = x.x.at(ell - 1)[strat7::s2];
    Rational total = a + b;
    if (total.is_zero())
      throw std::domain_error("decode: player P_" + std::to_string(ell) +
                              " puts no mass on s1/s2 (scaling property violated)");
    out.y[2 * ell - 2] = a / total;
    out.y[2 * ell - 1] = b / total;
  }
  return out;
}

// Mass-shift conversion from approximate to well-supported equilibria: each
// player moves everything that trails their best reply by eps/2 or more
// onto that best reply. If the input regret is at most eps^2/(16 alpha n)
// the output is an eps-well-supported equilibrium.
inline MixedProfile approx_to_wsne(const AnonymousGame& g, const MixedProfile& x, const Rational& eps) {
  if (eps.sign() < 0) throw std::invalid_argument("approx_to_wsne: negative epsilon");
  MixedProfile out = x;
  Rational half = eps / Rational(2);
  for (int p = 0; p < g.n; ++p) {
    SeenDistribution dist = seen_distribution(g, x, p);
    std::vector<Rational> u(g.alpha);
    for (int b = 0; b < g.alpha; ++b) u[b] = expected_payoff(g, p, b, dist);
    int best = 0;
    for (int b = 1; b < g.alpha; ++b)
      if (u[b] > u[best]) best = b;
    Rational moved;
    for (int b = 0; b < g.alpha; ++b) {
      if (b == best || out.x[p][b].is_zero()) continue;
      if (u[best] >= u[b] + half) {
        moved += out.x[p][b];
        out.x[p][b] = Rational(0);
      }
    }
    out.x[p][best] += moved;
  }
  return out;
}

// Residual of the payoff decomposition for the compiled game: how far
// u_ell(sigma) is from the unperturbed radix payoff plus the xi*-scaled
// matrix row applied to the true s1/s2 weights.
struct DecompositionRow {
  int ell = 0;
  Rational residual_s1;
  Rational residual_s2;
};

inline DecompositionRow decomposition_residual(const ReductionBundle& bundle, const AnonymousGame& reference,
                                               const MixedProfile& x, int ell) {
  DecompositionRow row;
  row.ell = ell;
  SeenDistribution dist = seen_distribution(bundle.game, x, ell - 1);
  for (int sigma : {strat7::s1, strat7::s2}) {
    int arow = sigma == strat7::s1 ? 2 * ell - 2 : 2 * ell - 1;
    Rational form;
    for (int j = 1; j <= bundle.params.n; ++j) {
      if (j == ell) continue;
      form += Rational::pow2(static_cast<long>(bundle.params.n) * j) *
              (bundle.A.A[arow][2 * j - 2] * x.x[j - 1][strat7::s1] +
               bundle.A.A[arow][2 * j - 1] * x.x[j - 1][strat7::s2]);
    }
    Rational res = abs(expected_payoff(bundle.game, ell - 1, sigma, dist) -
                       expected_payoff(reference, ell - 1, sigma, dist) - bundle.params.xi_star * form);
    (sigma == strat7::s1 ? row.residual_s1 : row.residual_s2) = res;
  }
  return row;
}

// Worst decomposition residual over `trials` conforming profiles, as a
// multiple of n^3 xi* delta. Deterministic given the seed.
inline Rational measure_decomposition_constant(const ReductionBundle& bundle, int trials, std::uint64_t seed) {
  Sampler rng(seed);
  int n = bundle.params.n;
  AnonymousGame reference = build_generalized_radix(n, bundle.params.N);
  Rational denom = Rational(static_cast<long>(n) * n * n) * bundle.params.xi_star * bundle.params.delta;
  Rational worst;
  for (int t = 0; t < trials; ++t) {
    MixedProfile x = sample_conforming_profile(n, rng, bundle.params.lambda);
    for (int ell = 1; ell <= n; ++ell) {
      DecompositionRow row = decomposition_residual(bundle, reference, x, ell);
      worst = std::max({worst, row.residual_s1 / denom, row.residual_s2 / denom});
    }
  }
  return worst;
}

}  // namespace anongame
