#pragma once

// Deterministic local search for well-supported equilibria of near-radix
// games on the 7-strategy roster.
//
// The search state is a RosterPoint: each main player's s-mass total and
// its s1 share, plus Q's q1 weight y and R's r1 weight z. With supports
// confined to the interested sets, Q's q1-vs-q2 payoff gap is affine in z
// and R's r1-vs-r2 gap is affine in y, so both aux players are kept exactly
// indifferent by affine root-finding at every step. The remaining unknowns
// are the n totals; their s-vs-t payoff gaps F_ell are driven to zero by a
// damped Newton iteration whose Jacobian comes from exact forward
// differences. Iterates are floored onto a dyadic grid fine enough not to
// disturb the target tolerance, which keeps rational bit growth linear.
//
// Pure s1/s2 side choices are revisited between rounds: if the inactive s
// strategy beats the active one by more than eps/2, the side flips and the
// Newton loop reruns. The final profile is always judged by the exact
// verifier; the report carries its certificate.

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "anongame/game.hpp"
#include "anongame/polymatrix.hpp"
#include "anongame/radix.hpp"
#include "anongame/rational.hpp"
#include "anongame/reduction.hpp"
#include "anongame/verify.hpp"

namespace anongame {

struct RosterPoint {
  std::vector<Rational> total;  // s1+s2 mass per main player
  std::vector<Rational> ratio;  // share of the total on s1
  Rational y;                   // Q's q1 weight
  Rational z;                   // R's r1 weight
};

inline MixedProfile roster_profile(const RosterPoint& pt) {
  int n = static_cast<int>(pt.total.size());
  MixedProfile p;
  p.x.assign(n + 2, std::vector<Rational>(strat7::count, Rational(0)));
  for (int i = 0; i < n; ++i) {
    p.x[i][strat7::s1] = pt.total[i] * pt.ratio[i];
    p.x[i][strat7::s2] = pt.total[i] * (Rational(1) - pt.ratio[i]);
    p.x[i][strat7::t] = Rational(1) - pt.total[i];
  }
  p.x[n][strat7::q1] = pt.y;
  p.x[n][strat7::q2] = Rational(1) - pt.y;
  p.x[n + 1][strat7::r1] = pt.z;
  p.x[n + 1][strat7::r2] = Rational(1) - pt.z;
  return p;
}

struct RefineOptions {
  int max_iters = 48;
  int max_flips = 8;
  long grid_bits = 0;  // 0 = derive from eps (denominator bits + 96)
  bool flip_pure_sides = true;
};

struct RefineReport {
  bool success = false;
  RosterPoint point;
  MixedProfile profile;
  EquilibriumCertificate cert;
  Rational residual;            // max main-player |s - t| payoff gap at exit
  std::vector<Rational> gaps;   // signed per-main gaps F_ell
  int iters = 0;
  int flips = 0;
};

namespace detail {

// Joint histogram distribution of exactly these players.
inline SeenDistribution histogram_law(int alpha, std::vector<std::vector<Rational>> rows) {
  int k = static_cast<int>(rows.size());
  MixedProfile p;
  p.x = std::move(rows);
  p.x.emplace_back(alpha, Rational(0));
  p.x.back()[0] = Rational(1);  // dummy observer, excluded from the law
  return seen_distribution(k + 1, alpha, p, k);
}

// Expected payoff of player p for strategy b when the seen crowd is the
// given law plus one extra player pinned to strategy `extra`.
inline Rational payoff_against(const AnonymousGame& g, int p, int b, const HistogramSpace& law_space,
                               const SeenDistribution& law, int extra) {
  Rational u;
  for (std::size_t k = 0; k < law_space.size(); ++k) {
    if (law.pr[k].is_zero()) continue;
    Histogram h = law_space.at(k);
    h[extra] += 1;
    u += g.payoff(p, b, h) * law.pr[k];
  }
  return u;
}

struct RosterEval {
  Rational y, z;                      // tied aux weights
  Rational aux_residual;              // worst aux indifference gap left over
  std::vector<Rational> u_s1, u_s2, u_t;
  std::vector<Rational> F;            // active-side s payoff minus t payoff
  Rational residual;                  // max |F|
};

// Root of the affine gap g(v) = gap_at_0 + (gap_at_1 - gap_at_0) v, clamped
// to [0,1]; degenerate gaps keep the current value.
inline Rational affine_tie(const Rational& gap0, const Rational& gap1, const Rational& current) {
  Rational slope = gap1 - gap0;
  if (slope.is_zero()) return current;
  Rational root = -gap0 / slope;
  if (root.sign() < 0) return Rational(0);
  if (root > Rational(1)) return Rational(1);
  return root;
}

inline RosterEval evaluate_roster(const AnonymousGame& g, RosterPoint& pt, long grid_bits) {
  int n = static_cast<int>(pt.total.size());
  RosterEval ev;

  std::vector<std::vector<Rational>> mains(n, std::vector<Rational>(strat7::count, Rational(0)));
  for (int i = 0; i < n; ++i) {
    mains[i][strat7::s1] = pt.total[i] * pt.ratio[i];
    mains[i][strat7::s2] = pt.total[i] * (Rational(1) - pt.ratio[i]);
    mains[i][strat7::t] = Rational(1) - pt.total[i];
  }
  HistogramSpace law_space(n, g.alpha);
  SeenDistribution law = histogram_law(g.alpha, mains);

  // R is kept indifferent between r1 and r2 by tuning y; its payoff is
  // affine in y because only Q's row depends on it.
  auto r_gap_with_Q_on = [&](int qside) {
    return payoff_against(g, n + 1, strat7::r1, law_space, law, qside) -
           payoff_against(g, n + 1, strat7::r2, law_space, law, qside);
  };
  Rational rg1 = r_gap_with_Q_on(strat7::q1), rg2 = r_gap_with_Q_on(strat7::q2);
  pt.y = floor_dyadic(affine_tie(rg2, rg1, pt.y), grid_bits);

  // Q likewise via z through R's row.
  auto q_gap_with_R_on = [&](int rside) {
    return payoff_against(g, n, strat7::q1, law_space, law, rside) -
           payoff_against(g, n, strat7::q2, law_space, law, rside);
  };
  Rational qg1 = q_gap_with_R_on(strat7::r1), qg2 = q_gap_with_R_on(strat7::r2);
  pt.z = floor_dyadic(affine_tie(qg2, qg1, pt.z), grid_bits);

  ev.y = pt.y;
  ev.z = pt.z;
  ev.aux_residual = std::max(abs(rg2 + (rg1 - rg2) * pt.y), abs(qg2 + (qg1 - qg2) * pt.z));

  std::vector<Rational> q_row(strat7::count, Rational(0)), r_row(strat7::count, Rational(0));
  q_row[strat7::q1] = pt.y;
  q_row[strat7::q2] = Rational(1) - pt.y;
  r_row[strat7::r1] = pt.z;
  r_row[strat7::r2] = Rational(1) - pt.z;

  ev.u_s1.resize(n);
  ev.u_s2.resize(n);
  ev.u_t.resize(n);
  ev.F.resize(n);
  for (int ell = 0; ell < n; ++ell) {
    std::vector<std::vector<Rational>> others;
    for (int i = 0; i < n; ++i)
      if (i != ell) others.push_back(mains[i]);
    others.push_back(q_row);
    others.push_back(r_row);
    SeenDistribution dist = histogram_law(g.alpha, std::move(others));
    ev.u_s1[ell] = expected_payoff(g, ell, strat7::s1, dist);
    ev.u_s2[ell] = expected_payoff(g, ell, strat7::s2, dist);
    ev.u_t[ell] = expected_payoff(g, ell, strat7::t, dist);
    Rational active = pt.ratio[ell] * ev.u_s1[ell] + (Rational(1) - pt.ratio[ell]) * ev.u_s2[ell];
    ev.F[ell] = active - ev.u_t[ell];
    Rational mag = abs(ev.F[ell]);
    if (mag > ev.residual) ev.residual = mag;
  }
  return ev;
}

}  // namespace detail

// Newton refinement of the totals inside [lo, hi], aux players tied, sides
// optionally flipped, final profile judged by verify_equilibrium at eps.
inline RefineReport refine_roster(const AnonymousGame& g, RosterPoint pt, const std::vector<Rational>& lo,
                                  const std::vector<Rational>& hi, const Rational& eps,
                                  const RefineOptions& opt = {}) {
  int n = static_cast<int>(pt.total.size());
  if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n)
    throw std::invalid_argument("refine_roster: window shape mismatch");
  long grid_bits = opt.grid_bits > 0 ? opt.grid_bits : bit_size(eps) + 96;
  Rational target = eps / Rational(4);

  RefineReport rep;
  rep.flips = 0;
  detail::RosterEval ev;
  std::vector<Rational> step(n);
  for (int i = 0; i < n; ++i) {
    pt.total[i] = floor_dyadic(pt.total[i], grid_bits);
    step[i] = pt.total[i] / Rational(1024);
    if (step[i].is_zero()) step[i] = Rational::pow2(-static_cast<long>(grid_bits) / 2);
  }

  for (;;) {
    ev = detail::evaluate_roster(g, pt, grid_bits);
    // Newton loop on the totals
    while (ev.residual > target && rep.iters < opt.max_iters) {
      ++rep.iters;
      std::vector<std::vector<Rational>> J(n, std::vector<Rational>(n));
      for (int j = 0; j < n; ++j) {
        RosterPoint probe = pt;
        probe.total[j] += step[j];
        detail::RosterEval pev = detail::evaluate_roster(g, probe, grid_bits);
        for (int i = 0; i < n; ++i) J[i][j] = (pev.F[i] - ev.F[i]) / step[j];
      }
      auto tame_step = [&](int i, Rational s) {
        // keep probe offsets dyadic and window-sized so their evals stay cheap
        if (s > hi[i] - lo[i]) s = hi[i] - lo[i];
        s = floor_dyadic(s, grid_bits);
        if (s.is_zero()) s = Rational::pow2(-grid_bits);
        return s;
      };
      std::vector<Rational> rhs(n);
      for (int i = 0; i < n; ++i) rhs[i] = -ev.F[i];
      auto delta = detail::solve_linear(J, rhs);
      if (!delta) {
        // singular Jacobian: fall back to independent per-player steps
        delta.emplace(n);
        for (int i = 0; i < n; ++i)
          (*delta)[i] = J[i][i].is_zero() ? Rational(0) : -ev.F[i] / J[i][i];
      }
      bool moved = false;
      for (int i = 0; i < n; ++i) {
        Rational next = pt.total[i] + (*delta)[i];
        if (next < lo[i]) next = lo[i];
        if (next > hi[i]) next = hi[i];
        next = floor_dyadic(next, grid_bits);
        if (next != pt.total[i]) moved = true;
        if (!(*delta)[i].is_zero()) step[i] = tame_step(i, abs((*delta)[i]) / Rational(8));
        pt.total[i] = next;
      }
      if (!moved) break;
      ev = detail::evaluate_roster(g, pt, grid_bits);
    }

    // revisit pure side choices against the converged payoffs
    if (!opt.flip_pure_sides || rep.flips >= opt.max_flips) break;
    Rational margin = eps / Rational(2);
    bool flipped = false;
    for (int i = 0; i < n; ++i) {
      if (pt.ratio[i] == Rational(1) && ev.u_s2[i] > ev.u_s1[i] + margin) {
        pt.ratio[i] = Rational(0);
        flipped = true;
      } else if (pt.ratio[i].is_zero() && ev.u_s1[i] > ev.u_s2[i] + margin) {
        pt.ratio[i] = Rational(1);
        flipped = true;
      }
    }
    if (!flipped) break;
    ++rep.flips;
  }

  rep.point = pt;
  rep.profile = roster_profile(pt);
  rep.gaps = ev.F;
  rep.residual = ev.residual;
  rep.cert = verify_equilibrium(g, rep.profile, eps, VerifyMode::well_supported);
  rep.success = rep.cert.accepted;
  return rep;
}

struct SearchReport {
  bool success = false;
  bool poly_solved = false;
  PolyProfile poly_seed;        // polymatrix solution the lift started from
  PolyProfile decoded;          // decode of the accepted profile, on success
  MixedProfile profile;         // accepted profile, or best attempt
  EquilibriumCertificate cert;
  Rational residual;
  std::vector<Rational> gaps;
  int iters = 0;
  int flips = 0;
};

// Lift an exact polymatrix solution of A into the compiled game and refine
// the totals within the lambda window around delta^ell until the exact
// verifier accepts, or report the best attempt.
inline SearchReport search_wsne_GA(const ReductionBundle& bundle, const RefineOptions& opt = {}) {
  const ReductionParams& params = bundle.params;
  int n = params.n;
  if (n > 3) throw std::invalid_argument("search_wsne_GA: supports n <= 3 only");

  SearchReport rep;
  RosterPoint pt;
  pt.total.resize(n);
  pt.ratio.assign(n, Rational(1));
  try {
    rep.poly_seed = solve_poly_small(bundle.A, Rational(1, n));
    rep.poly_solved = true;
    for (int ell = 1; ell <= n; ++ell) pt.ratio[ell - 1] = rep.poly_seed.y[2 * ell - 2];
  } catch (const std::runtime_error&) {
    // no seed found; continue from the all-s1 lift and let the verifier judge
  }
  std::vector<Rational> lo(n), hi(n);
  for (int ell = 1; ell <= n; ++ell) {
    pt.total[ell - 1] = pow(params.delta, ell);
    lo[ell - 1] = pt.total[ell - 1] - params.lambda;
    hi[ell - 1] = pt.total[ell - 1] + params.lambda;
  }
  pt.y = Rational(1, 2);
  pt.z = params.kappa;

  RefineReport r = refine_roster(bundle.game, std::move(pt), lo, hi, params.epsilon, opt);
  rep.success = r.success;
  rep.profile = std::move(r.profile);
  rep.cert = std::move(r.cert);
  rep.residual = std::move(r.residual);
  rep.gaps = std::move(r.gaps);
  rep.iters = r.iters;
  rep.flips = r.flips;
  if (rep.success) rep.decoded = decode(rep.profile, params);
  return rep;
}

// Same engine pointed at an arbitrary near-radix game (e.g. a noise-
// perturbed generalized radix game), seeded from the canonical profile and
// searched in a window much wider than the scaling bound certifies.
inline RefineReport search_wsne_near_radix(const AnonymousGame& g, const RadixParams& params,
                                           const Rational& eps, const RefineOptions& opt = {}) {
  int n = params.n;
  RosterPoint pt;
  pt.total.resize(n);
  pt.ratio.assign(n, Rational(1));
  std::vector<Rational> lo(n), hi(n);
  for (int ell = 1; ell <= n; ++ell) {
    Rational base = pow(params.delta, ell);
    pt.total[ell - 1] = base;
    lo[ell - 1] = base / Rational(2);
    hi[ell - 1] = base * Rational(3, 2);
  }
  pt.y = Rational(1, 2);
  pt.z = params.kappa;
  return refine_roster(g, std::move(pt), lo, hi, eps, opt);
}

}  // namespace anongame
