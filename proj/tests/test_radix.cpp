#include <catch2/catch_amalgamated.hpp>

#include "anongame/radix.hpp"
#include "anongame/rng.hpp"
#include "anongame/verify.hpp"

using namespace anongame;

namespace {

// Random profile supported on the interested sets with prescribed s-mass
// x_i on the main players, q1-mass y and r1-mass z.
MixedProfile roster6_profile(int n, const std::vector<Rational>& x, const Rational& y, const Rational& z) {
  MixedProfile p;
  p.x.assign(n + 2, std::vector<Rational>(strat6::count, Rational(0)));
  for (int i = 0; i < n; ++i) {
    p.x[i][strat6::s] = x[i];
    p.x[i][strat6::t] = Rational(1) - x[i];
  }
  p.x[n][strat6::q1] = y;
  p.x[n][strat6::q2] = Rational(1) - y;
  p.x[n + 1][strat6::r1] = z;
  p.x[n + 1][strat6::r2] = Rational(1) - z;
  return p;
}

}  // namespace

TEST_CASE("payoff table entries") {
  // (1,2): seeing nobody on s means k_s = n-1 = 0, so s pays delta + kappa = 1.
  auto g1 = build_radix(1, 2);
  Histogram none_on_s{0, 0, 1, 0, 1, 0};  // Q on q1, R on r1
  CHECK(g1.payoff(0, strat6::s, none_on_s) == Rational(1));
  Histogram q_on_s{1, 0, 0, 0, 1, 0};  // an aux player drifts onto s: k_s = 1 != n-1
  CHECK(g1.payoff(0, strat6::s, q_on_s) == Rational(1, 2));  // kappa only

  // (2,4): P_2 on s at k_s = 1 pays delta^2 + delta^3 = 1/16 + 1/64 = 5/64.
  auto g2 = build_radix(2, 4);
  Histogram one_on_s{1, 0, 1, 0, 1, 0};
  CHECK(g2.payoff(1, strat6::s, one_on_s) == Rational(5, 64));
  Histogram zero_on_s{0, 1, 1, 0, 1, 0};
  CHECK(g2.payoff(1, strat6::s, zero_on_s) == Rational(1, 64));  // kappa

  // Q on q2 pays 1 exactly when k_r1 = 1.
  for (auto [n, N] : {std::pair{1, 2}, {2, 4}, {3, 8}}) {
    auto g = build_radix(n, N);
    for (std::size_t k = 0; k < g.space.size(); ++k) {
      const auto& h = g.space.at(k);
      CHECK(g.payoffs[n][strat6::q2][k] == (h[strat6::r1] == 1 ? Rational(1) : Rational(0)));
    }
  }

  // uninterested strategies pay -1 everywhere
  auto g = build_radix(2, 4);
  for (std::size_t k = 0; k < g.space.size(); ++k) {
    CHECK(g.payoffs[0][strat6::q1][k] == Rational(-1));
    CHECK(g.payoffs[2][strat6::s][k] == Rational(-1));   // Q on s
    CHECK(g.payoffs[3][strat6::t][k] == Rational(-1));   // R on t
  }
  CHECK_NOTHROW(g.validate());  // all payoffs inside the declared [-1, 2]
}

TEST_CASE("closed-form expected payoffs on interested supports") {
  // u_i(s) = delta^i prod_{j!=i} x_j + kappa, u_i(t) = 2z,
  // u_Q(q1) = prod_j x_j, u_Q(q2) = z, u_R(r1) = y, u_R(r2) = 1 - y.
  Sampler rng(60601);
  for (auto [n, N] : {std::pair{1, 2}, {2, 4}, {3, 4}}) {
    auto g = build_radix(n, N);
    RadixParams pr(n, N);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<Rational> x;
      for (int i = 0; i < n; ++i) x.push_back(rng.unit(10));
      Rational y = rng.unit(10), z = rng.unit(10);
      auto p = roster6_profile(n, x, y, z);

      Rational prod_all(1);
      for (const auto& xi : x) prod_all *= xi;
      for (int i = 0; i < n; ++i) {
        Rational prod_others(1);
        for (int j = 0; j < n; ++j)
          if (j != i) prod_others *= x[j];
        CHECK(expected_payoff(g, p, i, strat6::s) == pow(pr.delta, i + 1) * prod_others + pr.kappa);
        CHECK(expected_payoff(g, p, i, strat6::t) == Rational(2) * z);
      }
      CHECK(expected_payoff(g, p, n, strat6::q1) == prod_all);
      CHECK(expected_payoff(g, p, n, strat6::q2) == z);
      CHECK(expected_payoff(g, p, n + 1, strat6::r1) == y);
      CHECK(expected_payoff(g, p, n + 1, strat6::r2) == Rational(1) - y);
    }
  }

  // two hand-worked spot values
  auto g12 = build_radix(1, 2);
  auto p12 = roster6_profile(1, {Rational(1, 2)}, Rational(1, 2), Rational(1, 2));
  CHECK(expected_payoff(g12, p12, 0, strat6::s) == Rational(1));
  auto g24 = build_radix(2, 4);
  auto p24 = roster6_profile(2, {Rational(1, 4), Rational(1, 16)}, Rational(1, 2), Rational(1, 4));
  CHECK(expected_payoff(g24, p24, 1, strat6::t) == Rational(1, 2));
}

TEST_CASE("canonical equilibrium values") {
  auto p12 = canonical_radix_ne(1, 2);
  CHECK(p12.x[0][strat6::s] == Rational(1, 2));
  CHECK(p12.x[1][strat6::q1] == Rational(1, 2));
  CHECK(p12.x[2][strat6::r1] == Rational(1, 2));

  auto p22 = canonical_radix_ne(2, 2);
  CHECK(p22.x[0][strat6::s] == Rational(1, 2));
  CHECK(p22.x[1][strat6::s] == Rational(1, 4));
  CHECK(p22.x[3][strat6::r1] == Rational(1, 8));

  // kappa = delta^6 at n=3: (1/4)^6 = 1/4096
  auto p34 = canonical_radix_ne(3, 4);
  CHECK(p34.x[0][strat6::s] == Rational(1, 4));
  CHECK(p34.x[1][strat6::s] == Rational(1, 16));
  CHECK(p34.x[2][strat6::s] == Rational(1, 64));
  CHECK(p34.x[4][strat6::r1] == Rational(1, 4096));

  // every interested strategy ties exactly at the canonical point
  for (auto [n, N] : {std::pair{2, 4}, {3, 2}}) {
    auto g = build_radix(n, N);
    auto p = canonical_radix_ne(n, N);
    for (int pl = 0; pl < n + 2; ++pl) {
      auto d = seen_distribution(g, p, pl);
      Rational u_first;
      bool first = true;
      for (int b = 0; b < strat6::count; ++b) {
        if (p.x[pl][b].is_zero()) continue;
        Rational u = expected_payoff(g, pl, b, d);
        if (first) { u_first = u; first = false; }
        else CHECK(u == u_first);
      }
    }
  }

  // P_1's mixed payoff at n=1, N=2 is exactly 1
  auto g = build_radix(1, 2);
  CHECK(expected_payoff_mixed(g, canonical_radix_ne(1, 2), 0) == Rational(1));
}

TEST_CASE("canonical equilibrium passes the exact verifier") {
  for (int n : {1, 2, 3}) {
    for (long N : {2L, 4L, 8L}) {
      auto g = build_radix(n, N);
      auto cert = verify_equilibrium(g, canonical_radix_ne(n, N), Rational(0), VerifyMode::well_supported);
      INFO("n=" << n << " N=" << N);
      CHECK(cert.accepted);
    }
  }
}

TEST_CASE("perturbing the canonical point is detected") {
  // Halving P_1's s-mass in G(2,4) starves the players watching the s-count.
  auto g = build_radix(2, 4);
  auto p = canonical_radix_ne(2, 4);
  p.x[0][strat6::s] = Rational(1, 8);
  p.x[0][strat6::t] = Rational(7, 8);
  auto cert = verify_equilibrium(g, p, Rational(0), VerifyMode::well_supported);
  CHECK_FALSE(cert.accepted);
  REQUIRE_FALSE(cert.witnesses.empty());
  bool named_dependent = false;
  for (const auto& w : cert.witnesses)
    if (w.player == 1 || w.player == 2) named_dependent = true;  // P_2 or Q
  CHECK(named_dependent);
}

TEST_CASE("generalized game merges the split strategy") {
  for (auto [n, N] : {std::pair{2, 4}, {3, 2}}) {
    auto g6 = build_radix(n, N);
    auto g7 = build_generalized_radix(n, N);
    CHECK(g7.alpha == 7);
    CHECK(g7.n == n + 2);

    // every 7-roster histogram maps to the merged 6-roster histogram
    for (int p = 0; p < g7.n; ++p)
      for (std::size_t k = 0; k < g7.space.size(); ++k) {
        const auto& h = g7.space.at(k);
        Histogram merged{h[strat7::s1] + h[strat7::s2], h[strat7::t], h[strat7::q1],
                         h[strat7::q2], h[strat7::r1], h[strat7::r2]};
        CHECK(g7.payoffs[p][strat7::s1][k] == g6.payoff(p, strat6::s, merged));
        CHECK(g7.payoffs[p][strat7::s2][k] == g6.payoff(p, strat6::s, merged));
        CHECK(g7.payoffs[p][strat7::t][k] == g6.payoff(p, strat6::t, merged));
        CHECK(g7.payoffs[p][strat7::q1][k] == g6.payoff(p, strat6::q1, merged));
        CHECK(g7.payoffs[p][strat7::q2][k] == g6.payoff(p, strat6::q2, merged));
        CHECK(g7.payoffs[p][strat7::r1][k] == g6.payoff(p, strat6::r1, merged));
        CHECK(g7.payoffs[p][strat7::r2][k] == g6.payoff(p, strat6::r2, merged));
      }
  }

  // moving mass between s1 and s2 changes nothing anyone can see
  auto g = build_generalized_radix(2, 4);
  auto a = canonical_generalized_ne(2, 4);
  auto b = a;
  b.x[0][strat7::s2] = b.x[0][strat7::s1];
  b.x[0][strat7::s1] = Rational(0);
  for (int pl = 1; pl < 4; ++pl)
    for (int s = 0; s < 7; ++s)
      CHECK(expected_payoff(g, a, pl, s) == expected_payoff(g, b, pl, s));
}

TEST_CASE("generalized canonical equilibrium verifies, any split") {
  Sampler rng(11);
  for (auto [n, N] : {std::pair{1, 2}, {2, 4}, {3, 8}}) {
    auto g = build_generalized_radix(n, N);
    auto p = canonical_generalized_ne(n, N);
    CHECK(verify_equilibrium(g, p, Rational(0), VerifyMode::well_supported).accepted);

    // split the s-mass arbitrarily: still an exact equilibrium
    for (int i = 0; i < n; ++i) {
      Rational total = p.x[i][strat7::s1];
      Rational share = rng.unit(8);
      p.x[i][strat7::s1] = total * share;
      p.x[i][strat7::s2] = total * (Rational(1) - share);
    }
    CHECK(verify_equilibrium(g, p, Rational(0), VerifyMode::well_supported).accepted);
  }
}

TEST_CASE("closeness distance") {
  auto g = build_generalized_radix(2, 4);
  auto h = g;
  CHECK(closeness_distance(g, h) == Rational(0));
  h.payoffs[1][strat7::t][3] += Rational(1, 8);
  CHECK(closeness_distance(g, h) == Rational(1, 8));
  CHECK_THROWS_AS(closeness_distance(g, build_generalized_radix(3, 4)), std::invalid_argument);
}

TEST_CASE("scaling check") {
  RadixParams pr(2, 4);
  auto p = canonical_generalized_ne(2, 4);
  auto rep = check_scaling(p, pr, Rational(0));
  CHECK(rep.ok);
  CHECK(rep.slack == std::vector<Rational>{Rational(0), Rational(0)});

  // x_{1,s1}+x_{1,s2} = delta(1+2 tau) violates the tau bound with slack 2 tau delta
  Rational tau(1, 10), delta(1, 4);
  auto q = canonical_generalized_ne(2, 4);
  q.x[0][strat7::s1] = delta * (Rational(1) + Rational(2) * tau);
  q.x[0][strat7::t] = Rational(1) - q.x[0][strat7::s1];
  rep = check_scaling(q, pr, tau);
  CHECK_FALSE(rep.ok);
  CHECK(rep.slack[0] == Rational(2) * tau * delta);
  CHECK(rep.slack[1] == Rational(0));

  // totals delta^i +- lambda pass whenever tau delta^i >= lambda
  Sampler rng(404);
  Rational lambda = Rational::pow2(-8);
  Rational tau2 = lambda / pow(delta, 2);  // tau delta^i >= lambda for i <= 2
  auto r = canonical_generalized_ne(2, 4);
  for (int i = 0; i < 2; ++i) {
    Rational eta = rng.in(-lambda, lambda, 8);
    r.x[i][strat7::s1] = pow(delta, i + 1) + eta;
    r.x[i][strat7::t] = Rational(1) - r.x[i][strat7::s1];
  }
  CHECK(check_scaling(r, pr, tau2).ok);
}

TEST_CASE("interested sets") {
  CHECK(interested_set(0, 2) == std::set<int>{strat7::s1, strat7::s2, strat7::t});
  CHECK(interested_set(2, 2) == std::set<int>{strat7::q1, strat7::q2});
  CHECK(interested_set(3, 2) == std::set<int>{strat7::r1, strat7::r2});
  CHECK(respects_interested_sets(canonical_generalized_ne(2, 4), 2));
  auto p = canonical_generalized_ne(2, 4);
  p.x[0][strat7::q1] = p.x[0][strat7::t];
  p.x[0][strat7::t] = Rational(0);
  CHECK_FALSE(respects_interested_sets(p, 2));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(build_radix(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_radix(2, 1), std::invalid_argument);
  RadixParams pr(3, 4);
  CHECK(pr.delta == Rational(1, 4));
  CHECK(pr.kappa == Rational(1, 4096));
}
