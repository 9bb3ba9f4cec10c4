#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "anongame/estimation.hpp"
#include "anongame/histogram.hpp"
#include "anongame/rng.hpp"

using namespace anongame;

namespace {

// Hand-built context for pure-algebra checks where delta and L are chosen
// freely instead of being pinned to N = 2^n.
EstimationContext raw_context(const Rational& delta, std::vector<int> L) {
  EstimationContext c;
  c.delta = delta;
  c.L = std::move(L);
  c.m = static_cast<int>(c.L.size());
  c.hL = Rational(1);
  for (int i : c.L) c.hL *= pow(delta, i);
  return c;
}

// Roster profile with prescribed s1-weights for the main players; everything
// else parked on t, and the aux players on their own pairs.
MixedProfile s1_profile(int players, const std::vector<std::pair<int, Rational>>& s1) {
  MixedProfile p;
  p.x.assign(players, std::vector<Rational>(strat7::count, Rational(0)));
  for (auto& row : p.x) row[strat7::t] = Rational(1);
  for (const auto& [i, v] : s1) {
    p.x[i - 1][strat7::s1] = v;
    p.x[i - 1][strat7::t] = Rational(1) - v;
  }
  return p;
}

// Left-hand side of the subset-split identity: sum over the ways m - j of
// the players in L sit on s1 while the rest contribute their slack.
Rational split_sum_oracle(int j, const EstimationContext& ctx, const MixedProfile& profile) {
  Rational sum;
  for (std::uint32_t mask = 0; mask < (1u << ctx.m); ++mask) {
    if (__builtin_popcount(mask) != ctx.m - j) continue;
    Rational term(1);
    for (int idx = 0; idx < ctx.m; ++idx) {
      int i = ctx.L[idx];
      const Rational& x = profile.x[i - 1][strat7::s1];
      term *= (mask >> idx & 1) ? x : pow(ctx.delta, i) - x;
    }
    sum += term;
  }
  return sum;
}

// Right-hand side: alternating binomial combination of the P_d values.
Rational split_sum_via_P(int j, const EstimationContext& ctx, const MixedProfile& profile) {
  Rational sum;
  for (int i = 0; i <= j; ++i) {
    Rational term = Rational(static_cast<long>(binomial(ctx.m - j + i, i))) *
                    poly_P(ctx.m - j + i, ctx, profile);
    sum += (i % 2 == 0) ? term : -term;
  }
  return sum;
}

}  // namespace

TEST_CASE("context construction") {
  auto c = EstimationContext::make(3, 3, 2);
  CHECK(c.N == 8);
  CHECK(c.delta == Rational(1, 8));
  CHECK(c.lambda == Rational::pow2(-27));
  CHECK(c.L == std::vector<int>{1, 2});
  CHECK(c.m == 2);
  CHECK(c.hL == Rational(1, 512));

  // ell below r just drops out of L.
  auto skip = EstimationContext::make(3, 1, 3);
  CHECK(skip.L == std::vector<int>{2, 3});
  CHECK(skip.m == 2);
  CHECK(skip.hL == pow(Rational(1, 8), 5));

  auto single = EstimationContext::make(3, 2, 1);
  CHECK(single.L == std::vector<int>{1});
  CHECK(single.hL == Rational(1, 8));

  // larger n is allowed for the algebraic layer even though the calibration
  // harness caps out earlier
  auto big = EstimationContext::make(5, 5, 4);
  CHECK(big.L == std::vector<int>{1, 2, 3, 4});
  CHECK(big.m == 4);

  CHECK_THROWS_AS(EstimationContext::make(1, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(EstimationContext::make(3, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(EstimationContext::make(3, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(EstimationContext::make(3, 2, 5), std::invalid_argument);
}

TEST_CASE("subset polynomial edge degrees and a worked value") {
  Sampler rng(401);
  for (auto [n, ell, r] : {std::tuple{3, 3, 2}, {4, 1, 4}, {5, 5, 4}}) {
    auto ctx = EstimationContext::make(n, ell, r);
    auto p = sample_conforming_profile(n, rng, ctx.lambda);
    CHECK(poly_P(0, ctx, p) == ctx.hL);
    Rational prod(1);
    for (int i : ctx.L) prod *= p.x[i - 1][strat7::s1];
    CHECK(poly_P(ctx.m, ctx, p) == prod);
    CHECK_THROWS_AS(poly_P(-1, ctx, p), std::invalid_argument);
    CHECK_THROWS_AS(poly_P(ctx.m + 1, ctx, p), std::invalid_argument);
  }

  // delta = 1/4, L = {1,2}, x_{1,s1} = 1/4, x_{2,s1} = 1/16:
  // P_1 = x_1 delta^2 + x_2 delta = 1/64 + 1/64 = 1/32
  auto ctx = raw_context(Rational(1, 4), {1, 2});
  auto p = s1_profile(4, {{1, Rational(1, 4)}, {2, Rational(1, 16)}});
  CHECK(poly_P(1, ctx, p) == Rational(1, 32));
  CHECK(poly_P(0, ctx, p) == Rational(1, 64));
  CHECK(poly_P(2, ctx, p) == Rational(1, 64));
}

TEST_CASE("subset-split identity") {
  // sum_{S1 subset L, |S1| = m-j} prod_{S1} x_i prod_{L\S1} (delta^i - x_i)
  //   = sum_{i=0..j} (-1)^i C(m-j+i, i) P_{m-j+i}
  // holds exactly for arbitrary weights, conforming or not.
  Sampler rng(402);
  for (auto [n, ell, r] : {std::tuple{2, 2, 1}, {3, 3, 2}, {4, 4, 3}, {5, 5, 4}, {4, 2, 4}}) {
    auto ctx = EstimationContext::make(n, ell, r);
    for (int trial = 0; trial < 6; ++trial) {
      MixedProfile p;
      if (trial < 3) {
        p = sample_conforming_profile(n, rng, ctx.lambda);
      } else {
        // wild weights, including ones far above delta^i
        std::vector<std::pair<int, Rational>> s1;
        for (int i : ctx.L) s1.push_back({i, rng.unit(16)});
        p = s1_profile(n + 2, s1);
      }
      for (int j = 0; j <= ctx.m; ++j)
        CHECK(split_sum_oracle(j, ctx, p) == split_sum_via_P(j, ctx, p));
    }
  }
}

TEST_CASE("first moment identity") {
  // P_1 = sum_{j=1..m} j * sum_{i=0..m-j} (-1)^i C(j+i, j) P_{j+i}
  Sampler rng(403);
  for (auto [n, ell, r] : {std::tuple{2, 1, 2}, {3, 3, 2}, {4, 4, 3}, {5, 5, 4}}) {
    auto ctx = EstimationContext::make(n, ell, r);
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<std::pair<int, Rational>> s1;
      for (int i : ctx.L) s1.push_back({i, rng.unit(16)});
      auto p = s1_profile(n + 2, s1);
      Rational rhs;
      for (int j = 1; j <= ctx.m; ++j) {
        Rational inner;
        for (int i = 0; i <= ctx.m - j; ++i) {
          Rational term = Rational(static_cast<long>(binomial(j + i, j))) * poly_P(j + i, ctx, p);
          inner += (i % 2 == 0) ? term : -term;
        }
        rhs += Rational(j) * inner;
      }
      CHECK(poly_P(1, ctx, p) == rhs);
    }
  }
}

TEST_CASE("coefficient vectors") {
  Rational d8(1, 8);

  SECTION("single-element L") {
    // n=3, ell=2, r=1: L={1}, one entry at (1,0) worth 1/(1 - delta^3)
    auto cv = build_coeffs(EstimationContext::make(3, 2, 1));
    REQUIRE(cv.B.size() == 1);
    CHECK(cv.B.at({1, 0}) == Rational(1) / (Rational(1) - pow(d8, 3)));
    REQUIRE(cv.C.size() == 1);
    CHECK(cv.C.at({0, 1}) == cv.B.at({1, 0}));

    // n=2 has no players outside L at all, so the entry is exactly 1
    auto flat = build_coeffs(EstimationContext::make(2, 2, 1));
    REQUIRE(flat.B.size() == 1);
    CHECK(flat.B.at({1, 0}) == Rational(1));
  }

  SECTION("two-element L") {
    // n=3, ell=3, r=2: L={1,2}; plus part puts j*N at (j, 2-j), the L'={1}
    // correction subtracts delta/(1-delta^2) at (1,0)
    auto cv = build_coeffs(EstimationContext::make(3, 3, 2));
    REQUIRE(cv.B.size() == 3);
    CHECK(cv.B.at({1, 1}) == Rational(8));
    CHECK(cv.B.at({2, 0}) == Rational(16));
    CHECK(cv.B.at({1, 0}) == -d8 / (Rational(1) - d8 * d8));
    REQUIRE(cv.C.size() == 3);
    CHECK(cv.C.at({1, 1}) == Rational(8));
    CHECK(cv.C.at({0, 2}) == Rational(16));
    CHECK(cv.C.at({0, 1}) == cv.B.at({1, 0}));
  }

  SECTION("declared bound holds everywhere") {
    for (int n = 2; n <= 4; ++n)
      for (int ell = 1; ell <= n; ++ell)
        for (int r = 1; r <= n; ++r) {
          if (r == ell) continue;
          auto cv = build_coeffs(EstimationContext::make(n, ell, r));
          CHECK(cv.bound == pow(Rational(1L << n), static_cast<long>(n) * n));
          for (const auto& [k, v] : cv.B) CHECK(abs(v) <= cv.bound);
          for (const auto& [k, v] : cv.C) CHECK(abs(v) <= cv.bound);
        }
  }
}

TEST_CASE("estimate evaluation basics") {
  int n = 3;
  HistogramSpace space(n + 1, strat7::count);
  Sampler rng(404);
  auto p = sample_conforming_profile(n, rng, Rational::pow2(-27));
  auto dist = seen_distribution(n + 2, strat7::count, p, 0);

  std::map<std::pair<int, int>, Rational> zero;
  CHECK(evaluate_estimate(zero, dist, space) == Rational(0));

  // indicator of (0,0) integrates to the probability of seeing no s-play;
  // with every main parked on t that is all of it
  auto quiet = s1_profile(n + 2, {});
  quiet.x[n][strat7::t] = Rational(0);
  quiet.x[n][strat7::q1] = Rational(1);
  quiet.x[n + 1][strat7::t] = Rational(0);
  quiet.x[n + 1][strat7::r2] = Rational(1);
  auto quiet_dist = seen_distribution(n + 2, strat7::count, quiet, 0);
  std::map<std::pair<int, int>, Rational> ind{{{0, 0}, Rational(1)}};
  CHECK(evaluate_estimate(ind, quiet_dist, space) == Rational(1));

  SeenDistribution bad = dist;
  bad.pr.pop_back();
  CHECK_THROWS_AS(evaluate_estimate(ind, bad, space), std::invalid_argument);
  HistogramSpace wrong(n + 1, strat6::count);
  CHECK_THROWS_AS(evaluate_estimate(ind, dist, wrong), std::invalid_argument);
}

TEST_CASE("estimates are exact when L fills the whole view") {
  // at n=2 every (ell, r) pair has S\L empty and m=1, so the estimate reads
  // the target weight off the seen distribution with no error at all
  int n = 2;
  HistogramSpace space(n + 1, strat7::count);
  Sampler rng(405);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = sample_conforming_profile(n, rng, Rational::pow2(-8));
    for (auto [ell, r] : {std::pair{1, 2}, {2, 1}}) {
      auto cv = build_coeffs(EstimationContext::make(n, ell, r));
      auto dist = seen_distribution(n + 2, strat7::count, p, ell - 1);
      CHECK(evaluate_estimate(cv.B, dist, space) == p.x[r - 1][strat7::s1]);
      CHECK(evaluate_estimate(cv.C, dist, space) == p.x[r - 1][strat7::s2]);
    }
  }
}

TEST_CASE("estimation error stays under the stated rate") {
  // n=3: every pair's |estimate - target| should be a small multiple of
  // r^2 delta^{r+1}
  auto table = measure_error_constant(3, 20, 406);
  REQUIRE(table.size() == 6);
  bool some_error = false;
  for (const auto& row : table) {
    CHECK(row.denom == Rational(static_cast<long>(row.r) * row.r) * pow(Rational(1, 8), row.r + 1));
    CHECK(row.max_ratio_s1 <= Rational(4));
    CHECK(row.max_ratio_s2 <= Rational(4));
    if (!row.max_ratio_s1.is_zero()) some_error = true;
  }
  CHECK(some_error);

  // n=2 rows are exactly zero by the previous test's argument
  auto exact = measure_error_constant(2, 10, 406);
  REQUIRE(exact.size() == 2);
  for (const auto& row : exact) {
    CHECK(row.max_ratio_s1.is_zero());
    CHECK(row.max_ratio_s2.is_zero());
  }
}

TEST_CASE("calibration harness plumbing") {
  CHECK(measure_error_constant(3, 0, 1).empty());
  CHECK_THROWS_AS(measure_error_constant(1, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(measure_error_constant(5, 5, 1), std::invalid_argument);

  auto a = measure_error_constant(2, 4, 77);
  auto b = measure_error_constant(2, 4, 77);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].ell == b[i].ell);
    CHECK(a[i].r == b[i].r);
    CHECK(a[i].max_ratio_s1 == b[i].max_ratio_s1);
    CHECK(a[i].max_ratio_s2 == b[i].max_ratio_s2);
  }
}

TEST_CASE("conforming profiles are valid and near the ladder") {
  Sampler rng(407);
  for (int n : {2, 3, 4}) {
    Rational lambda = Rational::pow2(-static_cast<long>(n) * n * n);
    for (int trial = 0; trial < 5; ++trial) {
      auto p = sample_conforming_profile(n, rng, lambda);
      REQUIRE(p.x.size() == static_cast<std::size_t>(n + 2));
      p.validate();
      Rational delta(1, 1L << n);
      for (int i = 0; i < n; ++i) {
        Rational total = p.x[i][strat7::s1] + p.x[i][strat7::s2];
        CHECK(abs(total - pow(delta, i + 1)) <= lambda);
        CHECK(p.x[i][strat7::s1] + p.x[i][strat7::s2] + p.x[i][strat7::t] == Rational(1));
      }
      for (int b = 0; b < strat7::count; ++b) {
        if (b != strat7::q1 && b != strat7::q2) CHECK(p.x[n][b].is_zero());
        if (b != strat7::r1 && b != strat7::r2) CHECK(p.x[n + 1][b].is_zero());
      }
    }
  }
}
