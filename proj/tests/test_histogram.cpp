#include <catch2/catch_amalgamated.hpp>

#include "anongame/histogram.hpp"

using namespace anongame;

TEST_CASE("enumeration order and counts") {
  // (2,3): stars-and-bars C(4,2) = 6, listed lexicographically
  auto h = enumerate_histograms(2, 3);
  std::vector<Histogram> expect = {{0, 0, 2}, {0, 1, 1}, {0, 2, 0}, {1, 0, 1}, {1, 1, 0}, {2, 0, 0}};
  CHECK(h == expect);

  // (0,4): the single empty observation
  CHECK(enumerate_histograms(0, 4) == std::vector<Histogram>{{0, 0, 0, 0}});

  // (3,7): C(9,6) = 84
  CHECK(enumerate_histograms(3, 7).size() == 84);
  CHECK(histogram_count(3, 7) == 84);
}

TEST_CASE("enumeration is strictly increasing") {
  for (auto [observed, alpha] : {std::pair{4, 3}, {5, 4}, {2, 6}, {7, 2}, {3, 1}}) {
    auto h = enumerate_histograms(observed, alpha);
    REQUIRE(h.size() == histogram_count(observed, alpha));
    for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i - 1] < h[i]);
    for (const auto& c : h) {
      int sum = 0;
      for (int v : c) sum += v;
      CHECK(sum == observed);
    }
  }
}

TEST_CASE("rank inverts enumeration") {
  for (auto [observed, alpha] : {std::pair{0, 3}, {1, 1}, {2, 3}, {5, 4}, {6, 7}, {9, 2}}) {
    auto h = enumerate_histograms(observed, alpha);
    for (std::size_t i = 0; i < h.size(); ++i) CHECK(histogram_rank(h[i]) == i);
  }
}

TEST_CASE("space wrapper") {
  HistogramSpace s(3, 4);
  CHECK(s.observed() == 3);
  CHECK(s.alpha() == 4);
  CHECK(s.size() == histogram_count(3, 4));
  CHECK(s.at(0) == Histogram{0, 0, 0, 3});
  CHECK(s.rank({3, 0, 0, 0}) == s.size() - 1);
  CHECK_THROWS_AS(s.rank({1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_histograms(2, 0), std::invalid_argument);
}

TEST_CASE("binomial") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(9, 6) == 84);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(52, 5) == 2598960ull);
}
