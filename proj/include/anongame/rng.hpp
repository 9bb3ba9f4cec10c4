#pragma once

// Deterministic sampling of rational test data. All randomness in the
// library and its calibration runs flows through Sampler, seeded explicitly;
// mt19937_64 has a standard-specified sequence, so results are reproducible
// across runs. Values are drawn from dyadic grids to keep denominators small.

#include <cstdint>
#include <random>
#include <vector>

#include "anongame/game.hpp"
#include "anongame/rational.hpp"

namespace anongame {

class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform integer in [0, bound); modulo bias is irrelevant at test scale.
  std::uint64_t below(std::uint64_t bound) { return eng_() % bound; }

  // Uniform on the dyadic grid {0, 1, ..., 2^bits} / 2^bits, endpoints included.
  Rational unit(unsigned bits = 20) {
    std::uint64_t g = (1ull << bits) + 1;
    return Rational(static_cast<long>(below(g)), 1) * Rational::pow2(-static_cast<long>(bits));
  }

  // Uniform on a dyadic grid inside [lo, hi].
  Rational in(const Rational& lo, const Rational& hi, unsigned bits = 20) {
    return lo + (hi - lo) * unit(bits);
  }

  // Random point on the alpha-simplex: integer weights normalized exactly.
  std::vector<Rational> simplex(int alpha, unsigned bits = 20) {
    std::vector<Rational> w(alpha);
    Rational sum;
    while (sum.is_zero()) {
      for (int b = 0; b < alpha; ++b) {
        w[b] = Rational(static_cast<long>(below(1ull << bits)), 1);
        sum += w[b];
      }
    }
    for (auto& v : w) v /= sum;
    return w;
  }

  MixedProfile profile(int n, int alpha, unsigned bits = 20) {
    MixedProfile p;
    p.x.reserve(n);
    for (int i = 0; i < n; ++i) p.x.push_back(simplex(alpha, bits));
    return p;
  }

  // Random game with payoffs on a dyadic grid inside [lo, hi].
  AnonymousGame game(int n, int alpha, const Rational& lo, const Rational& hi, unsigned bits = 12) {
    AnonymousGame g(n, alpha, lo, hi);
    for (int p = 0; p < n; ++p)
      for (int b = 0; b < alpha; ++b)
        for (std::size_t k = 0; k < g.space.size(); ++k)
          g.payoffs[p][b][k] = in(lo, hi, bits);
    return g;
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace anongame
