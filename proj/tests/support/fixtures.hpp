#pragma once

// Shared perturbation fixtures for the refinement and acceptance suites.

#include "anongame/radix.hpp"
#include "anongame/rng.hpp"

namespace anongame::fixture {

// Copy of the seven-strategy ladder game with every payoff entry jittered by an
// independent dyadic offset drawn from [-xi, xi].  Declared bounds widen to match.
inline AnonymousGame noisy_generalized_radix(int n, long N, const Rational& xi,
                                             std::uint64_t seed, unsigned bits = 20) {
  Sampler rng(seed);
  AnonymousGame g = build_generalized_radix(n, N);
  g.lo -= xi;
  g.hi += xi;
  for (auto& per_player : g.payoffs)
    for (auto& per_strategy : per_player)
      for (auto& v : per_strategy) v += rng.in(-xi, xi, bits);
  g.validate();
  return g;
}

}  // namespace anongame::fixture
