#pragma once

// Equilibrium verification with exact comparisons, in two modes:
//
//   approximate:     u_p(X) + eps >= u_p(b, X) for every player p, strategy b
//   well_supported:  u_p(a, X) + eps < u_p(b, X) implies x[p][a] = 0
//
// A witness records a violated (or exactly saturated) inequality. On reject,
// the witness list is exactly the strict violations, each with gap > eps; on
// accept it lists any saturated pairs (gap == eps) for diagnostics. In
// approximate mode `played` is -1: the deviation is measured against the mix.

#include <vector>

#include "anongame/game.hpp"
#include "anongame/rational.hpp"

namespace anongame {

enum class VerifyMode { approximate, well_supported };

struct Witness {
  int player = 0;
  int played = -1;  // strategy a with x[p][a] > 0, or -1 for the mix
  int better = 0;   // strategy b that does better
  Rational gap;     // u_p(better) - u_p(played or mix); compared against eps
};

struct EquilibriumCertificate {
  bool accepted = false;
  VerifyMode mode = VerifyMode::well_supported;
  Rational epsilon;
  std::vector<Witness> witnesses;
};

inline EquilibriumCertificate verify_equilibrium(const AnonymousGame& g, const MixedProfile& profile,
                                                 const Rational& eps, VerifyMode mode) {
  if (eps.sign() < 0) throw std::invalid_argument("verify_equilibrium: negative epsilon");
  profile.validate();
  if (profile.players() != g.n || profile.alpha() != g.alpha)
    throw std::invalid_argument("verify_equilibrium: profile shape mismatch");

  EquilibriumCertificate cert;
  cert.mode = mode;
  cert.epsilon = eps;
  std::vector<Witness> violations, saturated;

  for (int p = 0; p < g.n; ++p) {
    SeenDistribution dist = seen_distribution(g, profile, p);
    std::vector<Rational> u(g.alpha);
    for (int b = 0; b < g.alpha; ++b) u[b] = expected_payoff(g, p, b, dist);

    if (mode == VerifyMode::approximate) {
      Rational mix;
      for (int b = 0; b < g.alpha; ++b)
        if (!profile.x[p][b].is_zero()) mix += profile.x[p][b] * u[b];
      for (int b = 0; b < g.alpha; ++b) {
        Rational gap = u[b] - mix;
        if (gap > eps) violations.push_back({p, -1, b, gap});
        else if (gap == eps) saturated.push_back({p, -1, b, gap});
      }
    } else {
      for (int a = 0; a < g.alpha; ++a) {
        if (profile.x[p][a].is_zero()) continue;
        for (int b = 0; b < g.alpha; ++b) {
          if (b == a) continue;
          Rational gap = u[b] - u[a];
          if (gap > eps) violations.push_back({p, a, b, gap});
          else if (gap == eps) saturated.push_back({p, a, b, gap});
        }
      }
    }
  }

  cert.accepted = violations.empty();
  cert.witnesses = cert.accepted ? std::move(saturated) : std::move(violations);
  return cert;
}

}  // namespace anongame
