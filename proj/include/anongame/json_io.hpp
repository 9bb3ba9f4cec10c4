#pragma once

// JSON wire formats for every artifact the command-line tool reads or
// writes. Rationals travel as exact "p/q" strings, never floats; objects
// keep a fixed key order and rationals are emitted reduced, so serializing
// a freshly parsed structure reproduces the bytes (canonical round-trip).
//
// Formats:
//   game:     { "n", "alpha", "payoff_bounds": ["a","b"],
//               "payoffs": [player][strategy][histogram_index] }
//   profile:  { "x": [player][strategy] }
//   matrix:   { "n", "A": [["p/q", ...], ...] }
//   params:   every field of ReductionParams
//   coeffs:   array of { "ell", "r", "bound", "B": [...], "C": [...] }
//             with sparse entries { "ks1", "ks2", "value" }
//
// Histogram indices follow the library's increasing lexicographic order.

#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "anongame/estimation.hpp"
#include "anongame/game.hpp"
#include "anongame/nashmap.hpp"
#include "anongame/polymatrix.hpp"
#include "anongame/rational.hpp"
#include "anongame/reduction.hpp"
#include "anongame/verify.hpp"

namespace anongame {

using json = nlohmann::ordered_json;

inline json to_json(const Rational& r) { return r.str(); }

inline Rational rational_from_json(const json& j, const std::string& where) {
  if (!j.is_string()) throw std::invalid_argument("shape mismatch: " + where + " must be a \"p/q\" string");
  try {
    return Rational::from_string(j.get<std::string>());
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("shape mismatch: " + where + " is not a valid rational: " +
                                j.get<std::string>());
  }
}

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key))
    throw std::invalid_argument("shape mismatch: " + what + " needs field '" + key + "'");
  return j.at(key);
}

inline int int_field(const json& j, const char* key, const std::string& what) {
  const json& f = field(j, key, what);
  if (!f.is_number_integer()) throw std::invalid_argument("shape mismatch: " + what + "." + key + " must be an integer");
  return f.get<int>();
}

}  // namespace detail

inline json game_to_json(const AnonymousGame& g) {
  json j;
  j["n"] = g.n;
  j["alpha"] = g.alpha;
  j["payoff_bounds"] = json::array({g.lo.str(), g.hi.str()});
  json players = json::array();
  for (const auto& per_player : g.payoffs) {
    json strategies = json::array();
    for (const auto& per_strategy : per_player) {
      json row = json::array();
      for (const auto& v : per_strategy) row.push_back(v.str());
      strategies.push_back(std::move(row));
    }
    players.push_back(std::move(strategies));
  }
  j["payoffs"] = std::move(players);
  return j;
}

inline AnonymousGame game_from_json(const json& j) {
  int n = detail::int_field(j, "n", "game");
  int alpha = detail::int_field(j, "alpha", "game");
  const json& bounds = detail::field(j, "payoff_bounds", "game");
  if (!bounds.is_array() || bounds.size() != 2)
    throw std::invalid_argument("shape mismatch: game.payoff_bounds must be a two-element array");
  if (n < 1 || alpha < 1) throw std::invalid_argument("shape mismatch: game needs n >= 1 and alpha >= 1");
  AnonymousGame g(n, alpha, rational_from_json(bounds[0], "game.payoff_bounds"),
                  rational_from_json(bounds[1], "game.payoff_bounds"));
  const json& payoffs = detail::field(j, "payoffs", "game");
  if (!payoffs.is_array() || payoffs.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("shape mismatch: game.payoffs must list one entry per player");
  for (int p = 0; p < n; ++p) {
    const json& per_player = payoffs[p];
    if (!per_player.is_array() || per_player.size() != static_cast<std::size_t>(alpha))
      throw std::invalid_argument("shape mismatch: game.payoffs player rows must list one entry per strategy");
    for (int b = 0; b < alpha; ++b) {
      const json& row = per_player[b];
      if (!row.is_array() || row.size() != g.space.size())
        throw std::invalid_argument("shape mismatch: game.payoffs rows must match the histogram count");
      for (std::size_t k = 0; k < g.space.size(); ++k)
        g.payoffs[p][b][k] = rational_from_json(row[k], "game.payoffs");
    }
  }
  g.validate();
  return g;
}

inline json profile_to_json(const MixedProfile& x) {
  json rows = json::array();
  for (const auto& row : x.x) {
    json r = json::array();
    for (const auto& v : row) r.push_back(v.str());
    rows.push_back(std::move(r));
  }
  json j;
  j["x"] = std::move(rows);
  return j;
}

inline MixedProfile profile_from_json(const json& j) {
  const json& rows = detail::field(j, "x", "profile");
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument("shape mismatch: profile.x must be a nonempty array");
  MixedProfile x;
  for (const json& row : rows) {
    if (!row.is_array() || row.empty())
      throw std::invalid_argument("shape mismatch: profile.x rows must be nonempty arrays");
    std::vector<Rational> r;
    for (const json& v : row) r.push_back(rational_from_json(v, "profile.x"));
    x.x.push_back(std::move(r));
  }
  x.validate();
  return x;
}

inline json poly_to_json(const PolymatrixGame& g) {
  json rows = json::array();
  for (const auto& row : g.A) {
    json r = json::array();
    for (const auto& v : row) r.push_back(v.str());
    rows.push_back(std::move(r));
  }
  json j;
  j["n"] = g.n;
  j["A"] = std::move(rows);
  return j;
}

inline PolymatrixGame poly_from_json(const json& j) {
  int n = detail::int_field(j, "n", "matrix");
  if (n < 1) throw std::invalid_argument("shape mismatch: matrix needs n >= 1");
  PolymatrixGame g(n);
  const json& rows = detail::field(j, "A", "matrix");
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(2 * n))
    throw std::invalid_argument("shape mismatch: matrix.A must have 2n rows");
  for (int r = 0; r < 2 * n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != static_cast<std::size_t>(2 * n))
      throw std::invalid_argument("shape mismatch: matrix.A must have 2n columns");
    for (int c = 0; c < 2 * n; ++c) g.A[r][c] = rational_from_json(rows[r][c], "matrix.A");
  }
  g.validate();
  return g;
}

inline json params_to_json(const ReductionParams& p) {
  json j;
  j["n"] = p.n;
  j["N"] = p.N;
  j["delta"] = p.delta.str();
  j["lambda"] = p.lambda.str();
  j["xi"] = p.xi.str();
  j["xi_star"] = p.xi_star.str();
  j["epsilon"] = p.epsilon.str();
  j["kappa"] = p.kappa.str();
  j["tau"] = p.tau.str();
  return j;
}

inline ReductionParams params_from_json(const json& j) {
  ReductionParams p = ReductionParams::from_n(detail::int_field(j, "n", "params"));
  // the derived fields are recomputed; reject files that disagree
  for (const auto& [key, value] : {std::pair<const char*, const Rational*>{"delta", &p.delta},
                                   {"lambda", &p.lambda},
                                   {"xi", &p.xi},
                                   {"xi_star", &p.xi_star},
                                   {"epsilon", &p.epsilon},
                                   {"kappa", &p.kappa},
                                   {"tau", &p.tau}}) {
    if (rational_from_json(detail::field(j, key, "params"), std::string("params.") + key) != *value)
      throw std::invalid_argument(std::string("shape mismatch: params.") + key +
                                  " disagrees with its derivation from n");
  }
  return p;
}

inline json coeffs_to_json(const std::vector<CoeffVector>& cvs) {
  json arr = json::array();
  for (const CoeffVector& cv : cvs) {
    json entry;
    entry["ell"] = cv.ell;
    entry["r"] = cv.r;
    entry["bound"] = cv.bound.str();
    for (const char* side : {"B", "C"}) {
      const auto& table = side[0] == 'B' ? cv.B : cv.C;
      json rows = json::array();
      for (const auto& [key, value] : table) {
        json e;
        e["ks1"] = key.first;
        e["ks2"] = key.second;
        e["value"] = value.str();
        rows.push_back(std::move(e));
      }
      entry[side] = std::move(rows);
    }
    arr.push_back(std::move(entry));
  }
  return arr;
}

inline std::vector<CoeffVector> coeffs_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("shape mismatch: coefficient file must be an array");
  std::vector<CoeffVector> out;
  for (const json& entry : j) {
    CoeffVector cv;
    cv.ell = detail::int_field(entry, "ell", "coeffs");
    cv.r = detail::int_field(entry, "r", "coeffs");
    cv.bound = rational_from_json(detail::field(entry, "bound", "coeffs"), "coeffs.bound");
    for (const char* side : {"B", "C"}) {
      const json& rows = detail::field(entry, side, "coeffs");
      if (!rows.is_array()) throw std::invalid_argument("shape mismatch: coeffs tables must be arrays");
      auto& table = side[0] == 'B' ? cv.B : cv.C;
      for (const json& e : rows)
        table[{detail::int_field(e, "ks1", "coeffs"), detail::int_field(e, "ks2", "coeffs")}] =
            rational_from_json(detail::field(e, "value", "coeffs"), "coeffs.value");
    }
    out.push_back(std::move(cv));
  }
  return out;
}

inline json certificate_to_json(const EquilibriumCertificate& cert) {
  json j;
  j["accepted"] = cert.accepted;
  j["mode"] = cert.mode == VerifyMode::well_supported ? "wsne" : "approx";
  j["epsilon"] = cert.epsilon.str();
  json ws = json::array();
  for (const Witness& w : cert.witnesses) {
    json e;
    e["player"] = w.player;
    e["played"] = w.played;
    e["better"] = w.better;
    e["gap"] = w.gap.str();
    ws.push_back(std::move(e));
  }
  j["witnesses"] = std::move(ws);
  return j;
}

inline json poly_profile_to_json(const PolyProfile& p) {
  json row = json::array();
  for (const Rational& v : p.y) row.push_back(v.str());
  json j;
  j["y"] = std::move(row);
  return j;
}

inline json fixed_point_report_to_json(const FixedPointReport& rep) {
  json j;
  j["residual"] = rep.residual.str();
  j["implied_ne_epsilon"] = rep.implied_ne_epsilon.str();
  j["iterations"] = rep.iterations;
  j["profile"] = profile_to_json(rep.profile);
  return j;
}

inline json calibration_to_json(int n, int trials, std::uint64_t seed,
                                const std::vector<CalibrationRow>& rows) {
  json j;
  j["n"] = n;
  j["trials"] = trials;
  j["seed"] = seed;
  json arr = json::array();
  for (const CalibrationRow& row : rows) {
    json e;
    e["ell"] = row.ell;
    e["r"] = row.r;
    e["denom"] = row.denom.str();
    e["max_ratio_s1"] = row.max_ratio_s1.str();
    e["max_ratio_s2"] = row.max_ratio_s2.str();
    arr.push_back(std::move(e));
  }
  j["rows"] = std::move(arr);
  return j;
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace anongame
