#pragma once

// Command-line front end. One subcommand per pipeline stage:
//
//   gen-radix        write a radix ladder game
//   gen-genradix     write the 7-strategy variant with the split top strategy
//   compile          polymatrix matrix -> game bundle directory
//   verify           judge a profile; exit 0 accept, 2 reject (witness JSON)
//   decode           bundle equilibrium -> two-action matrix-game profile
//   wsne-from-approx approximate equilibrium -> well-supported one
//   pad              inflate the player count, preserving verdicts
//   estimate         emit the estimation coefficient tables
//   calibrate        measure estimation error constants (JSON or LaTeX)
//   nashmap          fixed-point residual report or damped iteration
//   oracle-dp        dump a player's seen-histogram distribution and payoffs
//
// Exit codes: 0 success/accept; 2 verifier reject, with the certificate
// JSON on stdout; 1 usage or input errors, each with a distinct message.
// All numeric I/O uses exact "p/q" strings.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include "anongame/estimation.hpp"
#include "anongame/game.hpp"
#include "anongame/json_io.hpp"
#include "anongame/nashmap.hpp"
#include "anongame/polymatrix.hpp"
#include "anongame/radix.hpp"
#include "anongame/rational.hpp"
#include "anongame/reduction.hpp"
#include "anongame/verify.hpp"

namespace anongame {

namespace detail {

// Recover (n, N) of a (generalized) radix game from its payoff table: the
// first main player's marked-strategy payoff away from the full ladder
// equals kappa = N^{-n(n+1)/2} exactly.
inline MixedProfile canonical_profile_for(const AnonymousGame& g) {
  int n = g.n - 2;
  if (n < 1 || (g.alpha != strat6::count && g.alpha != strat7::count))
    throw std::invalid_argument("canonical profile: the game does not have a radix shape");
  Rational kappa;
  bool found = false;
  for (std::size_t k = 0; k < g.space.size() && !found; ++k) {
    const Histogram& h = g.space.at(k);
    int ks = g.alpha == strat6::count ? h[strat6::s] : h[strat7::s1] + h[strat7::s2];
    if (ks != n - 1) {
      kappa = g.payoffs[0][0][k];
      found = true;
    }
  }
  if (!found || kappa.sign() <= 0 || kappa.num() != 1)
    throw std::invalid_argument("canonical profile: cannot recover the ladder base from the payoffs");
  mpz_class root;
  int exact = mpz_root(root.get_mpz_t(), kappa.den().get_mpz_t(),
                       static_cast<unsigned long>(n) * (n + 1) / 2);
  if (!exact || root < 2)
    throw std::invalid_argument("canonical profile: cannot recover the ladder base from the payoffs");
  long N = root.get_si();
  return g.alpha == strat6::count ? canonical_radix_ne(n, N) : canonical_generalized_ne(n, N);
}

inline Rational parse_rational(const std::string& s, const char* flag) {
  try {
    return Rational::from_string(s);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(std::string(flag) + " expects an exact \"p/q\" rational, got: " + s);
  }
}

inline std::string latex_calibration_table(const std::vector<CalibrationRow>& rows) {
  std::string out;
  out += "\\begin{tabular}{rrlll}\n";
  out += "\\hline\n";
  out += "$\\ell$ & $r$ & $r^2\\delta^{r+1}$ & max ratio $s_1$ & max ratio $s_2$ \\\\\n";
  out += "\\hline\n";
  for (const CalibrationRow& row : rows) {
    out += std::to_string(row.ell) + " & " + std::to_string(row.r) + " & $" + row.denom.str() +
           "$ & $" + row.max_ratio_s1.str() + "$ & $" + row.max_ratio_s2.str() + "$ \\\\\n";
  }
  out += "\\hline\n";
  out += "\\end{tabular}\n";
  return out;
}

}  // namespace detail

// Runs the tool on the given arguments (program name excluded); output that
// the contract sends to stdout goes to `out`. Returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"exact equilibrium toolkit for anonymous games"};
  app.require_subcommand(1);

  // gen-radix / gen-genradix
  struct {
    int n = 0;
    long N = 0;
    std::string out_path;
  } gen;
  for (const char* name : {"gen-radix", "gen-genradix"}) {
    CLI::App* sub = app.add_subcommand(name, name[4] == 'r' ? "write a radix ladder game"
                                                            : "write the split-top-strategy variant");
    sub->add_option("--n", gen.n, "number of ladder players")->required();
    sub->add_option("--N", gen.N, "ladder base")->required();
    sub->add_option("--out", gen.out_path, "output game file")->required();
  }

  struct {
    std::string a_path, out_dir;
    int n = 0;
  } comp;
  CLI::App* sub_compile = app.add_subcommand("compile", "embed a two-action polymatrix game");
  sub_compile->add_option("--A", comp.a_path, "polymatrix matrix file")->required();
  sub_compile->add_option("--out-dir", comp.out_dir, "bundle output directory")->required();
  sub_compile->add_option("--n", comp.n, "expected player count (cross-check)");

  struct {
    std::string game, profile, eps, mode = "wsne";
  } ver;
  CLI::App* sub_verify = app.add_subcommand("verify", "judge a profile against a game");
  sub_verify->add_option("--game", ver.game, "game file")->required();
  sub_verify->add_option("--profile", ver.profile, "profile file, or 'canonical'")->required();
  sub_verify->add_option("--eps", ver.eps, "tolerance, \"p/q\"")->required();
  sub_verify->add_option("--mode", ver.mode, "wsne | approx")->check(CLI::IsMember({"wsne", "approx"}));

  struct {
    std::string profile, params, out_path;
  } dec;
  CLI::App* sub_decode = app.add_subcommand("decode", "renormalize the s1/s2 pairs of a bundle profile");
  sub_decode->add_option("--profile", dec.profile, "profile file")->required();
  sub_decode->add_option("--params", dec.params, "bundle params file")->required();
  sub_decode->add_option("--out", dec.out_path, "output file (default stdout)");

  struct {
    std::string game, profile, eps, out_path;
  } conv;
  CLI::App* sub_conv = app.add_subcommand("wsne-from-approx", "shift trailing mass onto best replies");
  sub_conv->add_option("--game", conv.game, "game file")->required();
  sub_conv->add_option("--profile", conv.profile, "profile file")->required();
  sub_conv->add_option("--eps", conv.eps, "target tolerance, \"p/q\"")->required();
  sub_conv->add_option("--out", conv.out_path, "output file (default stdout)");

  struct {
    std::string game, out_path, profile, out_profile;
    long t_num = 0, t_den = 1;
  } padc;
  CLI::App* sub_pad = app.add_subcommand("pad", "inflate the player count to ceil(n^t)");
  sub_pad->add_option("--game", padc.game, "game file")->required();
  sub_pad->add_option("--t-num", padc.t_num, "exponent numerator")->required();
  sub_pad->add_option("--t-den", padc.t_den, "exponent denominator");
  sub_pad->add_option("--out", padc.out_path, "padded game file")->required();
  sub_pad->add_option("--profile", padc.profile, "profile to extend alongside");
  sub_pad->add_option("--out-profile", padc.out_profile, "extended profile file");

  struct {
    int n = 0, ell = 0, r = 0;
    std::string out_path;
  } est;
  CLI::App* sub_est = app.add_subcommand("estimate", "emit estimation coefficient tables");
  sub_est->add_option("--n", est.n, "ladder size")->required();
  sub_est->add_option("--ell", est.ell, "observing player")->required();
  sub_est->add_option("--r", est.r, "estimated player")->required();
  sub_est->add_option("--out", est.out_path, "output file (default stdout)");

  struct {
    int n = 0, trials = 0;
    std::uint64_t seed = 0;
    std::string out_path;
    bool latex = false;
  } cal;
  CLI::App* sub_cal = app.add_subcommand("calibrate", "measure estimation error constants");
  sub_cal->add_option("--n", cal.n, "ladder size")->required();
  sub_cal->add_option("--trials", cal.trials, "sampled profiles")->required();
  sub_cal->add_option("--seed", cal.seed, "sampler seed")->required();
  sub_cal->add_option("--out", cal.out_path, "output file (default stdout)");
  sub_cal->add_flag("--emit-latex-table", cal.latex, "print the table as LaTeX instead of JSON");

  struct {
    std::string game, profile, target, damping = "1/2", out_path;
    int max_iters = 256;
    bool iterate = false;
  } nm;
  CLI::App* sub_nm = app.add_subcommand("nashmap", "fixed-point residual report or iteration");
  sub_nm->add_option("--game", nm.game, "game file (payoffs in [0,1])")->required();
  sub_nm->add_option("--profile", nm.profile, "profile to report on");
  sub_nm->add_flag("--iterate", nm.iterate, "run the damped iteration from uniform");
  sub_nm->add_option("--target", nm.target, "residual target for --iterate, \"p/q\"");
  sub_nm->add_option("--max-iters", nm.max_iters, "iteration cap for --iterate");
  sub_nm->add_option("--damping", nm.damping, "damping in (0,1], \"p/q\"");
  sub_nm->add_option("--out", nm.out_path, "output file (default stdout)");

  struct {
    std::string game, profile;
    int player = 0;
  } odp;
  CLI::App* sub_odp = app.add_subcommand("oracle-dp", "dump a player's seen distribution and payoffs");
  sub_odp->add_option("--game", odp.game, "game file")->required();
  sub_odp->add_option("--profile", odp.profile, "profile file")->required();
  sub_odp->add_option("--player", odp.player, "observer index (0-based)")->required();

  std::vector<const char*> argv;
  argv.push_back("agtool");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // collapse CLI11's error taxonomy onto the pinned usage exit code
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand("gen-radix") || app.got_subcommand("gen-genradix")) {
      AnonymousGame g = app.got_subcommand("gen-radix") ? build_radix(gen.n, gen.N)
                                                        : build_generalized_radix(gen.n, gen.N);
      save_json(gen.out_path, game_to_json(g));
      return 0;
    }

    if (app.got_subcommand("compile")) {
      PolymatrixGame A = poly_from_json(load_json(comp.a_path));
      if (sub_compile->count("--n") && comp.n != A.n)
        throw std::invalid_argument("shape mismatch: --n disagrees with the matrix file");
      ReductionBundle bundle = compile(A);
      std::filesystem::create_directories(comp.out_dir);
      save_json(comp.out_dir + "/A.json", poly_to_json(bundle.A));
      save_json(comp.out_dir + "/GA.json", game_to_json(bundle.game));
      save_json(comp.out_dir + "/GA_norm.json", game_to_json(bundle.normalized));
      save_json(comp.out_dir + "/params.json", params_to_json(bundle.params));
      save_json(comp.out_dir + "/coeffs.json", coeffs_to_json(bundle.coeffs));
      return 0;
    }

    if (app.got_subcommand("verify")) {
      AnonymousGame g = game_from_json(load_json(ver.game));
      MixedProfile x = ver.profile == "canonical" ? detail::canonical_profile_for(g)
                                                  : profile_from_json(load_json(ver.profile));
      VerifyMode mode = ver.mode == "wsne" ? VerifyMode::well_supported : VerifyMode::approximate;
      EquilibriumCertificate cert =
          verify_equilibrium(g, x, detail::parse_rational(ver.eps, "--eps"), mode);
      out << certificate_to_json(cert).dump(2) << '\n';
      return cert.accepted ? 0 : 2;
    }

    if (app.got_subcommand("decode")) {
      ReductionParams params = params_from_json(load_json(dec.params));
      PolyProfile y = decode(profile_from_json(load_json(dec.profile)), params);
      json j = poly_profile_to_json(y);
      if (dec.out_path.empty())
        out << j.dump(2) << '\n';
      else
        save_json(dec.out_path, j);
      return 0;
    }

    if (app.got_subcommand("wsne-from-approx")) {
      AnonymousGame g = game_from_json(load_json(conv.game));
      MixedProfile x = profile_from_json(load_json(conv.profile));
      MixedProfile y = approx_to_wsne(g, x, detail::parse_rational(conv.eps, "--eps"));
      json j = profile_to_json(y);
      if (conv.out_path.empty())
        out << j.dump(2) << '\n';
      else
        save_json(conv.out_path, j);
      return 0;
    }

    if (app.got_subcommand("pad")) {
      AnonymousGame g = game_from_json(load_json(padc.game));
      AnonymousGame padded = pad(g, padc.t_num, padc.t_den);
      save_json(padc.out_path, game_to_json(padded));
      if (!padc.profile.empty()) {
        if (padc.out_profile.empty())
          throw std::invalid_argument("pad: --profile requires --out-profile");
        MixedProfile px = pad_profile(profile_from_json(load_json(padc.profile)), padded.n);
        save_json(padc.out_profile, profile_to_json(px));
      }
      return 0;
    }

    if (app.got_subcommand("estimate")) {
      CoeffVector cv = build_coeffs(EstimationContext::make(est.n, est.ell, est.r));
      json j = coeffs_to_json({cv});
      if (est.out_path.empty())
        out << j.dump(2) << '\n';
      else
        save_json(est.out_path, j);
      return 0;
    }

    if (app.got_subcommand("calibrate")) {
      std::vector<CalibrationRow> rows = measure_error_constant(cal.n, cal.trials, cal.seed);
      if (cal.latex) {
        out << detail::latex_calibration_table(rows);
        return 0;
      }
      json j = calibration_to_json(cal.n, cal.trials, cal.seed, rows);
      if (cal.out_path.empty())
        out << j.dump(2) << '\n';
      else
        save_json(cal.out_path, j);
      return 0;
    }

    if (app.got_subcommand("nashmap")) {
      AnonymousGame g = game_from_json(load_json(nm.game));
      FixedPointReport rep;
      if (nm.iterate) {
        if (nm.target.empty())
          throw std::invalid_argument("nashmap: --iterate requires --target");
        rep = iterate_to_fixed_point(g, detail::parse_rational(nm.target, "--target"), nm.max_iters,
                                     detail::parse_rational(nm.damping, "--damping"));
      } else {
        if (nm.profile.empty())
          throw std::invalid_argument("nashmap: need --profile, or --iterate with --target");
        rep = residual_report(g, profile_from_json(load_json(nm.profile)));
      }
      json j = fixed_point_report_to_json(rep);
      if (nm.out_path.empty())
        out << j.dump(2) << '\n';
      else
        save_json(nm.out_path, j);
      return 0;
    }

    if (app.got_subcommand("oracle-dp")) {
      AnonymousGame g = game_from_json(load_json(odp.game));
      MixedProfile x = profile_from_json(load_json(odp.profile));
      if (odp.player < 0 || odp.player >= g.n)
        throw std::invalid_argument("shape mismatch: --player out of range");
      SeenDistribution dist = seen_distribution(g, x, odp.player);
      json pr = json::array();
      for (const Rational& p : dist.pr) pr.push_back(p.str());
      json payoffs = json::array();
      for (int b = 0; b < g.alpha; ++b) payoffs.push_back(expected_payoff(g, odp.player, b, dist).str());
      json j;
      j["observer"] = odp.player;
      j["pr"] = std::move(pr);
      j["expected_payoffs"] = std::move(payoffs);
      out << j.dump(2) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << "error: no subcommand handled\n";
  return 1;
}

}  // namespace anongame
