#pragma once

// Command-line front end. run_cli() is separate from main() so the test
// suite can drive it in-process.
//
// Exit codes: 0 success, 1 verification failure, 2 parameter error,
// 3 capacity error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "exclusion/exclusion.hpp"

namespace exclusion::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kParamError = 2, kCapacityError = 3 };

struct CliConfig {
  int n = 0;
  int ell = 0;
  std::optional<double> alpha;  // defaults to 2/n^2
  std::string kind = "uep";
  double epsilon = 0.25;
  std::optional<double> tol;
  std::optional<double> t;
  std::string t_grid;
  std::string c_grid;
  std::uint64_t seed = 1;
  std::uint64_t replicas = 10'000;
  std::uint64_t x0 = 0;
  int bootstrap = 200;
  std::string format = "json";
  std::string out;
  bool oracle = false;
  bool verify = false;
  bool check = false;
  bool scan = false;
  int max_n = 5;
  std::uint64_t lep_dim_limit = 1000;

  double alpha_or_default() const { return alpha.value_or(standard_alpha(n)); }

  ProcessKind process_kind() const {
    if (kind == "uep") return ProcessKind::UEP;
    if (kind == "lep") return ProcessKind::LEP;
    throw ParameterError("--kind must be uep or lep here, got '" + kind + "'");
  }

  ProcessParams params() const {
    ProcessParams p{n, ell, alpha_or_default(), process_kind()};
    p.validate();
    return p;
  }
};

namespace detail {

inline void emit(const Json& j, std::ostream& out) { out << j.dump(2) << '\n'; }

inline int cmd_spectrum(const CliConfig& cfg, std::ostream& out) {
  if (cfg.kind == "cayley") {
    exclusion::detail::require(cfg.n >= 1, "--n must be >= 1");
    emit(to_json(brute_force_spectrum(build_cayley_adjacency(cfg.n))), out);
    return kOk;
  }
  const auto p = cfg.params();
  if (p.kind == ProcessKind::LEP) {
    const auto s = brute_force_spectrum(build_lep_generator(p));
    Json j = to_json(s);
    int code = kOk;
    if (cfg.verify) {
      const auto env = envelope(p.n, p.ell, p.alpha);
      const double tol = 1e-6 * std::max(1.0, p.alpha * p.n * p.n);
      bool inside = true;
      for (const auto& pair : s.pairs) inside = inside && env.contains(pair.value, tol);
      const auto checks = multiplicity_checks(s, tol);
      j["envelope_containment"] = inside;
      j["multiplicity_checks"] = to_json(checks);
      if (!inside || !checks.passed()) code = kVerifyFailed;
    }
    emit(j, out);
    return code;
  }
  if (cfg.oracle && !cfg.verify) {
    emit(to_json(brute_force_spectrum(build_uep_generator(p))), out);
    return kOk;
  }
  const auto closed = uep_spectrum_closed_form(p);
  Json j = to_json(closed);
  if (!cfg.verify) {
    emit(j, out);
    return kOk;
  }
  const auto check = compare_uep_spectra(p.n, p.ell, p.alpha, 1e-8);
  const auto oracle = brute_force_spectrum(build_uep_generator(p));
  bool mult_match = oracle.pairs.size() == closed.pairs.size();
  for (std::size_t i = 0; mult_match && i < closed.pairs.size(); ++i)
    mult_match = closed.pairs[i].multiplicity == oracle.pairs[i].multiplicity;
  j["max_dev"] = check.measured;
  j["multiplicities_match"] = mult_match;
  emit(j, out);
  return check.passed ? kOk : kVerifyFailed;
}

inline int cmd_envelope(const CliConfig& cfg, std::ostream& out) {
  const double alpha = cfg.alpha.value_or(1.0);
  exclusion::detail::require(cfg.n >= 1 && cfg.ell >= 0 && cfg.ell <= cfg.n, "need 0 <= ell <= n, n >= 1");
  exclusion::detail::require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  const auto env = envelope(cfg.n, cfg.ell, alpha);
  Json j = to_json(env);
  int code = kOk;
  if (cfg.check) {
    const auto s = brute_force_spectrum(build_lep_generator(ProcessParams::lep(cfg.n, cfg.ell, alpha)));
    const double tol = 1e-6 * std::max(1.0, alpha * cfg.n * cfg.n);
    bool inside = true;
    for (const auto& pair : s.pairs) inside = inside && env.contains(pair.value, tol);
    j["spectrum"] = to_json(s)["pairs"];
    j["containment"] = inside;
    if (!inside) code = kVerifyFailed;
    if (cfg.ell == cfg.n) {
      const auto core = symmetric_core(env, alpha * cfg.n * (cfg.n - 1) / 2.0);
      bool core_ok = true;
      for (const auto& pair : s.pairs) core_ok = core_ok && core.contains(pair.value, tol);
      j["symmetric_core"] = core.values;
      j["core_contains_spectrum"] = core_ok;
      if (!core_ok) code = kVerifyFailed;
    }
  }
  emit(j, out);
  return code;
}

inline std::vector<double> curve_times(const CliConfig& cfg) {
  const auto kind = cfg.process_kind();
  if (!cfg.c_grid.empty()) {
    const auto offsets = parse_grid(cfg.c_grid);
    return times_from_offsets(cfg.n, cfg.ell, kind, offsets);
  }
  if (!cfg.t_grid.empty()) return parse_grid(cfg.t_grid);
  if (cfg.t) return {*cfg.t};
  throw ParameterError("l2 needs one of --t, --t-grid or --c-grid");
}

inline int cmd_l2(const CliConfig& cfg, std::ostream& out) {
  const auto p = cfg.params();
  const auto times = curve_times(cfg);
  for (double t : times) exclusion::detail::require(t >= 0.0, "grid produces negative times");
  const auto curve = make_curve(p, times, exact_l2_function(p));
  if (cfg.format == "csv")
    write_curve_csv(out, curve);
  else
    emit(to_json(curve), out);
  return kOk;
}

inline int cmd_mix(const CliConfig& cfg, std::ostream& out) {
  emit(to_json(tau2(cfg.n, cfg.ell, cfg.process_kind(), cfg.epsilon, cfg.tol)), out);
  return kOk;
}

inline int cmd_simulate(const CliConfig& cfg, std::ostream& out) {
  exclusion::detail::require(cfg.t.has_value(), "simulate needs --t");
  const SimConfig sim{cfg.params(), *cfg.t, cfg.replicas, cfg.seed, cfg.x0};
  const auto counts = endpoint_histogram(sim);
  if (cfg.format == "csv") {
    write_histogram_csv(out, counts);
    return kOk;
  }
  Json j = to_json(empirical_tv_from_counts(counts, cfg.seed, cfg.bootstrap));
  if (sim.params.state_count() <= kOracleCapacity) {
    const auto exact = heat_kernel_row(build_generator(sim.params), sim.start, sim.horizon);
    const auto chi = chi_squared_gof(counts, exact.probs);
    j["exact_tv"] = tv_distance(exact);
    j["chi2_statistic"] = chi.statistic;
    j["chi2_dof"] = chi.dof;
    j["chi2_p_value"] = chi.p_value;
  }
  emit(j, out);
  return kOk;
}

inline int cmd_verify(const CliConfig& cfg, std::ostream& out) {
  VerifyOptions opt;
  opt.max_n = cfg.max_n;
  opt.lep_dim_limit = cfg.lep_dim_limit;
  exclusion::detail::require(opt.max_n >= 2, "--max-n must be >= 2");
  const auto rep = run_verification_suite(opt);
  if (cfg.format == "json") {
    emit(to_json(rep), out);
  } else {
    print_table(out, rep);
    out << (rep.passed() ? "all checks passed" : "verification FAILED") << " (" << rep.checks.size() << " checks, "
        << rep.failures().size() << " failed)\n";
  }
  return rep.passed() ? kOk : kVerifyFailed;
}

inline int cmd_sandwich(const CliConfig& cfg, std::ostream& out) {
  const auto grid = parse_grid(cfg.c_grid.empty() ? std::string("0,0.5,1,2") : cfg.c_grid);
  SandwichOptions opt;
  opt.scan_threshold = cfg.scan;
  const auto rep = sandwich_check(cfg.n, cfg.ell, cfg.process_kind(), grid, opt);
  emit(to_json(rep), out);
  return rep.passed() ? kOk : kVerifyFailed;
}

inline int cmd_coefficients(const CliConfig& cfg, std::ostream& out) {
  const auto rep = verify_coefficient_lemma(build_generator(cfg.params()), cfg.tol.value_or(1e-9));
  emit(to_json(rep), out);
  return rep.passed() ? kOk : kVerifyFailed;
}

inline int cmd_lifts(const CliConfig& cfg, std::ostream& out) {
  const auto rep = verify_lift_lemmas(cfg.n, cfg.ell, cfg.alpha_or_default(), cfg.tol.value_or(1e-9));
  emit(to_json(rep), out);
  return rep.passed() ? kOk : kVerifyFailed;
}

inline int cmd_dump(const CliConfig& cfg, std::ostream& out) {
  if (cfg.kind == "cayley") {
    write_matrix_dump(out, build_cayley_adjacency(cfg.n).matrix);
    return kOk;
  }
  write_matrix_dump(out, build_generator(cfg.params()).matrix);
  return kOk;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra and L2 mixing of exclusion and interchange processes on the complete graph"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto add_process = [&](CLI::App* sub, bool need_ell = true) {
    sub->add_option("--n", cfg.n, "number of vertices")->required();
    auto* ell = sub->add_option("--ell", cfg.ell, "number of balls");
    if (need_ell) ell->required();
    sub->add_option("--alpha", cfg.alpha, "edge clock intensity (default 2/n^2)");
    sub->add_option("--kind", cfg.kind, "uep | lep")->check(CLI::IsMember({"uep", "lep", "cayley"}));
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", cfg.out, "output file (default stdout)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "closed-form or oracle spectrum of -Q (or of A_n with --kind cayley)");
  add_process(spectrum, false);
  spectrum->add_flag("--oracle", cfg.oracle, "use the dense eigensolver");
  spectrum->add_flag("--verify", cfg.verify, "compare closed form with the oracle");
  add_output(spectrum);

  auto* env = app.add_subcommand("envelope", "envelope set containing the LEP spectrum (alpha defaults to 1)");
  add_process(env);
  env->add_flag("--check", cfg.check, "verify containment against the oracle spectrum");
  add_output(env);

  auto* l2 = app.add_subcommand("l2", "exact L2 distance curve at alpha = 2/n^2 by default");
  add_process(l2);
  l2->add_option("--t", cfg.t, "single time");
  l2->add_option("--t-grid", cfg.t_grid, "start:stop:step times");
  l2->add_option("--c-grid", cfg.c_grid, "start:stop:step offsets c in t = (n/4) log(scale) + c n");
  add_output(l2);

  auto* mix = app.add_subcommand("mix", "L2 mixing time tau_2(epsilon)");
  add_process(mix);
  mix->add_option("--epsilon", cfg.epsilon, "target, threshold is 2 epsilon")->check(CLI::Range(0.0, 1.0));
  mix->add_option("--tol", cfg.tol, "bisection tolerance");
  add_output(mix);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo endpoints, histogram (csv) or TV estimate (json)");
  add_process(sim);
  sim->add_option("--t", cfg.t, "horizon")->required();
  sim->add_option("--replicas", cfg.replicas, "number of replicas");
  sim->add_option("--seed", cfg.seed, "RNG seed");
  sim->add_option("--x0", cfg.x0, "start state rank");
  sim->add_option("--bootstrap", cfg.bootstrap, "bootstrap resamples");
  add_output(sim);

  auto* verify = app.add_subcommand("verify", "run the small-n verification battery");
  verify->add_option("--max-n", cfg.max_n, "largest n in the sweeps");
  verify->add_option("--lep-dim-limit", cfg.lep_dim_limit, "skip LEP instances above this many states");
  cfg.format = "text";
  add_output(verify);

  auto* sandwich = app.add_subcommand("sandwich", "check e^{-2c} <= L2 <= 2e^{-2c} on a c grid");
  add_process(sandwich);
  sandwich->add_option("--c-grid", cfg.c_grid, "offsets (default 0,0.5,1,2)");
  sandwich->add_flag("--scan", cfg.scan, "find the smallest n where the upper bound holds (UEP)");
  add_output(sandwich);

  auto* coeffs = app.add_subcommand("coefficients", "eigenspace masses C_j(x)^2 against m_j/N");
  add_process(coeffs);
  coeffs->add_option("--tol", cfg.tol, "tolerance");
  add_output(coeffs);

  auto* lifts = app.add_subcommand("lifts", "verify the lift lemmas from level ell to ell+1");
  add_process(lifts);
  lifts->add_option("--tol", cfg.tol, "tolerance");
  add_output(lifts);

  auto* dump = app.add_subcommand("dump", "generator (or A_n) as 'row col value' lines");
  add_process(dump, false);
  add_output(dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int code = app.exit(e, help, help);
    (code == 0 ? out : err) << help.str();
    return code == 0 ? kOk : kParamError;
  }
  if (cfg.format == "text" && app.got_subcommand(verify) == false) cfg.format = "json";
  if (app.got_subcommand(verify) && verify->count("--format") == 0) cfg.format = "text";

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      err << "error: cannot open " << cfg.out << '\n';
      return kParamError;
    }
    sink = &file;
  }

  try {
    if (app.got_subcommand(spectrum)) return detail::cmd_spectrum(cfg, *sink);
    if (app.got_subcommand(env)) return detail::cmd_envelope(cfg, *sink);
    if (app.got_subcommand(l2)) return detail::cmd_l2(cfg, *sink);
    if (app.got_subcommand(mix)) return detail::cmd_mix(cfg, *sink);
    if (app.got_subcommand(sim)) return detail::cmd_simulate(cfg, *sink);
    if (app.got_subcommand(verify)) return detail::cmd_verify(cfg, *sink);
    if (app.got_subcommand(sandwich)) return detail::cmd_sandwich(cfg, *sink);
    if (app.got_subcommand(coeffs)) return detail::cmd_coefficients(cfg, *sink);
    if (app.got_subcommand(lifts)) return detail::cmd_lifts(cfg, *sink);
    if (app.got_subcommand(dump)) return detail::cmd_dump(cfg, *sink);
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kParamError;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kCapacityError;
  }
  return kParamError;
}

}  // namespace exclusion::cli
