// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed here.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "exclusion/exclusion.hpp"

using namespace exclusion;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string failed_names(const VerificationReport& rep, std::size_t limit = 6) {
  std::string out;
  std::size_t shown = 0;
  for (const auto& c : rep.checks) {
    if (c.passed) continue;
    if (shown == limit) {
      out += " ...";
      break;
    }
    std::ostringstream os;
    os << (shown ? "; " : "") << c.name << " measured=" << c.measured << " bound=" << c.bound;
    out += os.str();
    ++shown;
  }
  return out;
}

// 1. closed-form UEP spectrum vs dense oracle, 2 <= n <= 8, ell <= n/2, alpha = 1
Outcome closed_form_vs_oracle() {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n)
    for (int ell = 0; 2 * ell <= n; ++ell) {
      auto c = compare_uep_spectra(n, ell, 1.0, 1e-8);
      worst = std::max(worst, c.measured);
      rep.checks.push_back(std::move(c));
    }
  const double secs = seconds_since(start);
  std::ostringstream os;
  os << rep.checks.size() << " instances, max |dev| = " << worst << ", " << secs << " s (limit 30 s)";
  if (!rep.passed()) os << "; " << failed_names(rep);
  return {rep.passed() && secs < 30.0, os.str()};
}

// 2. envelope containment, symmetric core, multiplicity claims, 2 <= n <= 5
Outcome envelope_containment() {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  for (int n = 2; n <= 5; ++n)
    for (int ell = 0; ell <= n; ++ell) rep.append(check_envelope_containment(n, ell, 1e-6));
  const double secs = seconds_since(start);
  std::ostringstream os;
  os << rep.checks.size() << " checks, " << rep.failures().size() << " failed, " << secs << " s (limit 60 s)";
  if (!rep.passed()) os << "; " << failed_names(rep);
  return {rep.passed() && secs < 60.0, os.str()};
}

// 3. lift lemmas, n <= 5, every level pair within oracle capacity
Outcome lift_lemmas() {
  VerificationReport rep;
  for (int n = 1; n <= 5; ++n)
    for (int ell = 0; ell + 1 <= n; ++ell)
      if (falling_factorial(n, ell + 1) <= kOracleCapacity) rep.append(verify_lift_lemmas(n, ell, 1.0, 1e-9));
  std::ostringstream os;
  os << rep.checks.size() << " checks, " << rep.failures().size() << " failed";
  if (!rep.passed()) os << "; " << failed_names(rep);
  return {rep.passed(), os.str()};
}

// 4. exact L2 formula vs heat-kernel L2, n in 4..8, ell <= n/2, alpha = 2/n^2
Outcome l2_formula_vs_kernel() {
  const std::array<double, 4> times{0.1, 1.0, 5.0, 20.0};
  VerificationReport rep;
  double worst = 0.0;
  for (int n = 4; n <= 8; ++n)
    for (int ell = 0; 2 * ell <= n; ++ell) {
      auto c = compare_l2_with_kernel(n, ell, times, 1e-8);
      worst = std::max(worst, c.measured);
      rep.checks.push_back(std::move(c));
    }
  std::ostringstream os;
  os << rep.checks.size() << " instances x 4 times, max |dev| = " << worst << " (tol 1e-8)";
  return {rep.passed(), os.str()};
}

// 5. sandwich e^{-2c} <= L2 (<= 2 e^{-2c} * 1.05 for the UEP) at n = 10^4
Outcome sandwich() {
  const auto start = std::chrono::steady_clock::now();
  const int n = 10'000;
  const std::array<double, 4> grid{0.0, 0.5, 1.0, 2.0};
  VerificationReport rep;
  rep.append(sandwich_check(n, n / 2, ProcessKind::UEP, grid).checks);
  for (int ell : {10, 100, static_cast<int>(std::floor(0.45 * n))})
    rep.append(sandwich_check(n, ell, ProcessKind::LEP, grid).checks);
  const double secs = seconds_since(start);
  std::ostringstream os;
  os << rep.checks.size() << " bound checks, " << rep.failures().size() << " failed, " << secs << " s (limit 1 s)";
  if (!rep.passed()) os << "; " << failed_names(rep);
  return {rep.passed() && secs < 1.0, os.str()};
}

// 6. tau2(1000, 500, UEP, 0.25) within 3% of (1/4) 1000 log 999
Outcome tau2_location() {
  const auto r = tau2(1000, 500, ProcessKind::UEP, 0.25);
  const double reference = 0.25 * 1000 * std::log(999.0);
  const double ratio = r.tau2 / reference;
  std::ostringstream os;
  os.precision(10);
  os << "tau2 = " << r.tau2 << ", (1/4) n log(n-1) = " << reference << ", ratio = " << ratio
     << " (required [0.97, 1.03])";
  return {ratio >= 0.97 && ratio <= 1.03, os.str()};
}

// 7. squared distance vs limiting profiles at n = 2000
Outcome asymptotics() {
  const int n = 2000;
  double worst = 0.0;
  std::ostringstream os;
  for (double c : {0.0, 0.5, 1.0}) {
    const double half = uep_l2_exact(n, 1000, time_from_offset(n, 1000, ProcessKind::UEP, c));
    const double fixed = uep_l2_exact(n, 2, time_from_offset(n, 2, ProcessKind::UEP, c));
    const double r1 = half * half / asymptotic_profile(c);
    const double r2 = fixed * fixed / asymptotic_profile_fixed_ell(c, 2);
    worst = std::max({worst, std::abs(r1 - 1.0), std::abs(r2 - 1.0)});
    os << "c=" << c << ": ratios " << r1 << ", " << r2 << "; ";
  }
  os << "max relative dev " << worst << " (tol 0.05)";
  return {worst <= 0.05, os.str()};
}

// 8. |C_j(x)^2 - m_j/N| < 1e-9 on the listed instances
Outcome coefficient_lemma() {
  double worst = 0.0;
  for (auto p : {ProcessParams::uep(4, 2, 1.0), ProcessParams::uep(5, 2, 1.0), ProcessParams::lep(4, 2, 1.0),
                 ProcessParams::lep(4, 3, 1.0)})
    worst = std::max(worst, verify_coefficient_lemma(build_generator(p), 1e-9).max_deviation());
  std::ostringstream os;
  os << "max deviation " << worst << " (tol 1e-9)";
  return {worst < 1e-9, os.str()};
}

// 9. simulation vs exact kernel, UEP (5,2,1), t = 1, 10^5 replicas
Outcome simulation_fidelity() {
  const auto p = ProcessParams::uep(5, 2, 1.0);
  const SimConfig cfg{p, 1.0, 100'000, 20240601, 0};
  const auto counts = endpoint_histogram(cfg);
  const auto exact = heat_kernel_row(build_generator(p), cfg.start, cfg.horizon);
  const auto chi = chi_squared_gof(counts, exact.probs);
  const auto tv = empirical_tv_from_counts(counts, cfg.seed, 200);
  const double exact_tv = tv_distance(exact);
  const double gap = std::abs(tv.estimate - exact_tv);
  const double allowed = tv.bias_bound + 3.0 * tv.halfwidth;
  std::ostringstream os;
  os << "chi2 = " << chi.statistic << " (dof " << chi.dof << "), p = " << chi.p_value << " (> 0.001); |tv - exact| = "
     << gap << " <= " << allowed;
  return {chi.p_value > 0.001 && gap <= allowed, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 closed-form UEP spectrum matches oracle (n<=8)", closed_form_vs_oracle},
      {"C2 LEP spectrum inside envelope, core and multiplicities (n<=5)", envelope_containment},
      {"C3 lift lemmas (n<=5)", lift_lemmas},
      {"C4 exact L2 formula equals heat-kernel L2 (n=4..8)", l2_formula_vs_kernel},
      {"C5 sandwich bounds at n=10^4", sandwich},
      {"C6 tau2(1000,500,UEP,0.25) within 3% of n log(n-1)/4", tau2_location},
      {"C7 limiting profiles at n=2000 within 5%", asymptotics},
      {"C8 eigenspace masses equal m_j/N", coefficient_lemma},
      {"C9 simulation matches exact kernel", simulation_fidelity},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("[%s] %s | %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  }
  std::printf("[NOTE] C10 n -> infinity asymptotics and TV cutoff are not reproducible at desk scale; "
              "C5-C7 evaluate the finite-n formulas instead\n");
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
