#pragma once

// Small-n assertion battery: closed forms against the dense oracle, envelope
// containment, lift lemmas, eigenspace masses, exact L2 against evolution,
// and the large-n sandwich bounds.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "exclusion/evolution.hpp"
#include "exclusion/mixing.hpp"
#include "exclusion/report.hpp"
#include "exclusion/spectral.hpp"

namespace exclusion {

struct VerifyOptions {
  int max_n = 5;
  // LEP instances above this many states are skipped (dense work grows as dim^3).
  std::uint64_t lep_dim_limit = 1000;
  double spectrum_tol = 1e-8;
  double lift_tol = 1e-9;
  double lemma_tol = 1e-9;
  double kernel_tol = 1e-8;
  int sandwich_n = 10'000;
};

namespace detail {

inline std::string tag(const char* kind, int n, int ell, double alpha) {
  std::ostringstream os;
  os << kind << "(n=" << n << ",ell=" << ell << ",alpha=" << alpha << ")";
  return os.str();
}

inline bool lep_fits(int n, int ell, std::uint64_t limit) {
  try {
    return falling_factorial(n, ell) <= limit;
  } catch (const CapacityError&) {
    return false;
  }
}

}  // namespace detail

/// Closed-form UEP spectrum vs the dense oracle: eigenvalues within
/// tol * max(1, alpha n^2) and identical multiplicities.
inline CheckResult compare_uep_spectra(int n, int ell, double alpha, double tol) {
  const auto p = ProcessParams::uep(n, ell, alpha);
  const auto closed = uep_spectrum_closed_form(p);
  const auto oracle = brute_force_spectrum(build_uep_generator(p));
  const double bound = tol * std::max(1.0, alpha * n * n);
  double dev = 0.0;
  bool ok = closed.pairs.size() == oracle.pairs.size();
  if (ok) {
    for (std::size_t i = 0; i < closed.pairs.size(); ++i) {
      dev = std::max(dev, std::abs(closed.pairs[i].value - oracle.pairs[i].value));
      ok = ok && closed.pairs[i].multiplicity == oracle.pairs[i].multiplicity;
    }
  } else {
    dev = std::numeric_limits<double>::infinity();
  }
  return {"uep_closed_form_vs_oracle " + detail::tag("UEP", n, ell, alpha), ok && dev <= bound, dev, bound, {}};
}

/// Oracle LEP spectrum inside the envelope, plus the multiplicity claims and
/// (for ell = n) the symmetric-core claim.
inline VerificationReport check_envelope_containment(int n, int ell, double tol) {
  VerificationReport rep;
  const auto spectrum = brute_force_spectrum(build_lep_generator(ProcessParams::lep(n, ell, 1.0)));
  const auto env = envelope(n, ell, 1.0);
  double worst = 0.0;
  for (const auto& p : spectrum.pairs) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : env.values) best = std::min(best, std::abs(v - p.value));
    worst = std::max(worst, best);
  }
  const std::string where = detail::tag("LEP", n, ell, 1.0);
  rep.add("envelope_containment " + where, worst <= tol, worst, tol);

  if (ell == n) {
    const double center = n * (n - 1) / 2.0;
    const auto core = symmetric_core(env, center);
    std::size_t outside = 0;
    for (const auto& p : spectrum.pairs)
      if (!core.contains(p.value, tol)) ++outside;
    rep.add("symmetric_core_containment " + where, outside == 0, static_cast<double>(outside), 0.0);
  }

  const SpectrumSummary* next = nullptr;
  SpectrumSummary next_spec;
  if (ell < n) {
    next_spec = brute_force_spectrum(build_lep_generator(ProcessParams::lep(n, ell + 1, 1.0)));
    next = &next_spec;
  }
  rep.append(multiplicity_checks(spectrum, tol, next));
  return rep;
}

/// Integrality of alpha = 1 spectra and symmetry of spec(A_k).
inline VerificationReport check_integrality_and_symmetry(int max_n, std::uint64_t lep_dim_limit) {
  VerificationReport rep;
  for (int n = 1; n <= max_n; ++n) {
    for (int ell = 0; ell <= n; ++ell) {
      for (auto kind : {ProcessKind::UEP, ProcessKind::LEP}) {
        const ProcessParams p{n, ell, 1.0, kind};
        if (kind == ProcessKind::LEP && !detail::lep_fits(n, ell, lep_dim_limit)) continue;
        const auto s = brute_force_spectrum(build_generator(p));
        double worst = 0.0;
        for (const auto& pair : s.pairs) worst = std::max(worst, std::abs(pair.value - std::round(pair.value)));
        rep.add("integer_spectrum " + detail::tag(to_string(kind), n, ell, 1.0), worst <= 1e-6, worst, 1e-6);
      }
    }
  }
  for (int k = 1; k <= std::min(max_n, 6); ++k) {
    const auto& s = cayley_spectrum(k);
    std::size_t asymmetric = 0;
    for (const auto& p : s.pairs)
      if (s.multiplicity_of(-p.value, 1e-6) != p.multiplicity) ++asymmetric;
    rep.add("cayley_spectrum_symmetric k=" + std::to_string(k), asymmetric == 0, static_cast<double>(asymmetric), 0.0);
  }
  return rep;
}

/// Exact UEP L2 formula at alpha = 2/n^2 vs the L2 distance of the spectral heat kernel.
inline CheckResult compare_l2_with_kernel(int n, int ell, std::span<const double> times, double tol) {
  const double alpha = standard_alpha(n);
  const auto g = build_uep_generator(ProcessParams::uep(n, ell, alpha));
  const auto basis = compute_eigen_basis(g);
  double worst = 0.0;
  for (double t : times) worst = std::max(worst, std::abs(uep_l2_exact(n, ell, t) - l2_distance(heat_kernel_row(basis, 0, t))));
  return {"uep_l2_formula_vs_kernel " + detail::tag("UEP", n, ell, alpha), worst <= tol, worst, tol, {}};
}

inline VerificationReport run_verification_suite(const VerifyOptions& opt = {}) {
  VerificationReport rep;
  const int max_n = opt.max_n;

  for (int n = 2; n <= max_n; ++n)
    for (int ell = 0; 2 * ell <= n; ++ell)
      for (double alpha : {1.0, standard_alpha(n)}) rep.checks.push_back(compare_uep_spectra(n, ell, alpha, opt.spectrum_tol));

  for (int n = 2; n <= max_n; ++n)
    for (int ell = 0; ell <= n; ++ell)
      if (detail::lep_fits(n, std::min(ell + 1, n), opt.lep_dim_limit)) rep.append(check_envelope_containment(n, ell, 1e-6));

  rep.append(check_integrality_and_symmetry(max_n, opt.lep_dim_limit));

  for (int n = 1; n <= max_n; ++n)
    for (int ell = 0; ell + 1 <= n; ++ell)
      if (detail::lep_fits(n, ell + 1, opt.lep_dim_limit)) rep.append(verify_lift_lemmas(n, ell, 1.0, opt.lift_tol));

  for (int n = 2; n <= max_n; ++n) {
    for (int ell = 0; ell <= n; ++ell) {
      for (auto kind : {ProcessKind::UEP, ProcessKind::LEP}) {
        if (kind == ProcessKind::LEP && !detail::lep_fits(n, ell, opt.lep_dim_limit)) continue;
        const auto r = verify_coefficient_lemma(build_generator({n, ell, 1.0, kind}), opt.lemma_tol);
        rep.add("eigenspace_mass " + detail::tag(to_string(kind), n, ell, 1.0), r.passed(), r.max_deviation(), r.tol);
      }
    }
  }

  const std::array<double, 4> times{0.1, 1.0, 5.0, 20.0};
  for (int n = 2; n <= max_n; ++n)
    for (int ell = 1; 2 * ell <= n; ++ell) rep.checks.push_back(compare_l2_with_kernel(n, ell, times, opt.kernel_tol));

  const std::array<double, 4> c_grid{0.0, 0.5, 1.0, 2.0};
  const int big = opt.sandwich_n;
  rep.append(sandwich_check(big, big / 2, ProcessKind::UEP, c_grid).checks);
  for (int ell : {10, 100, static_cast<int>(std::floor(0.45 * big))})
    rep.append(sandwich_check(big, ell, ProcessKind::LEP, c_grid).checks);
  return rep;
}

}  // namespace exclusion
