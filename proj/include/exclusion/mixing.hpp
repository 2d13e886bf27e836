#pragma once

// L2 distance from stationarity, its sandwich bounds and the L2 mixing time.
//
// With alpha = 2/n^2 (one state change per unit time on average) the squared
// L2 distance of the UEP started anywhere is
//
//   sum_{i=1..ell} (C(n,i) - C(n,i-1)) exp(-4 i (n-i+1) t / n^2),
//
// and for any chain whose L2 distance does not depend on the start state it
// is sum_j m_j exp(-2 lambda_j t) over the nonzero eigenvalues of -Q.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exclusion/generator.hpp"
#include "exclusion/report.hpp"
#include "exclusion/spectral.hpp"
#include "exclusion/state_index.hpp"

namespace exclusion {

/// alpha giving one expected state change per unit time.
inline double standard_alpha(int n) { return 2.0 / (static_cast<double>(n) * static_cast<double>(n)); }

inline double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

namespace detail {

inline constexpr double kLogDropBelow = -690.7755278982137;  // log(1e-300)

// log sum exp over the given log-terms, ignoring those below 1e-300.
inline double log_sum_exp(std::span<const double> logs) {
  double top = -std::numeric_limits<double>::infinity();
  for (double l : logs)
    if (l >= kLogDropBelow) top = std::max(top, l);
  if (!std::isfinite(top)) return -std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (double l : logs)
    if (l >= kLogDropBelow) s += std::exp(l - top);
  return top + std::log(s);
}

}  // namespace detail

/// log of the squared L2 distance of the UEP at time t for intensity alpha.
/// Multiplicities are exact when C(n,ell) fits in 64 bits and come from
/// log-gamma otherwise. Returns -inf when the distance is 0 (ell = 0).
inline double uep_l2_squared_log(int n, int ell, double alpha, double t) {
  ProcessParams::uep(n, ell, alpha).validate_uep_closed_form();
  detail::require(t >= 0.0, "time must be nonnegative");
  bool exact = true;
  try {
    (void)binomial(n, ell);
  } catch (const CapacityError&) {
    exact = false;
  }
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(ell));
  for (int i = 1; i <= ell; ++i) {
    double log_mult;
    if (exact) {
      log_mult = std::log(static_cast<double>(binomial(n, i) - binomial(n, i - 1)));
    } else {
      // C(n,i) - C(n,i-1) = C(n,i) (1 - i/(n-i+1))
      log_mult = log_binomial(n, i) + std::log1p(-static_cast<double>(i) / static_cast<double>(n - i + 1));
    }
    const double lambda = alpha * static_cast<double>(i) * static_cast<double>(n - i + 1);
    logs.push_back(log_mult - 2.0 * lambda * t);
  }
  return detail::log_sum_exp(logs);
}

/// UEP L2 distance at time t with general intensity alpha.
inline double uep_l2(int n, int ell, double alpha, double t) {
  return std::exp(0.5 * uep_l2_squared_log(n, ell, alpha, t));
}

/// UEP L2 distance at time t with alpha = 2/n^2. Overflows to +inf only when
/// the distance itself exceeds the double range (huge n at t near 0).
inline double uep_l2_exact(int n, int ell, double t) { return uep_l2(n, ell, standard_alpha(n), t); }

namespace detail {

inline double zero_threshold(const SpectrumSummary& s) {
  double top = 1.0;
  for (const auto& p : s.pairs) top = std::max(top, std::abs(p.value));
  return 1e-9 * top;
}

}  // namespace detail

/// sqrt(sum over nonzero eigenvalues of m_j exp(-2 lambda_j t)).
inline double l2_from_spectrum(const SpectrumSummary& s, double t) {
  const double zero = detail::zero_threshold(s);
  double sum = 0.0;
  for (const auto& p : s.pairs)
    if (std::abs(p.value) > zero) sum += static_cast<double>(p.multiplicity) * std::exp(-2.0 * p.value * t);
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// Time / offset parametrization t = (n/4) log(scale) + c n

/// n-1 for the UEP, ell(n-1) for the LEP.
inline double offset_scale(int n, int ell, ProcessKind kind) {
  return kind == ProcessKind::UEP ? static_cast<double>(n - 1) : static_cast<double>(ell) * static_cast<double>(n - 1);
}

inline double time_from_offset(int n, int ell, ProcessKind kind, double c) {
  detail::require(n >= 2 && ell >= 1, "offset parametrization needs n >= 2 and ell >= 1");
  return 0.25 * n * std::log(offset_scale(n, ell, kind)) + c * n;
}

inline double offset_from_time(int n, int ell, ProcessKind kind, double t) {
  detail::require(n >= 2 && ell >= 1, "offset parametrization needs n >= 2 and ell >= 1");
  return (t - 0.25 * n * std::log(offset_scale(n, ell, kind))) / n;
}

struct L2Sample {
  double t = 0.0;
  double c = 0.0;
  double l2 = 0.0;
  double lower = 0.0;  // e^{-2c}
  double upper = 0.0;  // 2 e^{-2c}
};

struct L2Curve {
  ProcessParams params;
  std::vector<L2Sample> samples;
};

/// Evaluates l2_at on each time; c, lower and upper follow from the offset
/// parametrization of params.kind.
inline L2Curve make_curve(const ProcessParams& p, std::span<const double> times,
                          const std::function<double(double)>& l2_at) {
  L2Curve curve{p, {}};
  for (double t : times) {
    L2Sample s;
    s.t = t;
    s.c = offset_from_time(p.n, p.ell, p.kind, t);
    s.l2 = l2_at(t);
    s.lower = std::exp(-2.0 * s.c);
    s.upper = 2.0 * s.lower;
    curve.samples.push_back(s);
  }
  return curve;
}

inline std::vector<double> times_from_offsets(int n, int ell, ProcessKind kind, std::span<const double> offsets) {
  std::vector<double> out;
  for (double c : offsets) out.push_back(time_from_offset(n, ell, kind, c));
  return out;
}

/// Exact L2 distance function for a process with params p at desk scale:
/// closed form for the UEP, oracle spectrum for the LEP.
inline std::function<double(double)> exact_l2_function(const ProcessParams& p) {
  if (p.kind == ProcessKind::UEP) {
    p.validate_uep_closed_form();
    return [n = p.n, ell = p.ell, alpha = p.alpha](double t) { return uep_l2(n, ell, alpha, t); };
  }
  p.validate();
  detail::check_oracle_capacity(p.state_count());
  auto spectrum = brute_force_spectrum(build_lep_generator(p));
  return [spectrum = std::move(spectrum)](double t) { return l2_from_spectrum(spectrum, t); };
}

// ---------------------------------------------------------------------------
// tau_2

struct MixingReport {
  int n = 1;
  int ell = 0;
  ProcessKind kind = ProcessKind::UEP;
  double alpha = 0.0;
  double epsilon = 0.0;
  double tau2 = 0.0;
  double bracket_lo = 0.0;  // l2(bracket_lo) > 2 eps unless tau2 = 0
  double bracket_hi = 0.0;  // = tau2
  double tol = 0.0;
};

inline double default_tau2_tol(int n) {
  return 1e-9 * static_cast<double>(n) * std::log(std::max(static_cast<double>(n), 2.0));
}

/// First t with l2(t) <= 2 eps for a strictly decreasing l2, by bisection to
/// absolute tolerance tol. The threshold carries a 1e-12 relative slack so
/// that a distance equal to 2 eps at t = 0 is not lost to rounding.
inline MixingReport tau2_bisect(const std::function<double(double)>& l2, int n, double epsilon, double tol) {
  detail::require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
  detail::require(tol > 0.0, "tolerance must be positive");
  MixingReport r;
  r.n = n;
  r.epsilon = epsilon;
  r.tol = tol;
  const double target = 2.0 * epsilon * (1.0 + 1e-12);
  if (l2(0.0) <= target) return r;
  double lo = 0.0;
  double hi = std::max(1.0, 0.25 * n * std::log(std::max(static_cast<double>(n), 2.0)));
  for (int i = 0; l2(hi) > target; ++i) {
    if (i > 200) throw std::runtime_error("tau2: distance never drops below threshold");
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (l2(mid) <= target ? hi : lo) = mid;
  }
  r.tau2 = hi;
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  return r;
}

/// tau_2(eps) at alpha = 2/n^2: closed form for the UEP, oracle spectrum for
/// the LEP (desk scale only).
inline MixingReport tau2(int n, int ell, ProcessKind kind, double epsilon,
                         std::optional<double> tol = std::nullopt) {
  detail::require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
  const ProcessParams p{n, ell, standard_alpha(n), kind};
  auto r = tau2_bisect(exact_l2_function(p), n, epsilon, tol.value_or(default_tau2_tol(n)));
  r.ell = ell;
  r.kind = kind;
  r.alpha = p.alpha;
  return r;
}

// ---------------------------------------------------------------------------
// Sandwich bounds e^{-2c} <= ||P(X_t) - pi||_2 <= 2 e^{-2c}

struct SandwichOptions {
  double upper_slack = 1.05;  // the constant 2 is only proven for large n
  int upper_floor = 1000;     // assert the upper bound only for n >= this
  double lep_epsilon = 0.1;   // ell <= (1 - eps) n / 2 margin for the LEP
  bool scan_threshold = false;
};

struct SandwichRow {
  double c = 0.0;
  double t = 0.0;
  double value = 0.0;  // L2 distance (exact) or its first-term lower bound
  bool exact = true;
  double lower = 0.0;
  double upper = 0.0;
  bool lower_ok = true;
  std::optional<bool> upper_ok;  // empty when the upper bound is not asserted
  std::optional<double> upper_estimate;  // LEP multiplicity-bound estimate
};

struct SandwichReport {
  int n = 0;
  int ell = 0;
  ProcessKind kind = ProcessKind::UEP;
  std::vector<SandwichRow> rows;
  std::optional<int> smallest_n_upper;  // from the optional scan
  std::optional<double> lep_n_threshold;
  VerificationReport checks;

  bool passed() const { return checks.passed(); }
};

namespace detail {

// sqrt of sum_j C(ell,j) (n)_j exp(-4 j (n-j+1) t / n^2): every LEP eigenvalue
// in band j is >= alpha j(n-j+1) and the band holds at most (n)_j C(ell,j).
inline double lep_band_upper_estimate(int n, int ell, double t) {
  std::vector<double> logs;
  for (int j = 1; j <= ell; ++j) {
    const double log_mult = log_binomial(ell, j) + std::lgamma(n + 1.0) - std::lgamma(n - j + 1.0);
    logs.push_back(log_mult - 4.0 * j * static_cast<double>(n - j + 1) * t / (static_cast<double>(n) * n));
  }
  return std::exp(0.5 * log_sum_exp(logs));
}

inline bool uep_upper_holds(int n, int ell, std::span<const double> c_grid, double slack) {
  for (double c : c_grid) {
    if (c < 0.0) continue;
    const double t = time_from_offset(n, ell, ProcessKind::UEP, c);
    if (uep_l2_exact(n, ell, t) > 2.0 * std::exp(-2.0 * c) * slack) return false;
  }
  return true;
}

}  // namespace detail

/// Smallest n0 <= n_max such that the UEP upper bound (with slack) holds on
/// the grid for every n in [n0, n_max], with ell scaled as ell_fraction * n.
inline std::optional<int> smallest_n_with_upper_bound(double ell_fraction, std::span<const double> c_grid,
                                                      int n_max, double slack) {
  std::optional<int> found;
  for (int m = n_max; m >= 2; --m) {
    const int ell = std::clamp(static_cast<int>(std::floor(ell_fraction * m)), 1, m / 2);
    if (!detail::uep_upper_holds(m, ell, c_grid, slack)) break;
    found = m;
  }
  return found;
}

/// Evaluates the distance at t = (n/4) log(scale) + c n for each c and checks
/// e^{-2c} <= value, plus value <= 2 e^{-2c} (times slack) for c >= 0 when
/// the value is exact and n >= upper_floor. For an LEP beyond oracle size the
/// value is the first spectral term sqrt(ell (n-1) e^{-4t/n}), which is a
/// lower bound on the true distance.
inline SandwichReport sandwich_check(int n, int ell, ProcessKind kind, std::span<const double> c_grid,
                                     const SandwichOptions& opt = {}) {
  SandwichReport rep;
  rep.n = n;
  rep.ell = ell;
  rep.kind = kind;
  const double alpha = standard_alpha(n);
  const ProcessParams p{n, ell, alpha, kind};
  p.validate();
  detail::require(n >= 2 && ell >= 1, "sandwich_check needs n >= 2 and ell >= 1");

  std::function<double(double)> exact;
  if (kind == ProcessKind::UEP) {
    exact = exact_l2_function(p);
  } else {
    rep.lep_n_threshold = std::max(
        8000.0, std::exp((std::log(2.0) + 1.0 - std::log(1.0 - opt.lep_epsilon)) / opt.lep_epsilon));
    bool small = false;
    try {
      small = p.state_count() <= kOracleCapacity;
    } catch (const CapacityError&) {
    }
    if (small) exact = exact_l2_function(p);
  }

  const std::string where = std::string(to_string(kind)) + "(n=" + std::to_string(n) + ",ell=" + std::to_string(ell) + ")";
  for (double c : c_grid) {
    SandwichRow row;
    row.c = c;
    row.t = time_from_offset(n, ell, kind, c);
    row.lower = std::exp(-2.0 * c);
    row.upper = 2.0 * row.lower;
    if (exact) {
      row.value = exact(row.t);
    } else {
      row.exact = false;
      const double first = offset_scale(n, ell, kind) * std::exp(-4.0 * row.t / n);
      row.value = std::sqrt(first);
      row.upper_estimate = detail::lep_band_upper_estimate(n, ell, row.t);
    }
    // 1e-12 relative slack: the first term equals e^{-4c} exactly in real arithmetic
    row.lower_ok = row.value >= row.lower * (1.0 - 1e-12);
    rep.checks.add("lower c=" + std::to_string(c) + " " + where, row.lower_ok, row.value, row.lower);
    if (row.exact && c >= 0.0 && n >= opt.upper_floor) {
      row.upper_ok = row.value <= row.upper * opt.upper_slack;
      rep.checks.add("upper c=" + std::to_string(c) + " " + where, *row.upper_ok, row.value,
                     row.upper * opt.upper_slack);
    }
    rep.rows.push_back(row);
  }
  if (opt.scan_threshold && kind == ProcessKind::UEP)
    rep.smallest_n_upper = smallest_n_with_upper_bound(static_cast<double>(ell) / n, c_grid, n, opt.upper_slack);
  return rep;
}

// ---------------------------------------------------------------------------
// Asymptotic profile

/// Limit of the squared UEP distance at offset c when ell grows with n.
inline double asymptotic_profile(double c) { return std::expm1(std::exp(-4.0 * c)); }

/// Limit of the squared UEP distance at offset c for fixed ell:
/// sum_{i=1..ell} e^{-4ci} / i!.
inline double asymptotic_profile_fixed_ell(double c, int ell) {
  double sum = 0.0;
  for (int i = 1; i <= ell; ++i) sum += std::exp(-4.0 * c * i - std::lgamma(i + 1.0));
  return sum;
}

// ---------------------------------------------------------------------------
// Eigenspace mass of indicators

struct CoefficientRow {
  double value = 0.0;
  std::uint64_t multiplicity = 0;
  double max_deviation = 0.0;  // max over x of |C_j(x)^2 - m_j / N|
};

struct CoefficientReport {
  ProcessParams params;
  std::uint64_t dim = 0;
  double tol = 0.0;
  std::vector<CoefficientRow> rows;

  double max_deviation() const {
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.max_deviation);
    return worst;
  }
  bool passed() const { return max_deviation() <= tol; }
};

/// For every start state x and distinct eigenvalue, compares C_j(x)^2 with m_j / N.
inline CoefficientReport verify_coefficient_lemma(const Generator& g, double tol) {
  const auto basis = compute_eigen_basis(g);
  const double cluster_tol = default_cluster_tol(g.params.n, g.params.alpha);
  CoefficientReport rep{g.params, g.dim(), tol, {}};
  const double dim = static_cast<double>(g.dim());
  for (Rank x = 0; x < g.dim(); ++x) {
    const auto masses = eigenspace_masses(basis, x, cluster_tol);
    if (rep.rows.empty())
      for (const auto& m : masses) rep.rows.push_back({m.value, m.multiplicity, 0.0});
    for (std::size_t j = 0; j < masses.size(); ++j) {
      auto& row = rep.rows[j];
      row.max_deviation =
          std::max(row.max_deviation, std::abs(masses[j].squared_mass - static_cast<double>(row.multiplicity) / dim));
    }
  }
  return rep;
}

}  // namespace exclusion
