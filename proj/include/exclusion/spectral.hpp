#pragma once

// Spectra of the exclusion and interchange processes:
//   - closed-form UEP spectrum,
//   - dense eigensolver oracle with multiplicity clustering,
//   - the envelope sets E^n_k containing the LEP spectrum,
//   - lift operators between levels ell -> ell+1 and their verification.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "exclusion/generator.hpp"
#include "exclusion/report.hpp"
#include "exclusion/state_index.hpp"

namespace exclusion {

// Largest matrix handed to the dense eigensolver.
inline constexpr std::uint64_t kOracleCapacity = 6000;

enum class SpectrumKind { UEP, LEP, Cayley };

inline const char* to_string(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::UEP: return "UEP";
    case SpectrumKind::LEP: return "LEP";
    case SpectrumKind::Cayley: return "CAYLEY";
  }
  return "?";
}

inline SpectrumKind spectrum_kind(ProcessKind k) {
  return k == ProcessKind::UEP ? SpectrumKind::UEP : SpectrumKind::LEP;
}

struct EigenPair {
  double value = 0.0;
  std::uint64_t multiplicity = 0;
};

/// Distinct eigenvalues (ascending) with multiplicities. For process spectra
/// the values are eigenvalues of -Q; for Cayley spectra of A_k (n = ell = k).
struct SpectrumSummary {
  SpectrumKind kind = SpectrumKind::UEP;
  int n = 1;
  int ell = 0;
  double alpha = 1.0;
  std::vector<EigenPair> pairs;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& p : pairs) t += p.multiplicity;
    return t;
  }

  /// Multiplicity of the eigenvalue within tol of v, or 0 if absent.
  std::uint64_t multiplicity_of(double v, double tol) const {
    for (const auto& p : pairs)
      if (std::abs(p.value - v) <= tol) return p.multiplicity;
    return 0;
  }

  bool contains(double v, double tol) const { return multiplicity_of(v, tol) > 0; }

  std::vector<double> values() const {
    std::vector<double> out;
    for (const auto& p : pairs) out.push_back(p.value);
    return out;
  }
};

/// Default clustering tolerance: 1e-6 in units of alpha n^2.
inline double default_cluster_tol(int n, double alpha) {
  return 1e-6 * alpha * static_cast<double>(n) * static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Closed form

/// Eigenvalues i alpha (n-i+1), i = 0..ell, multiplicities C(n,i) - C(n,i-1).
inline SpectrumSummary uep_spectrum_closed_form(const ProcessParams& p) {
  detail::require(p.kind == ProcessKind::UEP, "uep_spectrum_closed_form: params must be UEP");
  p.validate_uep_closed_form();
  SpectrumSummary s{SpectrumKind::UEP, p.n, p.ell, p.alpha, {}};
  for (int i = 0; i <= p.ell; ++i) {
    const double value = p.alpha * static_cast<double>(i) * static_cast<double>(p.n - i + 1);
    const std::uint64_t mult = binomial(p.n, i) - (i == 0 ? 0 : binomial(p.n, i - 1));
    s.pairs.push_back({value, mult});
  }
  return s;
}

// ---------------------------------------------------------------------------
// Dense oracle

/// Groups sorted values into clusters whose consecutive gaps are <= tol.
inline std::vector<EigenPair> cluster_eigenvalues(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<EigenPair> out;
  double sum = 0.0;
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (count > 0 && values[i] - values[i - 1] > tol) {
      out.push_back({sum / static_cast<double>(count), count});
      sum = 0.0;
      count = 0;
    }
    sum += values[i];
    ++count;
  }
  if (count > 0) out.push_back({sum / static_cast<double>(count), count});
  return out;
}

namespace detail {

inline void check_oracle_capacity(std::uint64_t dim) {
  if (dim > kOracleCapacity)
    throw CapacityError("dense eigensolver limited to dimension " + std::to_string(kOracleCapacity) +
                        ", got " + std::to_string(dim));
}

inline std::vector<double> dense_eigenvalues(const SparseMatrix& m, double scale) {
  check_oracle_capacity(m.dim());
  if (!m.is_symmetric()) throw std::logic_error("internal error: oracle input is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.to_dense(scale), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed to converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace detail

/// Spectrum of -Q by dense symmetric eigendecomposition.
inline SpectrumSummary brute_force_spectrum(const Generator& g, double cluster_tol) {
  SpectrumSummary s{spectrum_kind(g.params.kind), g.params.n, g.params.ell, g.params.alpha, {}};
  s.pairs = cluster_eigenvalues(detail::dense_eigenvalues(g.matrix, -1.0), cluster_tol);
  return s;
}

inline SpectrumSummary brute_force_spectrum(const Generator& g) {
  return brute_force_spectrum(g, default_cluster_tol(g.params.n, g.params.alpha));
}

/// Spectrum of A_k by dense symmetric eigendecomposition.
inline SpectrumSummary brute_force_spectrum(const CayleyAdjacency& a, double cluster_tol) {
  SpectrumSummary s{SpectrumKind::Cayley, a.k, a.k, 1.0, {}};
  s.pairs = cluster_eigenvalues(detail::dense_eigenvalues(a.matrix, 1.0), cluster_tol);
  return s;
}

inline SpectrumSummary brute_force_spectrum(const CayleyAdjacency& a) {
  return brute_force_spectrum(a, default_cluster_tol(a.k, 1.0));
}

/// spec(A_k), memoized per k. Values within 1e-6 of an integer are snapped
/// to it (the spectrum of A_k is integral).
inline const SpectrumSummary& cayley_spectrum(int k) {
  static std::mutex mutex;
  static std::map<int, SpectrumSummary> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(k); it != cache.end()) return it->second;
  }
  detail::require(k >= 1, "cayley_spectrum: k must be >= 1");
  detail::check_oracle_capacity(falling_factorial(k, k));
  auto s = brute_force_spectrum(build_cayley_adjacency(k));
  for (auto& p : s.pairs)
    if (std::abs(p.value - std::round(p.value)) < 1e-6) p.value = std::round(p.value);
  std::lock_guard lock(mutex);
  return cache.emplace(k, std::move(s)).first->second;
}

/// Orthonormal eigenbasis of -Q: column i of vectors pairs with eigenvalues(i),
/// ascending. Column 0 is the positive constant vector 1/sqrt(N).
struct EigenBasis {
  ProcessParams params;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd vectors;

  std::uint64_t dim() const { return static_cast<std::uint64_t>(eigenvalues.size()); }
};

inline EigenBasis compute_eigen_basis(const Generator& g) {
  detail::check_oracle_capacity(g.dim());
  if (!g.matrix.is_symmetric()) throw std::logic_error("internal error: generator is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.matrix.to_dense(-1.0));
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed to converge");
  EigenBasis b{g.params, solver.eigenvalues(), solver.eigenvectors()};
  if (b.vectors.cols() > 0 && b.vectors.col(0).sum() < 0.0) b.vectors.col(0) *= -1.0;
  return b;
}

// ---------------------------------------------------------------------------
// Envelope sets E^n_k

struct EnvelopeSet {
  int n = 1;
  int ell = 0;
  double alpha = 1.0;
  std::vector<double> values;  // sorted, distinct

  bool contains(double v, double tol) const {
    auto it = std::lower_bound(values.begin(), values.end(), v - tol);
    return it != values.end() && *it <= v + tol;
  }
};

namespace detail {

inline double merge_tol(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

inline void insert_value(std::vector<double>& values, double v) {
  auto it = std::lower_bound(values.begin(), values.end(), v - merge_tol(v));
  if (it != values.end() && *it <= v + merge_tol(v)) return;
  values.insert(it, v);
}

}  // namespace detail

/// E^n_ell: E_0 = {0}, E_1 = {0, alpha n},
/// E_{k+1} = E_k u alpha (n(k+1) - C(k+1,2) - spec(A_{k+1})) for k+1 <= n-1,
/// and E_n = E_{n-1}. spec(A_{k+1}) comes from the dense oracle.
inline EnvelopeSet envelope(int n, int ell, double alpha) {
  ProcessParams::lep(n, ell, alpha).validate();
  EnvelopeSet e{n, ell, alpha, {0.0}};
  if (ell >= 1) detail::insert_value(e.values, alpha * static_cast<double>(n));
  const int top = std::min(ell, n - 1);
  for (int k = 1; k + 1 <= top; ++k) {
    const double m = static_cast<double>(k + 1);
    const double center = static_cast<double>(n) * m - m * (m - 1.0) / 2.0;
    for (const auto& p : cayley_spectrum(k + 1).pairs) detail::insert_value(e.values, alpha * (center - p.value));
  }
  return e;
}

/// Largest subset of e symmetric around center.
inline EnvelopeSet symmetric_core(const EnvelopeSet& e, double center) {
  EnvelopeSet out{e.n, e.ell, e.alpha, {}};
  for (double v : e.values) {
    const double mirror = 2.0 * center - v;
    if (e.contains(mirror, detail::merge_tol(mirror))) out.values.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lifts

/// Index table of a lift from level ell to ell+1: row r of the lifted
/// function reads sources[r*fan_in .. (r+1)*fan_in) at level ell.
struct LiftTable {
  std::uint64_t source_dim = 0;
  std::uint64_t target_dim = 0;
  int fan_in = 0;
  std::vector<Rank> sources;

  std::vector<double> apply(std::span<const double> f) const {
    detail::require(f.size() == source_dim, "lift: input has wrong dimension");
    std::vector<double> out(target_dim, 0.0);
    for (std::uint64_t r = 0; r < target_dim; ++r)
      for (int j = 0; j < fan_in; ++j) out[r] += f[sources[r * static_cast<std::uint64_t>(fan_in) + static_cast<std::uint64_t>(j)]];
    return out;
  }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& f) const {
    detail::require(static_cast<std::uint64_t>(f.rows()) == source_dim, "lift: input has wrong dimension");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(target_dim), f.cols());
    for (std::uint64_t r = 0; r < target_dim; ++r)
      for (int j = 0; j < fan_in; ++j)
        out.row(static_cast<Eigen::Index>(r)) +=
            f.row(static_cast<Eigen::Index>(sources[r * static_cast<std::uint64_t>(fan_in) + static_cast<std::uint64_t>(j)]));
    return out;
  }

  /// Adjoint: (L^T g)(s) = sum of g over targets reading s.
  Eigen::MatrixXd apply_transpose(const Eigen::MatrixXd& g) const {
    detail::require(static_cast<std::uint64_t>(g.rows()) == target_dim, "lift adjoint: wrong dimension");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(source_dim), g.cols());
    for (std::uint64_t r = 0; r < target_dim; ++r)
      for (int j = 0; j < fan_in; ++j)
        out.row(static_cast<Eigen::Index>(sources[r * static_cast<std::uint64_t>(fan_in) + static_cast<std::uint64_t>(j)])) +=
            g.row(static_cast<Eigen::Index>(r));
    return out;
  }
};

/// UEP lift: f^(J) = sum over j in J of f(J \ {j}).
inline LiftTable uep_lift_table(int n, int ell) {
  detail::require(n >= 1 && ell >= 0 && ell + 1 <= n, "UEP lift needs 0 <= ell and ell+1 <= n");
  LiftTable t{binomial(n, ell), binomial(n, ell + 1), ell + 1, {}};
  t.sources.reserve(t.target_dim * static_cast<std::uint64_t>(t.fan_in));
  for (const auto& s : enumerate_subsets(n, ell + 1)) {
    for (std::size_t j = 0; j < s.members.size(); ++j) {
      SubsetState smaller = s;
      smaller.members.erase(smaller.members.begin() + static_cast<std::ptrdiff_t>(j));
      t.sources.push_back(rank_subset(smaller, n));
    }
  }
  return t;
}

/// LEP lift for ball label `ball` in 1..ell+1: f^ball ignores that ball's position.
inline LiftTable lep_lift_table(int n, int ell, int ball) {
  detail::require(n >= 1 && ell >= 0 && ell + 1 <= n, "LEP lift needs 0 <= ell and ell+1 <= n");
  detail::require(ball >= 1 && ball <= ell + 1, "LEP lift: ball index must lie in 1..ell+1");
  LiftTable t{falling_factorial(n, ell), falling_factorial(n, ell + 1), 1, {}};
  t.sources.reserve(t.target_dim);
  for (Rank r = 0; r < t.target_dim; ++r) {
    auto x = unrank_tuple(r, n, ell + 1);
    x.positions.erase(x.positions.begin() + (ball - 1));
    t.sources.push_back(rank_tuple(x, n));
  }
  return t;
}

/// f given by subset rank at level ell; result indexed by (ell+1)-subset rank.
inline std::vector<double> lift_uep(std::span<const double> f, int n, int ell) {
  return uep_lift_table(n, ell).apply(f);
}

/// f given by tuple rank at level ell; result indexed by (ell+1)-tuple rank.
inline std::vector<double> lift_lep(std::span<const double> f, int ball, int n, int ell) {
  return lep_lift_table(n, ell, ball).apply(f);
}

namespace detail {

// Orthonormal basis of the orthogonal complement of range(W), via the
// eigendecomposition of W W^T.
inline Eigen::MatrixXd range_complement(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(w * w.transpose());
  const auto& ev = solver.eigenvalues();
  const double cut = 1e-8 * std::max(1.0, ev.size() ? ev(ev.size() - 1) : 0.0);
  Eigen::Index k = 0;
  while (k < ev.size() && ev(k) <= cut) ++k;
  return solver.eigenvectors().leftCols(k);
}

inline double max_offdiag_abs(const Eigen::MatrixXd& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) worst = std::max(worst, std::abs(m(i, j)));
  return worst;
}

}  // namespace detail

/// Checks the lift lemmas going from level ell to ell+1 on a full eigenbasis.
///
/// UEP (only when 2 ell < n, where the lift is injective): every eigenvector
/// with eigenvalue <= alpha ell(n-ell+1) lifts to a nonzero eigenvector for
/// the same eigenvalue, lifts stay pairwise orthogonal, and the orthogonal
/// complement of the lifts has dimension C(n,ell+1)-C(n,ell) and consists of
/// eigenvectors for alpha (ell+1)(n-ell).
///
/// LEP: each single-ball lift is an eigenvector for the same eigenvalue with
/// orthogonality preserved; the complement of all lifts is invariant, is
/// annihilated by every lift adjoint, and carries only eigenvalues in
/// alpha (n(ell+1) - C(ell+1,2) - spec(A_{ell+1})), none below
/// alpha (ell+1)(n-ell).
inline VerificationReport verify_lift_lemmas(int n, int ell, double alpha, double tol) {
  ProcessParams::lep(n, ell, alpha).validate();
  detail::require(ell + 1 <= n, "verify_lift_lemmas: need ell+1 <= n");
  VerificationReport report;
  const std::string where = "(n=" + std::to_string(n) + ",ell=" + std::to_string(ell) + ")";

  // UEP part
  if (2 * ell < n) {
    const auto lo = build_uep_generator(ProcessParams::uep(n, ell, alpha));
    const auto hi = build_uep_generator(ProcessParams::uep(n, ell + 1, alpha));
    detail::check_oracle_capacity(hi.dim());
    const auto basis = compute_eigen_basis(lo);
    const Eigen::MatrixXd neg_q = hi.matrix.to_dense(-1.0);
    const double scale = std::max(1.0, 2.0 * hi.exit_rate());
    const auto table = uep_lift_table(n, ell);
    const Eigen::MatrixXd lifted = table.apply(basis.vectors);
    const double hypothesis = alpha * ell * (n - ell + 1);

    double min_norm = std::numeric_limits<double>::infinity();
    double worst_residual = 0.0;
    for (Eigen::Index i = 0; i < lifted.cols(); ++i) {
      const double lambda = basis.eigenvalues(i);
      if (lambda > hypothesis + tol * scale) continue;
      const double norm = lifted.col(i).norm();
      min_norm = std::min(min_norm, norm);
      if (norm > 0.0)
        worst_residual = std::max(worst_residual, (neg_q * lifted.col(i) - lambda * lifted.col(i)).norm() / norm);
    }
    report.add("uep_lift_nonzero " + where, min_norm >= 1e-9, min_norm, 1e-9);
    report.add("uep_lift_eigen_equation " + where, worst_residual <= tol * scale, worst_residual, tol * scale);

    const Eigen::MatrixXd gram = lifted.transpose() * lifted;
    const double gram_scale = std::max(1.0, gram.diagonal().maxCoeff());
    const double off = detail::max_offdiag_abs(gram);
    report.add("uep_lift_orthogonal " + where, off <= tol * gram_scale, off, tol * gram_scale);

    const Eigen::MatrixXd comp = detail::range_complement(lifted);
    const auto expected_dim = static_cast<Eigen::Index>(binomial(n, ell + 1) - binomial(n, ell));
    report.add("uep_complement_dimension " + where, comp.cols() == expected_dim, static_cast<double>(comp.cols()),
               static_cast<double>(expected_dim));
    const double fresh = alpha * (ell + 1) * (n - ell);
    const double comp_residual = comp.cols() ? (neg_q * comp - fresh * comp).norm() : 0.0;
    report.add("uep_complement_eigenvalue " + where, comp_residual <= tol * scale, comp_residual, tol * scale,
               "lambda=" + std::to_string(fresh));
  }

  // LEP part
  {
    const auto lo = build_lep_generator(ProcessParams::lep(n, ell, alpha));
    const auto hi = build_lep_generator(ProcessParams::lep(n, ell + 1, alpha));
    detail::check_oracle_capacity(hi.dim());
    const auto basis = compute_eigen_basis(lo);
    const Eigen::MatrixXd neg_q = hi.matrix.to_dense(-1.0);
    const double scale = std::max(1.0, 2.0 * hi.exit_rate());
    const auto basis_cols = basis.vectors.cols();

    Eigen::MatrixXd all(static_cast<Eigen::Index>(hi.dim()), basis_cols * (ell + 1));
    std::vector<LiftTable> tables;
    double worst_residual = 0.0;
    double worst_off = 0.0;
    double min_norm = std::numeric_limits<double>::infinity();
    for (int ball = 1; ball <= ell + 1; ++ball) {
      tables.push_back(lep_lift_table(n, ell, ball));
      const Eigen::MatrixXd lifted = tables.back().apply(basis.vectors);
      for (Eigen::Index i = 0; i < basis_cols; ++i) {
        const double norm = lifted.col(i).norm();
        min_norm = std::min(min_norm, norm);
        worst_residual = std::max(
            worst_residual, (neg_q * lifted.col(i) - basis.eigenvalues(i) * lifted.col(i)).norm() / norm);
      }
      const Eigen::MatrixXd gram = lifted.transpose() * lifted;
      worst_off = std::max(worst_off, detail::max_offdiag_abs(gram) / std::max(1.0, gram.diagonal().maxCoeff()));
      all.middleCols((ball - 1) * basis_cols, basis_cols) = lifted;
    }
    report.add("lep_lift_nonzero " + where, min_norm >= 1e-9, min_norm, 1e-9);
    report.add("lep_lift_eigen_equation " + where, worst_residual <= tol * scale, worst_residual, tol * scale);
    report.add("lep_lift_orthogonal " + where, worst_off <= tol, worst_off, tol);

    const Eigen::MatrixXd comp = detail::range_complement(all);
    double annihilated = 0.0;
    for (const auto& t : tables)
      if (comp.cols()) annihilated = std::max(annihilated, t.apply_transpose(comp).cwiseAbs().maxCoeff());
    report.add("lep_complement_zero_marginals " + where, annihilated <= tol * scale, annihilated, tol * scale);

    const Eigen::MatrixXd restricted = comp.transpose() * neg_q * comp;
    const double invariance = comp.cols() ? (neg_q * comp - comp * restricted).norm() : 0.0;
    report.add("lep_complement_invariant " + where, invariance <= tol * scale, invariance, tol * scale);

    const double m = ell + 1;
    const double center = n * m - m * (m - 1.0) / 2.0;
    const auto& cayley = cayley_spectrum(ell + 1);
    const double floor_value = alpha * m * (n - ell);
    double worst_membership = 0.0;
    double lowest = std::numeric_limits<double>::infinity();
    if (comp.cols()) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restricted, Eigen::EigenvaluesOnly);
      for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double lambda = solver.eigenvalues()(i);
        lowest = std::min(lowest, lambda);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : cayley.pairs) best = std::min(best, std::abs(lambda - alpha * (center - p.value)));
        worst_membership = std::max(worst_membership, best);
      }
    }
    report.add("lep_complement_in_cayley_band " + where, worst_membership <= tol * scale, worst_membership,
               tol * scale, "complement_dim=" + std::to_string(comp.cols()));
    const bool floor_ok = comp.cols() == 0 || lowest >= floor_value - tol * scale;
    report.add("lep_fresh_eigenvalue_floor " + where, floor_ok, comp.cols() ? lowest : floor_value, floor_value);
  }
  return report;
}

/// Multiplicity claims for an LEP spectrum: eigenvalue alpha n has
/// multiplicity ell(n-1); for 1 <= j <= min(ell, n-ell) the eigenvalues in
/// [alpha j(n-j+1), alpha (j+1)(n-j)) have total multiplicity at most
/// (n)_j C(ell,j); if next_level is given, every eigenvalue here also occurs
/// at level ell+1.
inline VerificationReport multiplicity_checks(const SpectrumSummary& s, double tol,
                                              const SpectrumSummary* next_level = nullptr) {
  VerificationReport report;
  const int n = s.n;
  const int ell = s.ell;
  const double a = s.alpha;
  const std::string where = "(n=" + std::to_string(n) + ",ell=" + std::to_string(ell) + ")";

  const auto mult_n = s.multiplicity_of(a * n, tol);
  const auto expected = static_cast<std::uint64_t>(ell) * static_cast<std::uint64_t>(n - 1);
  report.add("multiplicity_of_alpha_n " + where, mult_n == expected, static_cast<double>(mult_n),
             static_cast<double>(expected));

  for (int j = 1; j <= std::min(ell, n - ell); ++j) {
    const double lo = a * j * (n - j + 1) - tol;
    const double hi = a * (j + 1) * (n - j) - tol;
    std::uint64_t total = 0;
    for (const auto& p : s.pairs)
      if (p.value >= lo && p.value < hi) total += p.multiplicity;
    const auto bound = falling_factorial(n, j) * binomial(ell, j);
    report.add("band_multiplicity j=" + std::to_string(j) + " " + where, total <= bound, static_cast<double>(total),
               static_cast<double>(bound));
  }

  if (next_level) {
    std::size_t missing = 0;
    for (const auto& p : s.pairs)
      if (!next_level->contains(p.value, tol)) ++missing;
    report.add("monotone_in_ell " + where, missing == 0, static_cast<double>(missing), 0.0);
  }
  return report;
}

/// c_i(x) = <e_x, phi_i> for every basis vector i.
inline std::vector<double> project_indicator(const EigenBasis& b, Rank x) {
  detail::require(x < b.dim(), "project_indicator: state rank out of range");
  const Eigen::VectorXd row = b.vectors.row(static_cast<Eigen::Index>(x)).transpose();
  return {row.data(), row.data() + row.size()};
}

struct EigenspaceMass {
  double value = 0.0;
  std::uint64_t multiplicity = 0;
  double squared_mass = 0.0;  // C_j(x)^2
};

/// C_j(x)^2 = sum of c_i(x)^2 over each cluster of equal eigenvalues.
inline std::vector<EigenspaceMass> eigenspace_masses(const EigenBasis& b, Rank x, double cluster_tol) {
  const auto c = project_indicator(b, x);
  std::vector<EigenspaceMass> out;
  for (Eigen::Index i = 0; i < b.eigenvalues.size(); ++i) {
    const double v = b.eigenvalues(i);
    if (out.empty() || v - b.eigenvalues(i - 1) > cluster_tol) out.push_back({v, 0, 0.0});
    auto& cur = out.back();
    cur.value = (cur.value * static_cast<double>(cur.multiplicity) + v) / static_cast<double>(cur.multiplicity + 1);
    cur.multiplicity += 1;
    cur.squared_mass += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace exclusion
