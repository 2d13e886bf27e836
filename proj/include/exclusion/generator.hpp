#pragma once

// Generators Q^(n,ell,alpha) of the exclusion processes on K_n and the
// adjacency matrix of the transposition Cayley graph of S_k.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "exclusion/state_index.hpp"

namespace exclusion {

// Refuse to store more than this many nonzeros in one sparse matrix.
inline constexpr std::uint64_t kMaxSparseEntries = 20'000'000;

/// Square sparse matrix in coordinate form, entries sorted by (row, col).
/// row_start gives CSR-style offsets into entries.
class SparseMatrix {
 public:
  struct Entry {
    std::uint64_t row;
    std::uint64_t col;
    double value;
  };

  SparseMatrix() = default;

  /// Takes ownership of the entries; they must already be in canonical order.
  SparseMatrix(std::uint64_t dim, std::vector<Entry> entries)
      : dim_(dim), entries_(std::move(entries)), row_start_(dim + 1, 0) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      detail::require(e.row < dim_ && e.col < dim_, "sparse entry out of range");
      if (i > 0) {
        const auto& p = entries_[i - 1];
        detail::require(p.row < e.row || (p.row == e.row && p.col < e.col),
                        "sparse entries must be in strictly increasing (row, col) order");
      }
      ++row_start_[e.row + 1];
    }
    for (std::uint64_t r = 0; r < dim_; ++r) row_start_[r + 1] += row_start_[r];
  }

  std::uint64_t dim() const { return dim_; }
  const std::vector<Entry>& entries() const { return entries_; }

  std::span<const Entry> row(std::uint64_t r) const {
    return {entries_.data() + row_start_[r], row_start_[r + 1] - row_start_[r]};
  }

  double at(std::uint64_t r, std::uint64_t c) const {
    for (const auto& e : row(r))
      if (e.col == c) return e.value;
    return 0.0;
  }

  double row_sum(std::uint64_t r) const {
    double s = 0.0;
    for (const auto& e : row(r)) s += e.value;
    return s;
  }

  /// y = A x
  std::vector<double> multiply(std::span<const double> x) const {
    detail::require(x.size() == dim_, "multiply: dimension mismatch");
    std::vector<double> y(dim_, 0.0);
    for (const auto& e : entries_) y[e.row] += e.value * x[e.col];
    return y;
  }

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const {
    detail::require(static_cast<std::uint64_t>(x.size()) == dim_, "multiply: dimension mismatch");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
    for (const auto& e : entries_)
      y(static_cast<Eigen::Index>(e.row)) += e.value * x(static_cast<Eigen::Index>(e.col));
    return y;
  }

  bool is_symmetric(double tol = 0.0) const {
    for (const auto& e : entries_)
      if (std::abs(at(e.col, e.row) - e.value) > tol) return false;
    return true;
  }

  Eigen::MatrixXd to_dense(double scale = 1.0) const {
    const auto d = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (const auto& e : entries_)
      m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = scale * e.value;
    return m;
  }

 private:
  std::uint64_t dim_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::size_t> row_start_{0};
};

struct Generator {
  ProcessParams params;
  SparseMatrix matrix;

  std::uint64_t dim() const { return matrix.dim(); }
  /// Total jump rate out of every state, i.e. -Q(x,x).
  double exit_rate() const { return params.alpha * static_cast<double>(params.degree()); }
};

struct CayleyAdjacency {
  int k = 1;
  SparseMatrix matrix;

  std::uint64_t dim() const { return matrix.dim(); }
};

namespace detail {

inline void check_sparse_capacity(std::uint64_t dim, std::uint64_t per_row) {
  if (dim > kMaxEnumerated || dim * (per_row + 1) > kMaxSparseEntries)
    throw CapacityError("generator with " + std::to_string(dim) + " states and " +
                        std::to_string(per_row) + " moves per state is too large to store");
}

// Rows built from neighbor rank lists; diag placed in canonical position.
template <typename NeighborRanks>
SparseMatrix assemble(std::uint64_t dim, double diag, double off, NeighborRanks&& neighbor_ranks) {
  std::vector<SparseMatrix::Entry> entries;
  std::vector<Rank> cols;
  for (std::uint64_t r = 0; r < dim; ++r) {
    cols = neighbor_ranks(r);
    cols.push_back(r);
    std::sort(cols.begin(), cols.end());
    for (Rank c : cols) entries.push_back({r, c, c == r ? diag : off});
  }
  return SparseMatrix(dim, std::move(entries));
}

}  // namespace detail

inline Generator build_uep_generator(const ProcessParams& p) {
  p.validate();
  detail::require(p.kind == ProcessKind::UEP, "build_uep_generator: params must be UEP");
  const auto dim = p.state_count();
  detail::check_sparse_capacity(dim, p.degree());
  const auto states = enumerate_subsets(p.n, p.ell);
  auto neighbor_ranks = [&](Rank r) {
    std::vector<Rank> out;
    for (const auto& s : uep_neighbors(states[r], p.n)) out.push_back(rank_subset(s, p.n));
    return out;
  };
  const double diag = -p.alpha * static_cast<double>(p.degree());
  return Generator{p, detail::assemble(dim, diag, p.alpha, neighbor_ranks)};
}

inline Generator build_lep_generator(const ProcessParams& p) {
  p.validate();
  detail::require(p.kind == ProcessKind::LEP, "build_lep_generator: params must be LEP");
  const auto dim = p.state_count();
  detail::check_sparse_capacity(dim, p.degree());
  auto neighbor_ranks = [&](Rank r) {
    std::vector<Rank> out;
    for (const auto& y : lep_neighbors(unrank_tuple(r, p.n, p.ell), p.n)) out.push_back(rank_tuple(y, p.n));
    return out;
  };
  const double diag = -p.alpha * static_cast<double>(p.degree());
  return Generator{p, detail::assemble(dim, diag, p.alpha, neighbor_ranks)};
}

inline Generator build_generator(const ProcessParams& p) {
  return p.kind == ProcessKind::UEP ? build_uep_generator(p) : build_lep_generator(p);
}

/// Adjacency of the Cayley graph of S_k generated by all transpositions.
/// Permutations are indexed by rank_tuple with n = ell = k.
inline CayleyAdjacency build_cayley_adjacency(int k) {
  detail::require(k >= 1, "build_cayley_adjacency: k must be >= 1");
  const auto dim = falling_factorial(k, k);
  const auto per_row = static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(k - 1) / 2;
  detail::check_sparse_capacity(dim, per_row);
  std::vector<SparseMatrix::Entry> entries;
  std::vector<Rank> cols;
  for (Rank r = 0; r < dim; ++r) {
    const auto sigma = unrank_tuple(r, k, k);
    cols.clear();
    for (const auto& y : lep_neighbors(sigma, k)) cols.push_back(rank_tuple(y, k));
    std::sort(cols.begin(), cols.end());
    for (Rank c : cols) entries.push_back({r, c, 1.0});
  }
  return CayleyAdjacency{k, SparseMatrix(dim, std::move(entries))};
}

/// mu -> alpha (C(k,2) - mu): maps spec(A_k) onto spec(-Q^(k,k,alpha)).
struct AffineMap {
  double offset = 0.0;
  double scale = 1.0;

  double operator()(double mu) const { return offset + scale * mu; }
};

inline AffineMap relate_cayley_to_lep(int k, double alpha) {
  detail::require(k >= 1, "relate_cayley_to_lep: k must be >= 1");
  const double pairs = static_cast<double>(k) * static_cast<double>(k - 1) / 2.0;
  return AffineMap{alpha * pairs, -alpha};
}

/// "dim N" header, then one "row col value" line per stored entry.
inline void write_matrix_dump(std::ostream& os, const SparseMatrix& m) {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  os << "dim " << m.dim() << '\n';
  for (const auto& e : m.entries()) os << e.row << ' ' << e.col << ' ' << e.value << '\n';
  os.precision(old_precision);
}

}  // namespace exclusion
