#pragma once

// States of the exclusion processes on the complete graph K_n and their
// canonical integer ranks.
//
//   UEP state: an ell-subset of {0,...,n-1}, ranked in colex order through
//              the combinatorial number system.
//   LEP state: an ordered ell-tuple of distinct vertices (entry j = position
//              of ball j), ranked through a falling-factorial mixed-radix
//              code, which coincides with lexicographic order of tuples.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "exclusion/errors.hpp"

namespace exclusion {

using Rank = std::uint64_t;
using Vertex = int;

enum class ProcessKind { UEP, LEP };

inline const char* to_string(ProcessKind k) { return k == ProcessKind::UEP ? "UEP" : "LEP"; }

// Largest state-space size accepted anywhere (exclusive bound 2^63).
inline constexpr std::uint64_t kMaxStates = std::uint64_t{1} << 63;
// Enumerations materialize every state; refuse beyond this.
inline constexpr std::uint64_t kMaxEnumerated = 50'000'000;

/// C(n, k) in exact 64-bit arithmetic. Throws CapacityError when the result
/// reaches 2^63.
inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    // r * (n-k+i) / i is exact at every step
    r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (r >= kMaxStates)
      throw CapacityError("binomial C(" + std::to_string(n) + "," + std::to_string(k) +
                          ") exceeds 2^63");
  }
  return static_cast<std::uint64_t>(r);
}

/// (n)_k = n (n-1) ... (n-k+1). Throws CapacityError when the result reaches 2^63.
inline std::uint64_t falling_factorial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  unsigned __int128 r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    r *= static_cast<unsigned __int128>(n - i);
    if (r >= kMaxStates)
      throw CapacityError("falling factorial (" + std::to_string(n) + ")_" + std::to_string(k) +
                          " exceeds 2^63");
  }
  return static_cast<std::uint64_t>(r);
}

struct ProcessParams {
  int n = 1;
  int ell = 0;
  double alpha = 1.0;
  ProcessKind kind = ProcessKind::UEP;

  static ProcessParams uep(int n, int ell, double alpha) { return {n, ell, alpha, ProcessKind::UEP}; }
  static ProcessParams lep(int n, int ell, double alpha) { return {n, ell, alpha, ProcessKind::LEP}; }

  void validate() const {
    detail::require(n >= 1, "n must be >= 1");
    detail::require(ell >= 0 && ell <= n, "ell must satisfy 0 <= ell <= n");
    detail::require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive and finite");
  }

  // The closed-form UEP results are stated for ell <= n/2.
  void validate_uep_closed_form() const {
    validate();
    detail::require(2 * ell <= n, "closed-form UEP results need ell <= n/2");
  }

  /// Number of states: C(n,ell) for UEP, (n)_ell for LEP.
  std::uint64_t state_count() const {
    return kind == ProcessKind::UEP ? binomial(n, ell) : falling_factorial(n, ell);
  }

  /// Number of neighbor moves out of any state (the generator's |diagonal| / alpha).
  std::uint64_t degree() const {
    const auto moves = static_cast<std::uint64_t>(ell) * static_cast<std::uint64_t>(n - ell);
    if (kind == ProcessKind::UEP) return moves;
    return moves + static_cast<std::uint64_t>(ell) * static_cast<std::uint64_t>(ell - 1) / 2;
  }
};

struct SubsetState {
  std::vector<Vertex> members;  // strictly increasing

  friend bool operator==(const SubsetState&, const SubsetState&) = default;
  friend auto operator<=>(const SubsetState&, const SubsetState&) = default;
};

struct TupleState {
  std::vector<Vertex> positions;  // positions[j] = vertex of ball j, all distinct

  friend bool operator==(const TupleState&, const TupleState&) = default;
  friend auto operator<=>(const TupleState&, const TupleState&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const SubsetState& s) {
  os << '{';
  for (std::size_t i = 0; i < s.members.size(); ++i) os << (i ? "," : "") << s.members[i];
  return os << '}';
}

inline std::ostream& operator<<(std::ostream& os, const TupleState& x) {
  os << '(';
  for (std::size_t i = 0; i < x.positions.size(); ++i) os << (i ? "," : "") << x.positions[i];
  return os << ')';
}

inline void validate_subset(const SubsetState& s, int n) {
  detail::require(static_cast<int>(s.members.size()) <= n, "subset larger than vertex set");
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    detail::require(s.members[i] >= 0 && s.members[i] < n, "subset member out of range");
    detail::require(i == 0 || s.members[i - 1] < s.members[i], "subset members must be strictly increasing");
  }
}

inline void validate_tuple(const TupleState& x, int n) {
  detail::require(static_cast<int>(x.positions.size()) <= n, "tuple longer than vertex set");
  for (std::size_t i = 0; i < x.positions.size(); ++i) {
    detail::require(x.positions[i] >= 0 && x.positions[i] < n, "tuple entry out of range");
    for (std::size_t j = 0; j < i; ++j)
      detail::require(x.positions[j] != x.positions[i], "tuple entries must be distinct");
  }
}

// ---------------------------------------------------------------------------
// Subsets (colex)

inline Rank rank_subset(const SubsetState& s, int n) {
  validate_subset(s, n);
  Rank r = 0;
  for (std::size_t i = 0; i < s.members.size(); ++i)
    r += binomial(s.members[i], static_cast<std::int64_t>(i) + 1);
  return r;
}

inline SubsetState unrank_subset(Rank r, int n, int ell) {
  detail::require(n >= 1 && ell >= 0 && ell <= n, "unrank_subset: need 0 <= ell <= n");
  detail::require(r < binomial(n, ell), "unrank_subset: rank out of range");
  SubsetState s;
  s.members.resize(static_cast<std::size_t>(ell));
  int m = n - 1;
  for (int i = ell - 1; i >= 0; --i) {
    // largest m with C(m, i+1) <= r
    while (binomial(m, i + 1) > r) --m;
    s.members[static_cast<std::size_t>(i)] = m;
    r -= binomial(m, i + 1);
    --m;
  }
  return s;
}

/// All C(n,ell) subsets; element r has rank r.
inline std::vector<SubsetState> enumerate_subsets(int n, int ell) {
  detail::require(n >= 1 && ell >= 0 && ell <= n, "enumerate_subsets: need 0 <= ell <= n");
  const auto count = binomial(n, ell);
  if (count > kMaxEnumerated) throw CapacityError("enumerate_subsets: too many states");
  std::vector<SubsetState> out;
  out.reserve(count);
  std::vector<Vertex> cur(static_cast<std::size_t>(ell));
  for (int i = 0; i < ell; ++i) cur[static_cast<std::size_t>(i)] = i;
  for (std::uint64_t r = 0; r < count; ++r) {
    out.push_back(SubsetState{cur});
    // colex successor: bump the lowest member that has room, reset those below it
    int i = 0;
    while (i < ell) {
      const auto ui = static_cast<std::size_t>(i);
      const int limit = (i + 1 < ell) ? cur[ui + 1] : n;
      if (cur[ui] + 1 < limit) break;
      ++i;
    }
    if (i == ell) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) cur[static_cast<std::size_t>(j)] = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tuples (falling-factorial code)

inline Rank rank_tuple(const TupleState& x, int n) {
  validate_tuple(x, n);
  const int ell = static_cast<int>(x.positions.size());
  Rank r = 0;
  for (int j = 0; j < ell; ++j) {
    const Vertex v = x.positions[static_cast<std::size_t>(j)];
    int digit = v;
    for (int i = 0; i < j; ++i)
      if (x.positions[static_cast<std::size_t>(i)] < v) --digit;
    // radix of digit j is n-j
    r = r * static_cast<Rank>(n - j) + static_cast<Rank>(digit);
  }
  return r;
}

inline TupleState unrank_tuple(Rank r, int n, int ell) {
  detail::require(n >= 1 && ell >= 0 && ell <= n, "unrank_tuple: need 0 <= ell <= n");
  detail::require(r < falling_factorial(n, ell), "unrank_tuple: rank out of range");
  std::vector<int> digits(static_cast<std::size_t>(ell));
  for (int j = ell - 1; j >= 0; --j) {
    const auto radix = static_cast<Rank>(n - j);
    digits[static_cast<std::size_t>(j)] = static_cast<int>(r % radix);
    r /= radix;
  }
  TupleState x;
  x.positions.reserve(static_cast<std::size_t>(ell));
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int j = 0; j < ell; ++j) {
    int remaining = digits[static_cast<std::size_t>(j)];
    Vertex v = 0;
    for (;; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      if (remaining == 0) break;
      --remaining;
    }
    used[static_cast<std::size_t>(v)] = true;
    x.positions.push_back(v);
  }
  return x;
}

inline std::vector<TupleState> enumerate_tuples(int n, int ell) {
  detail::require(n >= 1 && ell >= 0 && ell <= n, "enumerate_tuples: need 0 <= ell <= n");
  const auto count = falling_factorial(n, ell);
  if (count > kMaxEnumerated) throw CapacityError("enumerate_tuples: too many states");
  std::vector<TupleState> out;
  out.reserve(count);
  for (Rank r = 0; r < count; ++r) out.push_back(unrank_tuple(r, n, ell));
  return out;
}

// ---------------------------------------------------------------------------
// Neighbors on K_n

/// States reachable by swapping one member with one non-member, in
/// lexicographic order. Exactly ell(n-ell) of them.
inline std::vector<SubsetState> uep_neighbors(const SubsetState& s, int n) {
  validate_subset(s, n);
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (Vertex v : s.members) in[static_cast<std::size_t>(v)] = true;
  std::vector<SubsetState> out;
  out.reserve(s.members.size() * (static_cast<std::size_t>(n) - s.members.size()));
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    for (Vertex w = 0; w < n; ++w) {
      if (in[static_cast<std::size_t>(w)]) continue;
      SubsetState t = s;
      t.members[i] = w;
      std::sort(t.members.begin(), t.members.end());
      out.push_back(std::move(t));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Single-ball moves to empty vertices (ball by ball, targets ascending),
/// then transpositions of balls i<j. Exactly ell(n-ell) + C(ell,2) states.
inline std::vector<TupleState> lep_neighbors(const TupleState& x, int n) {
  validate_tuple(x, n);
  const std::size_t ell = x.positions.size();
  std::vector<bool> occupied(static_cast<std::size_t>(n), false);
  for (Vertex v : x.positions) occupied[static_cast<std::size_t>(v)] = true;
  std::vector<TupleState> out;
  out.reserve(ell * (static_cast<std::size_t>(n) - ell) + ell * (ell - (ell ? 1 : 0)) / 2);
  for (std::size_t b = 0; b < ell; ++b) {
    for (Vertex w = 0; w < n; ++w) {
      if (occupied[static_cast<std::size_t>(w)]) continue;
      TupleState y = x;
      y.positions[b] = w;
      out.push_back(std::move(y));
    }
  }
  for (std::size_t i = 0; i < ell; ++i) {
    for (std::size_t j = i + 1; j < ell; ++j) {
      TupleState y = x;
      std::swap(y.positions[i], y.positions[j]);
      out.push_back(std::move(y));
    }
  }
  return out;
}

}  // namespace exclusion
