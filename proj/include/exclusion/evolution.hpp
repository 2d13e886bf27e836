#pragma once

// Time-t laws of the exclusion processes (spectral and uniformization
// routes), continuous-time Monte Carlo, and empirical distance estimates.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "exclusion/generator.hpp"
#include "exclusion/spectral.hpp"
#include "exclusion/state_index.hpp"

namespace exclusion {

/// Probability vector indexed by state rank.
struct Distribution {
  std::vector<double> probs;

  std::uint64_t dim() const { return probs.size(); }
  double sum() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
  }
};

enum class KernelMethod { Spectral, Uniformization };

namespace detail {

inline Distribution clamp_distribution(std::vector<double> p) {
  for (double& v : p) v = std::max(v, 0.0);
  return Distribution{std::move(p)};
}

inline void check_kernel_args(std::uint64_t dim, Rank x0, double t) {
  require(x0 < dim, "heat_kernel_row: start rank out of range");
  require(t >= 0.0 && std::isfinite(t), "heat_kernel_row: time must be finite and nonnegative");
}

}  // namespace detail

/// P_x0(X_t = .) from a precomputed eigenbasis of -Q.
inline Distribution heat_kernel_row(const EigenBasis& b, Rank x0, double t) {
  detail::check_kernel_args(b.dim(), x0, t);
  const Eigen::VectorXd weights =
      (b.vectors.row(static_cast<Eigen::Index>(x0)).transpose().array() * (-b.eigenvalues.array() * t).exp()).matrix();
  const Eigen::VectorXd p = b.vectors * weights;
  return detail::clamp_distribution({p.data(), p.data() + p.size()});
}

/// P_x0(X_t = .) by uniformization at the constant exit rate: the jump chain
/// I + Q/rate has no self-loops, and the Poisson series is cut once the
/// accumulated weight exceeds 1 - 1e-13.
inline Distribution heat_kernel_row_uniformized(const Generator& g, Rank x0, double t) {
  detail::check_kernel_args(g.dim(), x0, t);
  const double rate = g.exit_rate();
  std::vector<double> v(g.dim(), 0.0);
  v[x0] = 1.0;
  if (rate == 0.0 || t == 0.0) return Distribution{v};

  const double mean = rate * t;
  const double log_mean = std::log(mean);
  const auto max_terms = static_cast<std::uint64_t>(mean + 60.0 * std::sqrt(mean) + 200.0);
  std::vector<double> out(g.dim(), 0.0);
  double accumulated = 0.0;
  for (std::uint64_t k = 0;; ++k) {
    const double w = std::exp(-mean + static_cast<double>(k) * log_mean - std::lgamma(static_cast<double>(k) + 1.0));
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += w * v[i];
    accumulated += w;
    if ((accumulated > 1.0 - 1e-13 && static_cast<double>(k) >= mean) || k >= max_terms) break;
    // v <- v + Q v / rate
    const auto qv = g.matrix.multiply(std::span<const double>(v));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += qv[i] / rate;
  }
  return detail::clamp_distribution(std::move(out));
}

inline Distribution heat_kernel_row(const Generator& g, Rank x0, double t,
                                    KernelMethod method = KernelMethod::Spectral) {
  if (method == KernelMethod::Uniformization) return heat_kernel_row_uniformized(g, x0, t);
  return heat_kernel_row(compute_eigen_basis(g), x0, t);
}

/// sqrt(N sum_s (d_s - 1/N)^2): L2(pi) distance to the uniform law.
inline double l2_distance(const Distribution& d) {
  const double n = static_cast<double>(d.dim());
  double s = 0.0;
  for (double p : d.probs) s += (p - 1.0 / n) * (p - 1.0 / n);
  return std::sqrt(n * s);
}

/// (1/2) sum_s |d_s - 1/N|.
inline double tv_distance(const Distribution& d) {
  const double n = static_cast<double>(d.dim());
  double s = 0.0;
  for (double p : d.probs) s += std::abs(p - 1.0 / n);
  return 0.5 * s;
}

// ---------------------------------------------------------------------------
// Simulation

struct SimConfig {
  ProcessParams params;
  double horizon = 0.0;
  std::uint64_t replicas = 1;
  std::uint64_t seed = 0;
  Rank start = 0;

  void validate() const {
    params.validate();
    detail::require(replicas >= 1, "replicas must be >= 1");
    detail::require(horizon >= 0.0 && std::isfinite(horizon), "horizon must be finite and nonnegative");
    detail::require(start < params.state_count(), "start rank out of range");
  }
};

/// SplitMix64: seeds one independent stream per (seed, replica).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** with the draws the simulator needs. Platform independent,
/// unlike the std distributions.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 sm(seed ^ (0xD1B54A32D192ED03ull * (stream + 1)));
    for (auto& s : s_) s = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  /// Uniform on [0, bound) by multiply-shift; bias at most bound / 2^64.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Runs one replica to the horizon and returns the final state rank.
///
/// Vertices are kept in one array whose first ell slots are the occupied
/// vertices (slot j = ball j for the LEP); a move swaps two slots. Holding
/// times use the aggregate exit rate, and each jump picks one of the
/// degree() moves uniformly, which has the same law as per-edge clocks.
inline Rank simulate(const SimConfig& cfg, std::uint64_t replica) {
  cfg.validate();
  const auto& p = cfg.params;
  const auto n = static_cast<std::size_t>(p.n);
  const auto ell = static_cast<std::size_t>(p.ell);

  std::vector<Vertex> slots;
  slots.reserve(n);
  if (p.kind == ProcessKind::UEP)
    slots = unrank_subset(cfg.start, p.n, p.ell).members;
  else
    slots = unrank_tuple(cfg.start, p.n, p.ell).positions;
  {
    std::vector<bool> occupied(n, false);
    for (Vertex v : slots) occupied[static_cast<std::size_t>(v)] = true;
    for (std::size_t v = 0; v < n; ++v)
      if (!occupied[v]) slots.push_back(static_cast<Vertex>(v));
  }

  const std::uint64_t moves = ell * (n - ell);
  const std::uint64_t degree = p.degree();
  if (degree > 0 && cfg.horizon > 0.0) {
    Rng rng(cfg.seed, replica);
    const double rate = p.alpha * static_cast<double>(degree);
    double time = rng.exponential(rate);
    while (time <= cfg.horizon) {
      std::uint64_t u = rng.below(degree);
      if (u < moves) {
        const auto ball = static_cast<std::size_t>(u / (n - ell));
        const auto hole = static_cast<std::size_t>(u % (n - ell));
        std::swap(slots[ball], slots[ell + hole]);
      } else {
        u -= moves;
        std::size_t i = 0;
        while (u >= ell - 1 - i) {
          u -= ell - 1 - i;
          ++i;
        }
        std::swap(slots[i], slots[i + 1 + static_cast<std::size_t>(u)]);
      }
      time += rng.exponential(rate);
    }
  }

  slots.resize(ell);
  if (p.kind == ProcessKind::UEP) {
    std::sort(slots.begin(), slots.end());
    return rank_subset(SubsetState{slots}, p.n);
  }
  return rank_tuple(TupleState{slots}, p.n);
}

/// Final states of replicas 0..replicas-1.
inline std::vector<Rank> simulate_endpoints(const SimConfig& cfg) {
  cfg.validate();
  std::vector<Rank> out;
  out.reserve(cfg.replicas);
  for (std::uint64_t r = 0; r < cfg.replicas; ++r) out.push_back(simulate(cfg, r));
  return out;
}

// Histograms are materialized per state.
inline constexpr std::uint64_t kMaxHistogramStates = 1'000'000;

inline std::vector<std::uint64_t> histogram(std::span<const Rank> endpoints, std::uint64_t dim) {
  if (dim > kMaxHistogramStates) throw CapacityError("histogram limited to 10^6 states");
  std::vector<std::uint64_t> counts(dim, 0);
  for (Rank r : endpoints) {
    detail::require(r < dim, "histogram: rank out of range");
    ++counts[r];
  }
  return counts;
}

inline std::vector<std::uint64_t> endpoint_histogram(const SimConfig& cfg) {
  const auto dim = cfg.params.state_count();
  if (dim > kMaxHistogramStates) throw CapacityError("histogram limited to 10^6 states");
  const auto ends = simulate_endpoints(cfg);
  return histogram(ends, dim);
}

struct TvEstimate {
  double estimate = 0.0;    // plug-in TV of the empirical law to uniform
  double halfwidth = 0.0;   // bootstrap 95% halfwidth
  double bias_bound = 0.0;  // (1/2) sqrt(N / replicas) bounds the plug-in bias
  std::uint64_t replicas = 0;
  std::uint64_t states = 0;
};

namespace detail {

inline double plug_in_tv(std::span<const std::uint64_t> counts, double total) {
  const double n = static_cast<double>(counts.size());
  double s = 0.0;
  for (auto c : counts) s += std::abs(static_cast<double>(c) / total - 1.0 / n);
  return 0.5 * s;
}

}  // namespace detail

/// Plug-in TV from endpoint counts with a percentile-bootstrap halfwidth
/// (resampling the endpoints with replacement).
inline TvEstimate empirical_tv_from_counts(std::span<const std::uint64_t> counts, std::uint64_t seed,
                                           int bootstrap = 200) {
  detail::require(!counts.empty(), "empirical_tv: empty histogram");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  detail::require(total > 0, "empirical_tv: no samples");
  TvEstimate est;
  est.replicas = total;
  est.states = counts.size();
  est.estimate = detail::plug_in_tv(counts, static_cast<double>(total));
  est.bias_bound = 0.5 * std::sqrt(static_cast<double>(counts.size()) / static_cast<double>(total));

  // endpoints laid out by state so a uniform index picks a state with its empirical weight
  std::vector<std::uint64_t> cumulative(counts.size());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) cumulative[i] = (acc += counts[i]);
  Rng rng(seed, 0xB0075742ull);
  std::vector<double> stats;
  std::vector<std::uint64_t> resampled(counts.size());
  for (int b = 0; b < bootstrap; ++b) {
    std::fill(resampled.begin(), resampled.end(), 0);
    for (std::uint64_t i = 0; i < total; ++i) {
      const auto u = rng.below(total);
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      ++resampled[static_cast<std::size_t>(it - cumulative.begin())];
    }
    stats.push_back(detail::plug_in_tv(resampled, static_cast<double>(total)));
  }
  if (!stats.empty()) {
    std::sort(stats.begin(), stats.end());
    const auto at = [&](double q) {
      const auto idx = static_cast<std::size_t>(std::round(q * static_cast<double>(stats.size() - 1)));
      return stats[idx];
    };
    est.halfwidth = 0.5 * (at(0.975) - at(0.025));
  }
  return est;
}

inline TvEstimate empirical_tv(const SimConfig& cfg, int bootstrap = 200) {
  const auto counts = endpoint_histogram(cfg);
  return empirical_tv_from_counts(counts, cfg.seed, bootstrap);
}

struct ChiSquaredResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of observed counts against probabilities.
inline ChiSquaredResult chi_squared_gof(std::span<const std::uint64_t> counts, std::span<const double> probs) {
  detail::require(counts.size() == probs.size(), "chi_squared_gof: size mismatch");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  ChiSquaredResult r;
  int bins = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = probs[i] * static_cast<double>(total);
    if (expected <= 0.0) {
      detail::require(counts[i] == 0, "chi_squared_gof: observation in a zero-probability bin");
      continue;
    }
    const double diff = static_cast<double>(counts[i]) - expected;
    r.statistic += diff * diff / expected;
    ++bins;
  }
  r.dof = bins - 1;
  if (r.dof >= 1) {
    boost::math::chi_squared dist(r.dof);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  }
  return r;
}

/// "rank,count" CSV.
inline void write_histogram_csv(std::ostream& os, std::span<const std::uint64_t> counts) {
  os << "rank,count\n";
  for (std::size_t i = 0; i < counts.size(); ++i) os << i << ',' << counts[i] << '\n';
}

}  // namespace exclusion
