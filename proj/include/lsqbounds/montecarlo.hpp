#pragma once

// Seeded Monte Carlo machinery: substreams, deterministic parallel fan-out,
// summary statistics, empirical CDFs and Kolmogorov-Smirnov distances.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <thread>
#include <vector>

#include "lsqbounds/rng.hpp"

namespace lsqb {

/// splitmix64_mix(master ^ golden * index). Used both to seed substreams and to
/// derive child master seeds (per experiment, per sweep row).
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64_mix(master_seed ^ (kGoldenGamma * index));
}

inline RngStream substream(std::uint64_t master_seed, std::uint64_t index) {
  return RngStream(derive_seed(master_seed, index));
}

/// Number of workers used when a caller passes 0.
unsigned default_thread_count();

/// Calls fn(i) for every i in [0, count) using up to `threads` workers, each
/// owning a contiguous block of indices. fn must only write state owned by
/// index i; the result is then independent of the worker count.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// out[i] = fn(i), computed with parallel_for.
template <typename Fn>
std::vector<double> generate_indexed(std::size_t count, unsigned threads, Fn&& fn) {
  std::vector<double> out(count);
  parallel_for(count, threads, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

/// Pairwise (cascade) summation, blocks of 64 summed naively.
double pairwise_sum(std::span<const double> values);

/// Order statistic with linear interpolation at 1-based rank p(n-1)+1.
double quantile_sorted(std::span<const double> sorted, double p);

struct MCSummary {
  std::size_t n_samples = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error_mean = 0.0;
  double fourth_central_moment = 0.0;
  double std_error_variance = 0.0;
  std::map<double, double> quantiles;
};

inline const std::vector<double> kDefaultQuantileLevels{0.5, 0.9, 0.95, 0.99};

/// Throws DomainError for fewer than two values.
MCSummary summarize(std::span<const double> values,
                    std::span<const double> levels = kDefaultQuantileLevels);

class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> values);

  std::span<const double> sorted_values() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

  /// Fraction of values <= x.
  double ecdf(double x) const;
  double quantile(double p) const { return quantile_sorted(sorted_, p); }
  /// Fraction of values strictly greater than x.
  double exceedance(double x) const { return 1.0 - ecdf(x); }

 private:
  std::vector<double> sorted_;
};

/// Two-sided KS distance sup_x |F_n(x) - F(x)| evaluated at the sample points.
double ks_statistic(const EmpiricalDistribution& dist, const std::function<double(double)>& cdf);

}  // namespace lsqb
