#include "lsqbounds/montecarlo.hpp"

#include <cmath>
#include <exception>
#include <mutex>

#include "lsqbounds/errors.hpp"

namespace lsqb {

unsigned default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = default_thread_count();
  const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t block = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * block;
      const std::size_t end = std::min(count, begin + block);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 64;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
  const double rank = p * static_cast<double>(sorted.size() - 1);  // zero-based
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

MCSummary summarize(std::span<const double> values, std::span<const double> levels) {
  const std::size_t n = values.size();
  if (n < 2) throw DomainError("summarize needs at least two samples");
  MCSummary s;
  s.n_samples = n;
  const double nd = static_cast<double>(n);
  s.mean = pairwise_sum(values) / nd;

  std::vector<double> work(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - s.mean;
    work[i] = d * d;
  }
  const double m2 = pairwise_sum(work) / nd;
  for (double& w : work) w *= w;
  s.fourth_central_moment = pairwise_sum(work) / nd;

  s.variance = m2 * nd / (nd - 1.0);
  s.std_error_mean = std::sqrt(s.variance / nd);
  const double s4 = s.variance * s.variance;
  const double var_of_var = (s.fourth_central_moment - s4 * (nd - 3.0) / (nd - 1.0)) / nd;
  s.std_error_variance = std::sqrt(std::max(0.0, var_of_var));

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  for (double p : levels) s.quantiles[p] = quantile_sorted(sorted, p);
  return s;
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) throw DomainError("empirical distribution needs at least one value");
  for (double v : sorted_)
    if (!std::isfinite(v)) throw DomainError("empirical distribution values must be finite");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::ecdf(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_statistic(const EmpiricalDistribution& dist, const std::function<double(double)>& cdf) {
  const auto xs = dist.sorted_values();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, std::abs(above), std::abs(below)});
  }
  return d;
}

}  // namespace lsqb
