#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "lsqbounds/distributions.hpp"
#include "lsqbounds/errors.hpp"
#include "lsqbounds/montecarlo.hpp"

using namespace lsqb;

TEST_CASE("substreams are deterministic and distinct") {
  CHECK(substream(5, 3) == substream(5, 3));
  auto a = substream(5, 3);
  auto b = substream(5, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  CHECK(substream(5, 3).next_u64() != substream(5, 4).next_u64());
  CHECK(substream(5, 3).next_u64() != substream(6, 3).next_u64());
  CHECK(substream(0, 0).next_u64() != substream(0, 1).next_u64());
}

TEST_CASE("neighbouring substreams are uncorrelated") {
  constexpr std::size_t n = 100000;
  for (std::uint64_t i : {0ULL, 1ULL, 1000ULL}) {
    auto s = substream(42, i);
    auto t = substream(42, i + 1);
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = s.uniform();
      const double y = t.uniform();
      sx += x;
      sy += y;
      sxx += x * x;
      syy += y * y;
      sxy += x * y;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double corr = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
    CHECK(std::abs(corr) < 0.01);
  }
}

TEST_CASE("uniform draws stay in range") {
  RngStream rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    const double v = rng.uniform_open();
    CHECK((u >= 0.0 && u < 1.0));
    CHECK((v > 0.0 && v < 1.0));
  }
}

TEST_CASE("summarize examples") {
  const std::vector<double> ones{1, 1, 1};
  auto s = summarize(ones);
  CHECK(s.mean == 1.0);
  CHECK(s.variance == 0.0);
  CHECK(s.std_error_mean == 0.0);

  s = summarize(std::vector<double>{0, 2});
  CHECK(s.mean == 1.0);
  CHECK(s.variance == 2.0);

  const std::vector<double> levels{0.0, 0.5, 1.0};
  s = summarize(std::vector<double>{4, 1, 3, 2}, levels);
  CHECK(s.quantiles.at(0.5) == 2.5);  // rank 0.5 * 3 + 1 = 2.5 -> halfway between 2 and 3
  CHECK(s.quantiles.at(0.0) == 1.0);
  CHECK(s.quantiles.at(1.0) == 4.0);

  CHECK_THROWS_AS(summarize(std::vector<double>{1.0}), DomainError);
  CHECK_THROWS_AS(summarize(std::vector<double>{}), DomainError);
}

TEST_CASE("quantile interpolation rule") {
  const std::vector<double> v{10, 20, 30, 40, 50};
  CHECK(quantile_sorted(v, 0.25) == 20.0);
  CHECK(quantile_sorted(v, 0.1) == doctest::Approx(14.0));
  CHECK(quantile_sorted(v, 0.9) == doctest::Approx(46.0));
  CHECK_THROWS_AS(quantile_sorted(v, 1.5), DomainError);
}

TEST_CASE("variance standard error matches the normal-theory value") {
  // For normal data Var(s^2) ~ 2 sigma^4 / (n - 1).
  RngStream rng(3);
  std::vector<double> xs(200000);
  for (double& x : xs) x = 2.0 * normal_sample(rng);
  const auto s = summarize(xs);
  const double expected = std::sqrt(2.0 * 16.0 / (xs.size() - 1.0));
  CHECK(std::abs(s.std_error_variance / expected - 1.0) < 0.02);
}

TEST_CASE("summarize is permutation invariant and quantiles are monotone") {
  std::mt19937_64 gen(99);
  std::lognormal_distribution<double> dist(0.0, 1.5);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> xs(20000 + 137 * rep);
    for (double& x : xs) x = dist(gen);
    const auto a = summarize(xs);
    std::shuffle(xs.begin(), xs.end(), gen);
    const auto b = summarize(xs);
    CHECK(std::abs(a.mean - b.mean) <= 1e-12 * std::abs(a.mean));
    CHECK(std::abs(a.variance - b.variance) <= 1e-12 * a.variance);
    CHECK(a.variance >= 0.0);
    double prev = -INFINITY;
    for (const auto& [level, q] : a.quantiles) {
      CHECK(q >= prev);
      prev = q;
    }
  }
}

TEST_CASE("pairwise summation is accurate") {
  std::vector<double> xs(1 << 20, 0.1);
  const double exact = 0.1 * static_cast<double>(xs.size());
  CHECK(std::abs(pairwise_sum(xs) - exact) <= 1e-10 * exact);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("ecdf") {
  const EmpiricalDistribution d(std::vector<double>{3, 1, 2});
  CHECK(d.ecdf(0.5) == 0.0);
  CHECK(d.ecdf(3.0) == 1.0);
  CHECK(d.ecdf(100.0) == 1.0);
  CHECK(d.ecdf(2.0) == doctest::Approx(2.0 / 3.0));
  CHECK(d.ecdf(1.999) == doctest::Approx(1.0 / 3.0));
  CHECK(d.exceedance(2.0) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(EmpiricalDistribution(std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(EmpiricalDistribution(std::vector<double>{1.0, NAN}), DomainError);
}

TEST_CASE("ks statistic examples") {
  const EmpiricalDistribution single(std::vector<double>{0.0});
  CHECK(ks_statistic(single, [](double) { return 0.5; }) == 0.5);

  const EmpiricalDistribution two(std::vector<double>{1.0, 2.0});
  CHECK(ks_statistic(two, [](double x) { return x < 1.5 ? 0.0 : 1.0; }) == 0.5);

  RngStream rng(8);
  std::vector<double> xs(100000);
  for (double& x : xs) x = rng.uniform();
  const EmpiricalDistribution uniform(xs);
  CHECK(ks_statistic(uniform, [](double x) { return std::clamp(x, 0.0, 1.0); }) <= 0.01);
  // Against its own ECDF the distance is at most 1/n.
  CHECK(ks_statistic(uniform, [&](double x) { return uniform.ecdf(x); }) <= 1.0 / xs.size() + 1e-15);
}

TEST_CASE("parallel generation does not depend on the worker count") {
  auto gen = [](std::size_t i) {
    auto s = substream(1234, i);
    return normal_sample(s) + normal_sample(s);
  };
  const auto one = generate_indexed(10007, 1, gen);
  for (unsigned t : {2u, 3u, 8u, 64u}) CHECK(generate_indexed(10007, t, gen) == one);
  CHECK(generate_indexed(0, 4, gen).empty());
}

TEST_CASE("parallel_for propagates worker exceptions") {
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 57) throw DomainError("boom");
                               }),
                  DomainError);
}
