#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "lsqbounds/distributions.hpp"
#include "lsqbounds/errors.hpp"
#include "lsqbounds/montecarlo.hpp"

using namespace lsqb;

namespace {

// Oracle for c1 chi^2(k1) + c2 chi^2(k2) with c1 > c2: the larger-scale gamma is a
// negative-binomial mixture of unit-scale gammas with shapes k1/2 + j, so the sum
// is sum_j w_j Gamma(k1/2 + k2/2 + j, scale 2 c2). Evaluated with Boost.Math.
struct SeriesOracle {
  double a, b, beta;
  std::vector<double> weights;

  SeriesOracle(MixtureComponent big, MixtureComponent small) {
    a = 0.5 * big.dof;
    b = 0.5 * small.dof;
    beta = small.scale;
    const double p = small.scale / big.scale;
    const double mean_j = a * (1 - p) / p;
    const double sd_j = std::sqrt(a * (1 - p)) / p;
    const auto terms = static_cast<std::size_t>(mean_j + 60 * sd_j + 200);
    for (std::size_t j = 0; j < terms; ++j) {
      const double lw = std::lgamma(a + j) - std::lgamma(a) - std::lgamma(j + 1.0) + a * std::log(p) + j * std::log1p(-p);
      weights.push_back(std::exp(lw));
    }
  }

  double cdf(double t) const {
    double s = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j)
      if (weights[j] > 0.0) s += weights[j] * boost::math::gamma_p(a + b + j, t / (2 * beta));
    return s;
  }

  double pdf(double t) const {
    double s = 0.0;
    const double y = t / (2 * beta);
    for (std::size_t j = 0; j < weights.size(); ++j)
      if (weights[j] > 0.0) s += weights[j] * boost::math::gamma_p_derivative(a + b + j, y) / (2 * beta);
    return s;
  }
};

}  // namespace

TEST_CASE("normal sampling is deterministic per seed") {
  RngStream a(42);
  RngStream b(42);
  const double first = normal_sample(a);
  CHECK(first == normal_sample(b));
  for (int i = 0; i < 1000; ++i) CHECK(normal_sample(a) == normal_sample(b));
}

TEST_CASE("normal sampling moments over 1e6 draws") {
  RngStream rng(2024);
  constexpr std::size_t n = 1000000;
  std::vector<double> xs(n);
  std::size_t non_positive = 0;
  for (double& x : xs) {
    x = normal_sample(rng);
    if (x <= 0.0) ++non_positive;
  }
  const auto s = summarize(xs);
  CHECK(std::abs(s.mean) <= 0.004);
  CHECK(std::abs(s.variance - 1.0) <= 0.01);
  const double frac = static_cast<double>(non_positive) / n;
  CHECK(frac >= 0.498);
  CHECK(frac <= 0.502);
}

TEST_CASE("chi-square sampling") {
  RngStream rng(9);
  for (int i = 0; i < 100; ++i) CHECK(chi2_sample(0, rng) == 0.0);

  constexpr std::size_t n = 1000000;
  auto draws = [&](unsigned dof) {
    std::vector<double> xs(n);
    for (double& x : xs) x = chi2_sample(dof, rng);
    return summarize(xs);
  };
  const auto s2 = draws(2);
  CHECK(s2.mean >= 1.98);
  CHECK(s2.mean <= 2.02);
  const auto s5 = draws(5);
  CHECK(s5.variance >= 9.5);
  CHECK(s5.variance <= 10.5);
  const auto s1 = draws(1);  // exercises the shape < 1 boost
  CHECK(std::abs(s1.mean - 1.0) <= 0.01);
  CHECK(std::abs(s1.variance - 2.0) <= 0.04);
}

TEST_CASE("gamma pdf values") {
  CHECK(gamma_pdf(1, 1, 0) == 1.0);
  CHECK(gamma_pdf(1, 1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(gamma_pdf(1, 1, 1) == doctest::Approx(0.36787944).epsilon(1e-8));
  // x^{a-1} e^{-x/s} / (Gamma(a) s^a) at a = 2, s = 2, x = 2
  CHECK(gamma_pdf(2, 2, 2) == doctest::Approx(2.0 * std::exp(-1.0) / 4.0).epsilon(1e-14));
  CHECK(gamma_pdf(2, 2, 2) == doctest::Approx(0.18393972).epsilon(1e-8));
  CHECK(gamma_pdf(2, 2, -1) == 0.0);
  CHECK(std::isinf(gamma_pdf(0.5, 2, 0)));
  CHECK_THROWS_AS(gamma_pdf(0, 1, 1), DomainError);
  CHECK_THROWS_AS(gamma_pdf(1, -1, 1), DomainError);
}

TEST_CASE("gamma pdf integrates to one") {
  for (double shape : {1.0, 2.0, 3.5, 10.0, 40.0}) {
    const double scale = 1.5;
    const double hi = shape * scale + 60 * std::sqrt(shape) * scale;
    constexpr int panels = 200000;  // composite Simpson
    const double h = hi / panels;
    double s = gamma_pdf(shape, scale, 0) + gamma_pdf(shape, scale, hi);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4 : 2) * gamma_pdf(shape, scale, i * h);
    CHECK(std::abs(s * h / 3 - 1.0) <= 1e-6);
  }
}

TEST_CASE("gamma cdf values and domain") {
  CHECK(gamma_cdf(1, 1, 1) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(gamma_cdf(1, 1, 1) == doctest::Approx(0.63212056).epsilon(1e-8));
  CHECK(gamma_cdf(1, 2, 2) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-14));
  for (double shape : {0.5, 1.0, 7.0}) CHECK(gamma_cdf(shape, 3.0, 0.0) == 0.0);
  CHECK(gamma_cdf(2.5, 1.0, -3.0) == 0.0);
  CHECK(gamma_cdf(2.5, 1.0, INFINITY) == 1.0);
  CHECK(gamma_cdf(2.5, 1.0, 1e4) == 1.0);
  CHECK_THROWS_AS(gamma_cdf(-1, 1, 1), DomainError);
  CHECK_THROWS_AS(gamma_cdf(1, 0, 1), DomainError);
}

TEST_CASE("gamma cdf agrees with an independent incomplete gamma to 1e-12") {
  double worst = 0.0;
  for (double shape : {0.5, 1.0, 1.5, 2.0, 3.0, 5.5, 10.0, 31.0, 100.0, 250.5, 1000.0})
    for (double scale : {0.5, 1.0, 2.0, 4.0})
      for (int k = 0; k <= 400; ++k) {
        const double mean = shape * scale;
        const double x = k * (mean + 12 * std::sqrt(shape) * scale + 5 * scale) / 400.0;
        const double expected = boost::math::gamma_p(shape, x / scale);
        worst = std::max(worst, std::abs(gamma_cdf(shape, scale, x) - expected));
      }
  CHECK(worst <= 1e-12);
}

TEST_CASE("gamma cdf is monotone and its derivative is the pdf") {
  for (double shape : {0.5, 1.0, 2.5, 8.0}) {
    double prev = 0.0;
    for (int k = 1; k <= 200; ++k) {
      const double x = 0.1 * k;
      const double c = gamma_cdf(shape, 2.0, x);
      CHECK(c >= prev);
      prev = c;
      const double h = 1e-5;
      const double deriv = (gamma_cdf(shape, 2.0, x + h) - gamma_cdf(shape, 2.0, x - h)) / (2 * h);
      CHECK(std::abs(deriv - gamma_pdf(shape, 2.0, x)) <= 1e-5);
    }
  }
}

TEST_CASE("chi-square mixture construction and moments") {
  const ChiSquareMixture mix({{2.0, 3}, {1.0, 0}, {1.0, 5}});
  REQUIRE(mix.components().size() == 2);  // zero-dof component dropped
  CHECK(mix.mean() == 2.0 * 3 + 5.0);
  CHECK(mix.variance() == 4.0 * 2 * 3 + 2.0 * 5);
  CHECK_THROWS_AS(ChiSquareMixture({{0.0, 2}}), DomainError);
  CHECK_THROWS_AS(ChiSquareMixture({{-1.0, 2}}), DomainError);

  const ChiSquareMixture point({{1.0, 0}});
  CHECK(point.degenerate());
  CHECK(mixture_cdf(point, 0.0) == 1.0);
  CHECK(mixture_cdf(point, -1e-9) == 0.0);

  const ChiSquareMixture three({{3.0, 1}, {2.0, 1}, {1.0, 1}});
  CHECK_THROWS_AS(mixture_cdf(three, 1.0), Unsupported);
  CHECK_THROWS_AS(mixture_pdf(three, 1.0), Unsupported);
}

TEST_CASE("single-component mixtures reduce to the gamma law") {
  for (unsigned k : {1u, 2u, 7u, 40u}) {
    const ChiSquareMixture mix({{1.0, k}});
    for (double x : {0.0, 0.3, 1.0, 5.0, 30.0}) {
      CHECK(mixture_cdf(mix, x) == gamma_cdf(k / 2.0, 2.0, x));
      if (x > 0) CHECK(mixture_pdf(mix, x) == gamma_pdf(k / 2.0, 2.0, x));
    }
  }
  const ChiSquareMixture scaled({{3.0, 4}});
  CHECK(mixture_cdf(scaled, 5.0) == gamma_cdf(2.0, 6.0, 5.0));
}

TEST_CASE("two-component mixture matches the hypoexponential closed form") {
  // 2 chi^2(2) + chi^2(2) = Exp(mean 4) + Exp(mean 2):
  // F(t) = 1 - 2 e^{-t/4} + e^{-t/2}, f(t) = (e^{-t/4} - e^{-t/2}) / 2
  const ChiSquareMixture mix({{2.0, 2}, {1.0, 2}});
  CHECK(mixture_cdf(mix, 0.0) == 0.0);
  for (int k = 1; k <= 300; ++k) {
    const double t = 0.1 * k;
    CHECK(std::abs(mixture_cdf(mix, t) - (1 - 2 * std::exp(-t / 4) + std::exp(-t / 2))) <= 1e-8);
    CHECK(std::abs(mixture_pdf(mix, t) - 0.5 * (std::exp(-t / 4) - std::exp(-t / 2))) <= 1e-8);
  }
}

TEST_CASE("two-component mixtures match the negative-binomial series oracle") {
  struct Case {
    MixtureComponent big, small;
  };
  const std::vector<Case> cases{
      {{2.0, 1}, {1.0, 1}},   {{2.0, 1}, {1.0, 3}},     {{2.0, 3}, {1.0, 1}},     {{2.0, 2}, {1.0, 58}},
      {{2.0, 10}, {1.0, 50}}, {{2.0, 100}, {1.0, 400}}, {{5.0, 1}, {0.5, 2}},    {{1.5, 7}, {1.0, 2}},
  };
  for (const auto& c : cases) {
    const ChiSquareMixture mix({c.small, c.big});  // order must not matter
    const SeriesOracle oracle(c.big, c.small);
    const double hi = mix.mean() + 8 * std::sqrt(mix.variance());
    double worst_cdf = 0.0;
    double worst_pdf = 0.0;
    double prev = 0.0;
    for (int k = 1; k <= 120; ++k) {
      const double t = hi * k / 120.0;
      const double cdf = mixture_cdf(mix, t);
      CHECK(cdf >= prev - 1e-12);
      prev = cdf;
      worst_cdf = std::max(worst_cdf, std::abs(cdf - oracle.cdf(t)));
      worst_pdf = std::max(worst_pdf, std::abs(mixture_pdf(mix, t) - oracle.pdf(t)));
    }
    INFO("components (" << c.big.scale << "," << c.big.dof << ") + (" << c.small.scale << "," << c.small.dof << ")");
    CHECK(worst_cdf <= 1e-8);
    CHECK(worst_pdf <= 1e-8);
  }
}

TEST_CASE("mixture moments match Monte Carlo") {
  for (auto [n, m] : {std::pair{4u, 2u}, std::pair{20u, 5u}}) {
    const ChiSquareMixture mix({{2.0, m}, {1.0, n - m}});
    CHECK(mix.mean() == n + m);
    CHECK(mix.variance() == 6.0 * m + 2.0 * n);
    RngStream rng(77 + n);
    std::vector<double> xs(1000000);
    for (double& x : xs) x = mix.sample(rng);
    const auto s = summarize(xs);
    CHECK(std::abs(s.mean - mix.mean()) <= 3 * s.std_error_mean);
    CHECK(std::abs(s.variance - mix.variance()) <= 3 * s.std_error_variance);
  }
}

TEST_CASE("mixture samples pass a KS test against mixture_cdf") {
  for (const auto& comps : {std::vector<MixtureComponent>{{2.0, 2}, {1.0, 2}},
                            std::vector<MixtureComponent>{{2.0, 1}, {1.0, 9}},
                            std::vector<MixtureComponent>{{1.0, 3}}}) {
    const ChiSquareMixture mix(comps);
    RngStream rng(31);
    std::vector<double> xs(100000);
    for (double& x : xs) x = mix.sample(rng);
    const double d = ks_statistic(EmpiricalDistribution(xs), [&](double x) { return mixture_cdf(mix, x); });
    CHECK(d <= 0.01);
  }
}

TEST_CASE("mixture quantile inverts the cdf") {
  const ChiSquareMixture mix({{2.0, 2}, {1.0, 2}});
  for (double p : {0.01, 0.5, 0.9, 0.9999}) {
    const double q = mixture_quantile(mix, p);
    CHECK(std::abs(mixture_cdf(mix, q) - p) <= 1e-10);
  }
  CHECK_THROWS_AS(mixture_quantile(mix, 1.0), DomainError);
}
