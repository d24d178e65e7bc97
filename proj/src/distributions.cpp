#include "lsqbounds/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lsqbounds/errors.hpp"

namespace lsqb {

double normal_sample(RngStream& stream) {
  if (stream.spare_normal_) {
    const double v = *stream.spare_normal_;
    stream.spare_normal_.reset();
    return v;
  }
  for (;;) {
    const double u = 2.0 * stream.uniform() - 1.0;
    const double v = 2.0 * stream.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    stream.spare_normal_ = v * f;
    return u * f;
  }
}

double gamma_sample(double shape, RngStream& stream) {
  if (!(shape > 0.0)) throw DomainError("gamma_sample: shape must be positive");
  if (shape < 1.0) {
    const double g = gamma_sample(shape + 1.0, stream);
    return g * std::pow(stream.uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal_sample(stream);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = stream.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double chi2_sample(unsigned dof, RngStream& stream) {
  if (dof == 0) return 0.0;
  return 2.0 * gamma_sample(0.5 * dof, stream);
}

namespace {

void check_gamma_params(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale))
    throw DomainError("gamma distribution needs positive finite shape and scale");
}

// exp(a ln x - x - lgamma(a)), the common prefactor of the incomplete gamma expansions.
double gamma_prefactor(double a, double x) { return std::exp(a * std::log(x) - x - std::lgamma(a)); }

double lower_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < 100000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-17) break;
  }
  return sum * gamma_prefactor(a, x);
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double upper_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-17) break;
  }
  return gamma_prefactor(a, x) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("regularized_gamma_p: a must be positive");
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return std::min(1.0, lower_series(a, x));
  return std::max(0.0, 1.0 - upper_fraction(a, x));
}

double gamma_pdf(double shape, double scale, double x) {
  check_gamma_params(shape, scale);
  if (x < 0.0 || std::isinf(x)) return 0.0;
  if (x == 0.0) {
    if (shape < 1.0) return std::numeric_limits<double>::infinity();
    return shape == 1.0 ? 1.0 / scale : 0.0;
  }
  const double y = x / scale;
  return std::exp((shape - 1.0) * std::log(y) - y - std::lgamma(shape)) / scale;
}

double gamma_cdf(double shape, double scale, double x) {
  check_gamma_params(shape, scale);
  return regularized_gamma_p(shape, x / scale);
}

ChiSquareMixture::ChiSquareMixture(std::vector<MixtureComponent> components) {
  for (const auto& c : components) {
    if (!(c.scale > 0.0) || !std::isfinite(c.scale)) throw DomainError("mixture scales must be positive and finite");
    if (c.dof > 0) components_.push_back(c);
  }
}

double ChiSquareMixture::mean() const {
  double s = 0.0;
  for (const auto& c : components_) s += c.scale * c.dof;
  return s;
}

double ChiSquareMixture::variance() const {
  double s = 0.0;
  for (const auto& c : components_) s += c.scale * c.scale * 2.0 * c.dof;
  return s;
}

double ChiSquareMixture::sample(RngStream& stream) const {
  double s = 0.0;
  for (const auto& c : components_) s += c.scale * chi2_sample(c.dof, stream);
  return s;
}

namespace {

constexpr std::size_t kPanelNodes = 32;
constexpr std::size_t kPanelsPerHalf = 4;  // 2 halves x 4 panels x 32 nodes = 256 evaluations

struct GaussLegendre {
  std::array<double, kPanelNodes> x{};  // nodes on [0, 1]
  std::array<double, kPanelNodes> w{};
};

const GaussLegendre& unit_rule() {
  static const GaussLegendre rule = [] {
    GaussLegendre r;
    constexpr std::size_t n = kPanelNodes;
    for (std::size_t i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = z;
        for (std::size_t k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      r.x[i] = 0.5 * (1.0 - z);
      r.w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

// Integrates h over [0, 1] with composite Gauss-Legendre.
template <typename F>
double integrate_unit(F&& h) {
  const auto& rule = unit_rule();
  double total = 0.0;
  const double width = 1.0 / kPanelsPerHalf;
  for (std::size_t p = 0; p < kPanelsPerHalf; ++p) {
    double panel = 0.0;
    for (std::size_t i = 0; i < kPanelNodes; ++i) panel += rule.w[i] * h((p + rule.x[i]) * width);
    total += panel * width;
  }
  return total;
}

// int_0^t f_X(s) g(t - s) ds, split at t/2. Each half uses a quadratic change of
// variables anchored at its endpoint, which turns the s^{k/2-1} endpoint
// behaviour of half-integer gamma shapes into a polynomial factor.
template <typename Inner>
double convolve(double shape_x, double scale_x, double t, Inner&& g) {
  const double half = 0.5 * t;
  const double near_zero = integrate_unit([&](double u) {
    const double s = half * u * u;
    return gamma_pdf(shape_x, scale_x, s) * g(t - s) * t * u;
  });
  const double near_t = integrate_unit([&](double w) {
    const double v = half * w * w;
    return gamma_pdf(shape_x, scale_x, t - v) * g(v) * t * w;
  });
  return near_zero + near_t;
}

struct Pair {
  double shape_x, scale_x, shape_y, scale_y;
};

Pair ordered_pair(const ChiSquareMixture& mix) {
  auto a = mix.components()[0];
  auto b = mix.components()[1];
  if (b.scale > a.scale) std::swap(a, b);
  return {0.5 * a.dof, 2.0 * a.scale, 0.5 * b.dof, 2.0 * b.scale};
}

void check_supported(const ChiSquareMixture& mix) {
  if (mix.components().size() > 2)
    throw Unsupported("mixtures with more than two nonzero components are not supported (got " +
                      std::to_string(mix.components().size()) + ")");
}

}  // namespace

double mixture_pdf(const ChiSquareMixture& mix, double x) {
  check_supported(mix);
  if (mix.degenerate()) return 0.0;
  if (mix.components().size() == 1) {
    const auto& c = mix.components()[0];
    return gamma_pdf(0.5 * c.dof, 2.0 * c.scale, x);
  }
  if (x <= 0.0 || std::isinf(x)) return 0.0;
  const Pair p = ordered_pair(mix);
  const double v = convolve(p.shape_x, p.scale_x, x, [&](double r) { return gamma_pdf(p.shape_y, p.scale_y, r); });
  return std::max(0.0, v);
}

double mixture_cdf(const ChiSquareMixture& mix, double x) {
  check_supported(mix);
  if (mix.degenerate()) return x >= 0.0 ? 1.0 : 0.0;
  if (mix.components().size() == 1) {
    const auto& c = mix.components()[0];
    return gamma_cdf(0.5 * c.dof, 2.0 * c.scale, x);
  }
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const Pair p = ordered_pair(mix);
  const double v = convolve(p.shape_x, p.scale_x, x, [&](double r) { return gamma_cdf(p.shape_y, p.scale_y, r); });
  return std::clamp(v, 0.0, 1.0);
}

double mixture_quantile(const ChiSquareMixture& mix, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("mixture_quantile: level must lie in (0, 1)");
  if (mix.degenerate()) return 0.0;
  double lo = 0.0;
  double hi = mix.mean() + 10.0 * std::sqrt(mix.variance()) + 1.0;
  while (mixture_cdf(mix, hi) < p) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mixture_cdf(mix, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace lsqb
