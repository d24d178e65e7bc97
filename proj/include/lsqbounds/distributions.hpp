#pragma once

// Normal, gamma / chi-square, and two-component scaled chi-square mixture
// distributions. All risk laws of the least-squares problems reduce to these.

#include <cstddef>
#include <vector>

#include "lsqbounds/rng.hpp"

namespace lsqb {

/// Standard normal draw (Marsaglia polar method; the second variate of each
/// accepted pair is cached in the stream).
double normal_sample(RngStream& stream);

/// Gamma(shape, scale 1) draw by Marsaglia-Tsang, with the U^{1/shape} boost for shape < 1.
double gamma_sample(double shape, RngStream& stream);

/// chi^2(dof) draw; dof == 0 returns exactly 0.
double chi2_sample(unsigned dof, RngStream& stream);

double gamma_pdf(double shape, double scale, double x);
double gamma_cdf(double shape, double scale, double x);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

struct MixtureComponent {
  double scale;
  unsigned dof;

  friend bool operator==(const MixtureComponent&, const MixtureComponent&) = default;
};

/// Sum of independent scaled chi-squares, sum_i scale_i * chi^2(dof_i).
/// Zero-dof components are dropped; an empty mixture is the point mass at 0.
class ChiSquareMixture {
 public:
  ChiSquareMixture() = default;
  explicit ChiSquareMixture(std::vector<MixtureComponent> components);

  const std::vector<MixtureComponent>& components() const { return components_; }
  bool degenerate() const { return components_.empty(); }

  double mean() const;
  double variance() const;
  double sample(RngStream& stream) const;

  friend bool operator==(const ChiSquareMixture&, const ChiSquareMixture&) = default;

 private:
  std::vector<MixtureComponent> components_;
};

/// Density and distribution function. One component reduces to the gamma law
/// with shape dof/2 and scale 2*scale; two components use convolution
/// quadrature. More than two components throw Unsupported.
double mixture_pdf(const ChiSquareMixture& mix, double x);
double mixture_cdf(const ChiSquareMixture& mix, double x);

/// Smallest x with mixture_cdf(x) >= p, found by bracketing and bisection.
double mixture_quantile(const ChiSquareMixture& mix, double p);

}  // namespace lsqb
