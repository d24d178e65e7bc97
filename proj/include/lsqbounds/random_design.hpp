#pragma once

// Ordinary least squares with Gaussian random features phi ~ N(0, Sigma_phi)
// and out-of-sample squared error l = (y_hat - phi_hat^T theta_LS)^2.
//
// Closed forms (valid for n > m + 1 for the mean, n > m + 3 otherwise):
//   E[l]   = sigma^2 (n-1)/(n-m-1)
//   E[l^2] = 3 sigma^4 (n-1)(n-3) / ((n-m-1)(n-m-3))
// The variance comes in two flavours. PaperPolynomial is the published
// polynomial, which equals E[l^2] - (sigma^2 m/(n-m-1))^2. Corrected is
// E[l^2] - E[l]^2. They differ by sigma^4 (n+m-1)/(n-m-1) > 0, so both give
// valid Chebyshev bounds; Monte Carlo agrees with Corrected.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "lsqbounds/linalg.hpp"
#include "lsqbounds/rng.hpp"

namespace lsqb::random_design {

/// theta* = t / ||t|| with t ~ N(0, I_m), drawn once per experiment.
struct RandomUnit {};

using ThetaSpec = std::variant<Vector, RandomUnit>;

struct RandomDesignConfig {
  std::size_t n = 60;
  std::size_t m = 10;
  double sigma = 0.2;
  Matrix feature_cov;  // empty means the identity
  ThetaSpec theta_star = RandomUnit{};
  std::uint64_t master_seed = 0;

  /// Throws DomainError unless n > m + 3, m >= 1 and sigma >= 0; NotSymmetric /
  /// NotPositiveDefinite for a bad covariance.
  void validate() const;
};

/// Substream index reserved for the RandomUnit theta* draw.
inline constexpr std::uint64_t kThetaStreamIndex = ~std::uint64_t{0};
/// Child seed tag for the one retry a rank-deficient trial gets.
inline constexpr std::uint64_t kRetrySeedTag = ~std::uint64_t{0} - 1;

Vector random_unit_vector(std::size_t m, RngStream& stream);

/// A configuration with the Cholesky factor and theta* resolved.
///
/// Trial i draws, from substream(master_seed, i) and in this order: the n
/// training feature vectors q_1..q_n (m normals each), the training noise z
/// (n normals), the test features q_hat (m normals) and the test noise z_hat.
/// Features are phi = L q with Sigma_phi = L L^T.
class RandomDesignExperiment {
 public:
  explicit RandomDesignExperiment(RandomDesignConfig config);

  const RandomDesignConfig& config() const { return config_; }
  const Vector& theta_star() const { return theta_star_; }
  const Matrix& cholesky_factor() const { return chol_; }

  /// Squared test error of trial `index`. Because the model is well specified,
  /// y_hat - phi_hat^T theta_LS = sigma z_hat - phi_hat^T Phi^+ (sigma z), which
  /// is what gets evaluated; sigma = 0 yields exactly 0.
  double run_trial(std::uint64_t index) const;

  /// Same draws, evaluated by fitting theta_LS to y = Phi theta* + sigma z and
  /// predicting y_hat = phi_hat^T theta* + sigma z_hat explicitly.
  double run_trial_direct(std::uint64_t index) const;

  /// Losses of trials [first, first + count), reduced in index order.
  std::vector<double> run_trials(std::size_t count, unsigned threads = 0, std::uint64_t first = 0) const;

 private:
  struct Draws {
    Matrix phi;
    Vector noise;
    Vector phi_hat;
    double noise_hat;
  };
  Draws draw(RngStream& stream) const;
  template <typename Eval>
  double with_retry(std::uint64_t index, Eval&& eval) const;

  RandomDesignConfig config_;
  Matrix chol_;
  Vector theta_star_;
};

double run_trial(const RandomDesignConfig& config, std::uint64_t trial_index);

enum class VarianceMode { PaperPolynomial, Corrected };

std::string_view to_string(VarianceMode mode);

double mean_mse(std::size_t n, std::size_t m, double sigma);
double second_moment_mse(std::size_t n, std::size_t m, double sigma);
/// sigma^4 (3 + 6 t1 + 6 t2 + 3 t11) from the inverse-Wishart trace moments.
double second_moment_mse_four_term(std::size_t n, std::size_t m, double sigma);
double variance_mse(std::size_t n, std::size_t m, double sigma, VarianceMode mode);

/// Numerator of the published variance polynomial (sigma = 1).
double paper_variance_numerator(std::size_t n, std::size_t m);

/// mean + sqrt(variance / delta): the one-sided Chebyshev bound at level 1 - delta.
double mse_bound(std::size_t n, std::size_t m, double sigma, double delta, VarianceMode mode);

/// The bound in its published bracket form,
///   sigma^2/(n-m-1) [m + sqrt(numerator/(n-m-3)) / sqrt(delta)],
/// whose location term is sigma^2 m/(n-m-1) rather than the full mean.
double published_bracket_bound(std::size_t n, std::size_t m, double sigma, double delta);

struct BoundPoint {
  double delta;
  double bound;
};

struct BoundCurve {
  VarianceMode mode;
  std::vector<BoundPoint> points;  // increasing delta, strictly decreasing bound
};

BoundCurve bound_curve(std::size_t n, std::size_t m, double sigma, std::span<const double> deltas, VarianceMode mode);

enum class ApproxRegime { LargeN, Asymptotic };

/// LargeN: (sigma^2/(alpha-1)) [1 + sqrt((3 alpha^2 - 1)/delta)] with alpha = n/m.
/// Asymptotic: sigma^2 sqrt(3/delta).
double approx_bound(double alpha, double sigma, double delta, ApproxRegime regime);

/// sigma^2 (1 + sqrt(3/delta)): the alpha -> infinity limit of mean + sd/sqrt(delta).
double asymptotic_bound_with_mean(double sigma, double delta);

struct InvWishartTraceMoments {
  double t1;   // E[Tr W^-1]
  double t2;   // E[Tr W^-2]
  double t11;  // E[(Tr W^-1)^2]
};

/// Moments for W ~ Wishart_m(I, n); needs n > m + 3.
InvWishartTraceMoments inv_wishart_trace_moments(std::size_t n, std::size_t m);

/// Q Q^T for an m x n matrix Q of standard normals.
Matrix wishart_identity_sample(std::size_t m, std::size_t n, RngStream& stream);

/// E[((A x + a)^T (A x + a))^2] for x ~ N(0, I):
///   2 Tr(A A^T A A^T) + 4 a^T A A^T a + (Tr(A A^T) + a^T a)^2.
double gaussian_quartic_moment(const Matrix& a_mat, std::span<const double> a_vec);

}  // namespace lsqb::random_design
