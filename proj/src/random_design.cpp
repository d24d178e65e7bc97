#include "lsqbounds/random_design.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsqbounds/distributions.hpp"
#include "lsqbounds/errors.hpp"
#include "lsqbounds/montecarlo.hpp"

namespace lsqb::random_design {

void RandomDesignConfig::validate() const {
  if (m == 0) throw DomainError("feature dimension m must be at least 1");
  if (n <= m + 3)
    throw DomainError("random design needs n > m + 3 (got n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be finite and non-negative");
  if (feature_cov.rows() != 0) {
    if (feature_cov.rows() != m || feature_cov.cols() != m)
      throw DimensionMismatch("feature covariance must be m x m");
    cholesky(feature_cov);
  }
  if (const auto* v = std::get_if<Vector>(&theta_star); v && v->size() != m)
    throw DimensionMismatch("theta* must have m entries");
}

Vector random_unit_vector(std::size_t m, RngStream& stream) {
  Vector t(m);
  for (double& x : t) x = normal_sample(stream);
  const double norm = std::sqrt(squared_norm(t));
  for (double& x : t) x /= norm;
  return t;
}

RandomDesignExperiment::RandomDesignExperiment(RandomDesignConfig config) : config_(std::move(config)) {
  config_.validate();
  chol_ = config_.feature_cov.rows() == 0 ? Matrix::identity(config_.m) : cholesky(config_.feature_cov);
  if (const auto* v = std::get_if<Vector>(&config_.theta_star)) {
    theta_star_ = *v;
  } else {
    RngStream stream = substream(config_.master_seed, kThetaStreamIndex);
    theta_star_ = random_unit_vector(config_.m, stream);
  }
}

RandomDesignExperiment::Draws RandomDesignExperiment::draw(RngStream& stream) const {
  const std::size_t n = config_.n;
  const std::size_t m = config_.m;
  Draws d{Matrix(n, m), Vector(n), Vector(m), 0.0};
  Vector q(m);
  auto correlate = [&](std::span<double> out) {
    for (std::size_t j = 0; j < m; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k <= j; ++k) v += chol_(j, k) * q[k];
      out[j] = v;
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (double& x : q) x = normal_sample(stream);
    correlate(d.phi.row(i));
  }
  for (double& x : d.noise) x = normal_sample(stream);
  for (double& x : q) x = normal_sample(stream);
  correlate(d.phi_hat);
  d.noise_hat = normal_sample(stream);
  return d;
}

template <typename Eval>
double RandomDesignExperiment::with_retry(std::uint64_t index, Eval&& eval) const {
  RngStream stream = substream(config_.master_seed, index);
  try {
    return eval(draw(stream));
  } catch (const RankDeficient&) {
    RngStream retry = substream(derive_seed(config_.master_seed, kRetrySeedTag), index);
    return eval(draw(retry));
  }
}

double RandomDesignExperiment::run_trial(std::uint64_t index) const {
  const double sigma = config_.sigma;
  return with_retry(index, [sigma](Draws d) {
    for (double& x : d.noise) x *= sigma;
    const Vector deviation = HouseholderQR(std::move(d.phi)).solve(d.noise);
    const double r = sigma * d.noise_hat - dot(d.phi_hat, deviation);
    return r * r;
  });
}

double RandomDesignExperiment::run_trial_direct(std::uint64_t index) const {
  const double sigma = config_.sigma;
  return with_retry(index, [&](Draws d) {
    Vector y = d.phi * theta_star_;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += sigma * d.noise[i];
    const Vector theta_ls = solve_least_squares(d.phi, y);
    const double y_hat = dot(d.phi_hat, theta_star_) + sigma * d.noise_hat;
    const double r = y_hat - dot(d.phi_hat, theta_ls);
    return r * r;
  });
}

std::vector<double> RandomDesignExperiment::run_trials(std::size_t count, unsigned threads,
                                                       std::uint64_t first) const {
  return generate_indexed(count, threads, [&](std::size_t i) { return run_trial(first + i); });
}

double run_trial(const RandomDesignConfig& config, std::uint64_t trial_index) {
  return RandomDesignExperiment(config).run_trial(trial_index);
}

std::string_view to_string(VarianceMode mode) {
  return mode == VarianceMode::PaperPolynomial ? "paper" : "corrected";
}

namespace {

void require_mean_domain(std::size_t n, std::size_t m) {
  if (n <= m + 1) throw DomainError("the mean needs n > m + 1");
}

void require_variance_domain(std::size_t n, std::size_t m) {
  if (n <= m + 3) throw DomainError("variance formulas need n > m + 3");
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

}  // namespace

double mean_mse(std::size_t n, std::size_t m, double sigma) {
  require_mean_domain(n, m);
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  return sigma * sigma * (nd - 1.0) / (nd - md - 1.0);
}

double second_moment_mse(std::size_t n, std::size_t m, double sigma) {
  require_variance_domain(n, m);
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  const double s4 = std::pow(sigma, 4);
  return s4 * 3.0 * (nd - 1.0) * (nd - 3.0) / ((nd - md - 1.0) * (nd - md - 3.0));
}

double second_moment_mse_four_term(std::size_t n, std::size_t m, double sigma) {
  const auto t = inv_wishart_trace_moments(n, m);
  return std::pow(sigma, 4) * (3.0 + 6.0 * t.t1 + 6.0 * t.t2 + 3.0 * t.t11);
}

double paper_variance_numerator(std::size_t n, std::size_t m) {
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  return md * md * md - md * md * (nd - 3.0) - 3.0 * md * (nd - 3.0) * (nd - 1.0) +
         3.0 * (nd - 3.0) * (nd - 1.0) * (nd - 1.0);
}

double variance_mse(std::size_t n, std::size_t m, double sigma, VarianceMode mode) {
  require_variance_domain(n, m);
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  const double s4 = std::pow(sigma, 4);
  const double denom = (nd - md - 1.0) * (nd - md - 1.0) * (nd - md - 3.0);
  if (mode == VarianceMode::PaperPolynomial) return s4 * paper_variance_numerator(n, m) / denom;
  return s4 * 2.0 * (nd - 1.0) * ((nd - 1.0) * (nd - 3.0) - md * (nd - 4.0)) / denom;
}

double mse_bound(std::size_t n, std::size_t m, double sigma, double delta, VarianceMode mode) {
  require_delta(delta);
  return mean_mse(n, m, sigma) + std::sqrt(variance_mse(n, m, sigma, mode) / delta);
}

double published_bracket_bound(std::size_t n, std::size_t m, double sigma, double delta) {
  require_delta(delta);
  require_variance_domain(n, m);
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  const double spread = std::sqrt(paper_variance_numerator(n, m) / (nd - md - 3.0)) / std::sqrt(delta);
  return sigma * sigma / (nd - md - 1.0) * (md + spread);
}

BoundCurve bound_curve(std::size_t n, std::size_t m, double sigma, std::span<const double> deltas,
                       VarianceMode mode) {
  BoundCurve curve{mode, {}};
  std::vector<double> sorted(deltas.begin(), deltas.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (double d : sorted) curve.points.push_back({d, mse_bound(n, m, sigma, d, mode)});
  return curve;
}

double approx_bound(double alpha, double sigma, double delta, ApproxRegime regime) {
  if (!(alpha > 1.0)) throw DomainError("alpha = n/m must exceed 1");
  require_delta(delta);
  const double s2 = sigma * sigma;
  if (regime == ApproxRegime::Asymptotic) return s2 * std::sqrt(3.0 / delta);
  return s2 / (alpha - 1.0) * (1.0 + std::sqrt((3.0 * alpha * alpha - 1.0) / delta));
}

double asymptotic_bound_with_mean(double sigma, double delta) {
  require_delta(delta);
  return sigma * sigma * (1.0 + std::sqrt(3.0 / delta));
}

InvWishartTraceMoments inv_wishart_trace_moments(std::size_t n, std::size_t m) {
  require_variance_domain(n, m);
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  const double d = (nd - md - 3.0) * (nd - md - 1.0) * (nd - md);
  return {
      md / (nd - md - 1.0),
      (nd - 1.0) * md / d,
      md * (md * (nd - md - 2.0) + 2.0) / d,
  };
}

Matrix wishart_identity_sample(std::size_t m, std::size_t n, RngStream& stream) {
  Matrix q(m, n);
  for (double& x : q.data()) x = normal_sample(stream);
  Matrix w(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = dot(q.row(i), q.row(j));
      w(i, j) = v;
      w(j, i) = v;
    }
  return w;
}

double gaussian_quartic_moment(const Matrix& a_mat, std::span<const double> a_vec) {
  if (a_mat.rows() != a_vec.size()) throw DimensionMismatch("quartic moment: A must have as many rows as a");
  const Matrix aat = a_mat * a_mat.transpose();
  const double tr = trace(aat);
  const double tr_sq = trace(aat * aat);
  const double quad = dot(a_vec, aat * a_vec);
  const double aa = squared_norm(a_vec);
  return 2.0 * tr_sq + 4.0 * quad + (tr + aa) * (tr + aa);
}

}  // namespace lsqb::random_design
