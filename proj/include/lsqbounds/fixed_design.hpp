#pragma once

// Least squares with a constant design matrix A and Gaussian noise.
//
// Every sampled or bounded quantity is in g-units: a squared residual norm
// divided by sigma^2. In these units the training, true and testing risks are
// chi^2(n-m), chi^2(n) and 2 chi^2(m) + chi^2(n-m), independent of A, theta*
// and sigma. Multiply by sigma^2 for raw squared norms; the log-likelihood
// loss (1/(2 sigma^2)) ||.||^2 is g/2.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "lsqbounds/distributions.hpp"
#include "lsqbounds/linalg.hpp"

namespace lsqb::fixed {

enum class RiskKind { Training, True, Testing };

inline constexpr RiskKind kAllRiskKinds[] = {RiskKind::Training, RiskKind::True, RiskKind::Testing};

std::string_view to_string(RiskKind kind);

struct FixedDesignModel {
  Matrix design;  // A, n x m
  Vector theta_star;
  double sigma = 1.0;

  std::size_t n() const { return design.rows(); }
  std::size_t m() const { return design.cols(); }

  /// Throws DomainError (n <= m, sigma <= 0), DimensionMismatch or RankDeficient.
  void validate() const;
};

/// The worked example: sigma = 0.1, theta* = (0.3, -2), 4 x 2 design.
FixedDesignModel reference_model();

struct RiskSampleSet {
  RiskKind kind;
  std::vector<double> values;
  std::size_t n_samples() const { return values.size(); }
};

/// All three risks from the same replications: training and true risk share
/// the training noise z, the testing risk also uses the fresh noise z_t.
struct JointRiskSamples {
  std::vector<double> training;
  std::vector<double> truth;
  std::vector<double> testing;

  const std::vector<double>& of(RiskKind kind) const;
};

ChiSquareMixture analytic_risk_distribution(RiskKind kind, std::size_t n, std::size_t m);

/// Replication r draws z then z_t (n normals each) from substream(master_seed, r).
/// threads == 0 uses the machine's parallelism; output does not depend on it.
JointRiskSamples sample_all_risks(const FixedDesignModel& model, std::size_t n_samples, std::uint64_t master_seed,
                                  unsigned threads = 0);

RiskSampleSet sample_risks(const FixedDesignModel& model, RiskKind kind, std::size_t n_samples,
                           std::uint64_t master_seed, unsigned threads = 0);

/// One replication computed the long way: y = A theta* + sigma z, theta_LS from
/// a fresh least-squares solve, residuals divided by sigma^2. Agrees with
/// sample_all_risks up to rounding; used to cross-check it.
std::array<double, 3> replicate_direct(const FixedDesignModel& model, std::uint64_t master_seed, std::size_t index);

struct Moments {
  double mean;
  double variance;
};

/// Mean and variance in raw squared-norm units.
Moments risk_moments(RiskKind kind, std::size_t n, std::size_t m, double sigma);

/// n + m + sqrt((6m + 2n) / delta), a 1 - delta Chebyshev bound on the testing risk in g-units.
double testing_bound(std::size_t n, std::size_t m, double delta);

struct NaiveCdfs {
  double chi2_n_plus_m;
  double chi2_n_plus_2m;
};

NaiveCdfs naive_cdfs(std::size_t n, std::size_t m, double x);

}  // namespace lsqb::fixed
