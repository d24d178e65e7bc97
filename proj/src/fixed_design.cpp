#include "lsqbounds/fixed_design.hpp"

#include <cmath>
#include <string>

#include "lsqbounds/errors.hpp"
#include "lsqbounds/montecarlo.hpp"

namespace lsqb::fixed {

std::string_view to_string(RiskKind kind) {
  switch (kind) {
    case RiskKind::Training:
      return "training";
    case RiskKind::True:
      return "true";
    case RiskKind::Testing:
      return "testing";
  }
  return "unknown";
}

void FixedDesignModel::validate() const {
  if (n() <= m()) throw DomainError("fixed design needs n > m (got n=" + std::to_string(n()) + ", m=" +
                                    std::to_string(m()) + ")");
  if (m() == 0) throw DomainError("fixed design needs m >= 1");
  if (theta_star.size() != m()) throw DimensionMismatch("theta* length must equal the number of design columns");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  if (!design.all_finite()) throw DomainError("design matrix has non-finite entries");
  HouseholderQR{design};  // rank check
}

FixedDesignModel reference_model() {
  return FixedDesignModel{
      Matrix{{1.0, 0.6}, {3.2, -2.0}, {4.0, 1.0}, {3.1, -1.0}},
      Vector{0.3, -2.0},
      0.1,
  };
}

const std::vector<double>& JointRiskSamples::of(RiskKind kind) const {
  switch (kind) {
    case RiskKind::Training:
      return training;
    case RiskKind::True:
      return truth;
    case RiskKind::Testing:
      break;
  }
  return testing;
}

ChiSquareMixture analytic_risk_distribution(RiskKind kind, std::size_t n, std::size_t m) {
  if (n <= m || m == 0) throw DomainError("risk distributions need n > m >= 1");
  const auto nm = static_cast<unsigned>(n - m);
  switch (kind) {
    case RiskKind::Training:
      return ChiSquareMixture({{1.0, nm}});
    case RiskKind::True:
      return ChiSquareMixture({{1.0, static_cast<unsigned>(n)}});
    case RiskKind::Testing:
      break;
  }
  return ChiSquareMixture({{2.0, static_cast<unsigned>(m)}, {1.0, nm}});
}

namespace {

Vector draw_normals(std::size_t count, RngStream& stream) {
  Vector v(count);
  for (double& x : v) x = normal_sample(stream);
  return v;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

JointRiskSamples sample_all_risks(const FixedDesignModel& model, std::size_t n_samples, std::uint64_t master_seed,
                                  unsigned threads) {
  model.validate();
  const HouseholderQR qr(model.design);
  const std::size_t n = model.n();

  JointRiskSamples out;
  out.training.resize(n_samples);
  out.truth.resize(n_samples);
  out.testing.resize(n_samples);
  // theta_LS - theta* = sigma A^+ z, so in g-units the fitted noise is A A^+ z.
  parallel_for(n_samples, threads, [&](std::size_t r) {
    RngStream stream = substream(master_seed, r);
    const Vector z = draw_normals(n, stream);
    const Vector z_test = draw_normals(n, stream);
    const Vector fitted = model.design * qr.solve(z);
    out.training[r] = squared_distance(z, fitted);
    out.truth[r] = squared_norm(z);
    out.testing[r] = squared_distance(z_test, fitted);
  });
  return out;
}

RiskSampleSet sample_risks(const FixedDesignModel& model, RiskKind kind, std::size_t n_samples,
                           std::uint64_t master_seed, unsigned threads) {
  auto joint = sample_all_risks(model, n_samples, master_seed, threads);
  switch (kind) {
    case RiskKind::Training:
      return {kind, std::move(joint.training)};
    case RiskKind::True:
      return {kind, std::move(joint.truth)};
    case RiskKind::Testing:
      break;
  }
  return {kind, std::move(joint.testing)};
}

std::array<double, 3> replicate_direct(const FixedDesignModel& model, std::uint64_t master_seed, std::size_t index) {
  model.validate();
  const std::size_t n = model.n();
  RngStream stream = substream(master_seed, index);
  const Vector z = draw_normals(n, stream);
  const Vector z_test = draw_normals(n, stream);

  const Vector mean = model.design * model.theta_star;
  Vector y(n);
  Vector y_test(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = mean[i] + model.sigma * z[i];
    y_test[i] = mean[i] + model.sigma * z_test[i];
  }
  const Vector theta_ls = solve_least_squares(model.design, y);
  const Vector fit = model.design * theta_ls;
  const double s2 = model.sigma * model.sigma;
  return {squared_distance(y, fit) / s2, squared_distance(y, mean) / s2, squared_distance(y_test, fit) / s2};
}

Moments risk_moments(RiskKind kind, std::size_t n, std::size_t m, double sigma) {
  if (n <= m) throw DomainError("risk moments need n > m");
  const double s2 = sigma * sigma;
  const double s4 = s2 * s2;
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  switch (kind) {
    case RiskKind::Training:
      return {s2 * (nd - md), s4 * 2.0 * (nd - md)};
    case RiskKind::True:
      return {s2 * nd, s4 * 2.0 * nd};
    case RiskKind::Testing:
      break;
  }
  return {s2 * (nd + md), s4 * (6.0 * md + 2.0 * nd)};
}

double testing_bound(std::size_t n, std::size_t m, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (n <= m) throw DomainError("testing bound needs n > m");
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  return nd + md + std::sqrt((6.0 * md + 2.0 * nd) / delta);
}

NaiveCdfs naive_cdfs(std::size_t n, std::size_t m, double x) {
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  return {gamma_cdf(0.5 * (nd + md), 2.0, x), gamma_cdf(0.5 * (nd + 2.0 * md), 2.0, x)};
}

}  // namespace lsqb::fixed
