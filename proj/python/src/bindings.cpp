#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "lsqbounds/distributions.hpp"
#include "lsqbounds/errors.hpp"
#include "lsqbounds/fixed_design.hpp"
#include "lsqbounds/linalg.hpp"
#include "lsqbounds/montecarlo.hpp"
#include "lsqbounds/random_design.hpp"

namespace py = pybind11;
using namespace lsqb;
namespace rd = lsqb::random_design;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw DimensionMismatch("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Matrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

Vector to_vector(const Array& a) {
  if (a.ndim() != 1) throw DimensionMismatch("expected a 1-d array");
  return Vector(a.data(), a.data() + a.shape(0));
}

py::array_t<double> to_array(std::vector<double> v) {
  auto* heap = new std::vector<double>(std::move(v));
  py::capsule owner(heap, [](void* p) { delete static_cast<std::vector<double>*>(p); });
  return py::array_t<double>(static_cast<py::ssize_t>(heap->size()), heap->data(), owner);
}

ChiSquareMixture to_mixture(const std::vector<std::pair<double, unsigned>>& comps) {
  std::vector<MixtureComponent> out;
  for (auto [scale, dof] : comps) out.push_back({scale, dof});
  return ChiSquareMixture(std::move(out));
}

std::vector<std::pair<double, unsigned>> from_mixture(const ChiSquareMixture& mix) {
  std::vector<std::pair<double, unsigned>> out;
  for (const auto& c : mix.components()) out.emplace_back(c.scale, c.dof);
  return out;
}

fixed::RiskKind parse_kind(const std::string& s) {
  if (s == "training") return fixed::RiskKind::Training;
  if (s == "true") return fixed::RiskKind::True;
  if (s == "testing") return fixed::RiskKind::Testing;
  throw DomainError("kind must be 'training', 'true' or 'testing'");
}

rd::VarianceMode parse_mode(const std::string& s) {
  if (s == "paper") return rd::VarianceMode::PaperPolynomial;
  if (s == "corrected") return rd::VarianceMode::Corrected;
  throw DomainError("mode must be 'paper' or 'corrected'");
}

rd::ApproxRegime parse_regime(const std::string& s) {
  if (s == "large_n") return rd::ApproxRegime::LargeN;
  if (s == "asymptotic") return rd::ApproxRegime::Asymptotic;
  throw DomainError("regime must be 'large_n' or 'asymptotic'");
}

fixed::FixedDesignModel fixed_model(const std::optional<Array>& design, const std::optional<Array>& theta,
                                    double sigma) {
  fixed::FixedDesignModel model = fixed::reference_model();
  model.sigma = sigma;
  if (design) model.design = to_matrix(*design);
  if (theta) model.theta_star = to_vector(*theta);
  return model;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Risk distributions and Chebyshev bounds for ordinary least squares";

  auto base = py::register_exception<Error>(mod, "Error", PyExc_ValueError);
  py::register_exception<DomainError>(mod, "DomainError", base.ptr());
  py::register_exception<DimensionMismatch>(mod, "DimensionMismatch", base.ptr());
  py::register_exception<NotSymmetric>(mod, "NotSymmetric", base.ptr());
  py::register_exception<NotPositiveDefinite>(mod, "NotPositiveDefinite", base.ptr());
  py::register_exception<RankDeficient>(mod, "RankDeficient", base.ptr());
  py::register_exception<Unsupported>(mod, "Unsupported", base.ptr());

  mod.def("gamma_cdf", &gamma_cdf, py::arg("shape"), py::arg("scale"), py::arg("x"));
  mod.def("gamma_pdf", &gamma_pdf, py::arg("shape"), py::arg("scale"), py::arg("x"));
  mod.def(
      "mixture_cdf", [](const std::vector<std::pair<double, unsigned>>& c, double x) { return mixture_cdf(to_mixture(c), x); },
      py::arg("components"), py::arg("x"), "CDF of sum_i scale_i chi2(dof_i); components are (scale, dof) pairs");
  mod.def(
      "mixture_pdf", [](const std::vector<std::pair<double, unsigned>>& c, double x) { return mixture_pdf(to_mixture(c), x); },
      py::arg("components"), py::arg("x"));
  mod.def(
      "mixture_quantile",
      [](const std::vector<std::pair<double, unsigned>>& c, double p) { return mixture_quantile(to_mixture(c), p); },
      py::arg("components"), py::arg("p"));

  mod.def(
      "summarize",
      [](const Array& values) {
        const Vector v = to_vector(values);
        const MCSummary s = summarize(v);
        py::dict d;
        d["n_samples"] = s.n_samples;
        d["mean"] = s.mean;
        d["variance"] = s.variance;
        d["std_error_mean"] = s.std_error_mean;
        d["std_error_variance"] = s.std_error_variance;
        d["quantiles"] = s.quantiles;
        return d;
      },
      py::arg("values"));

  // Fixed design
  mod.def(
      "analytic_risk_distribution",
      [](const std::string& kind, std::size_t n, std::size_t m) {
        return from_mixture(fixed::analytic_risk_distribution(parse_kind(kind), n, m));
      },
      py::arg("kind"), py::arg("n"), py::arg("m"));
  mod.def(
      "risk_moments",
      [](const std::string& kind, std::size_t n, std::size_t m, double sigma) {
        const auto mo = fixed::risk_moments(parse_kind(kind), n, m, sigma);
        return py::make_tuple(mo.mean, mo.variance);
      },
      py::arg("kind"), py::arg("n"), py::arg("m"), py::arg("sigma"));
  mod.def("testing_bound", &fixed::testing_bound, py::arg("n"), py::arg("m"), py::arg("delta"));
  mod.def(
      "naive_cdfs",
      [](std::size_t n, std::size_t m, double x) {
        const auto c = fixed::naive_cdfs(n, m, x);
        return py::make_tuple(c.chi2_n_plus_m, c.chi2_n_plus_2m);
      },
      py::arg("n"), py::arg("m"), py::arg("x"));
  mod.def(
      "sample_risks",
      [](const std::string& kind, std::size_t n_samples, std::uint64_t seed, std::optional<Array> design,
         std::optional<Array> theta, double sigma, unsigned threads) {
        const auto model = fixed_model(design, theta, sigma);
        const auto k = parse_kind(kind);
        std::vector<double> values;
        {
          py::gil_scoped_release release;
          values = fixed::sample_risks(model, k, n_samples, seed, threads).values;
        }
        return to_array(std::move(values));
      },
      py::arg("kind"), py::arg("n_samples"), py::arg("seed"), py::arg("design") = py::none(),
      py::arg("theta") = py::none(), py::arg("sigma") = 0.1, py::arg("threads") = 0,
      "Normalized risks g = ||.||^2 / sigma^2; the reference design and parameters are used when omitted");

  // Random design
  mod.def("mean_mse", &rd::mean_mse, py::arg("n"), py::arg("m"), py::arg("sigma"));
  mod.def("second_moment_mse", &rd::second_moment_mse, py::arg("n"), py::arg("m"), py::arg("sigma"));
  mod.def("second_moment_mse_four_term", &rd::second_moment_mse_four_term, py::arg("n"), py::arg("m"),
          py::arg("sigma"));
  mod.def(
      "variance_mse",
      [](std::size_t n, std::size_t m, double sigma, const std::string& mode) {
        return rd::variance_mse(n, m, sigma, parse_mode(mode));
      },
      py::arg("n"), py::arg("m"), py::arg("sigma"), py::arg("mode") = "corrected");
  mod.def(
      "mse_bound",
      [](std::size_t n, std::size_t m, double sigma, double delta, const std::string& mode) {
        return rd::mse_bound(n, m, sigma, delta, parse_mode(mode));
      },
      py::arg("n"), py::arg("m"), py::arg("sigma"), py::arg("delta"), py::arg("mode") = "corrected");
  mod.def("published_bracket_bound", &rd::published_bracket_bound, py::arg("n"), py::arg("m"), py::arg("sigma"),
          py::arg("delta"));
  mod.def(
      "approx_bound",
      [](double alpha, double sigma, double delta, const std::string& regime) {
        return rd::approx_bound(alpha, sigma, delta, parse_regime(regime));
      },
      py::arg("alpha"), py::arg("sigma"), py::arg("delta"), py::arg("regime") = "large_n");
  mod.def(
      "inv_wishart_trace_moments",
      [](std::size_t n, std::size_t m) {
        const auto t = rd::inv_wishart_trace_moments(n, m);
        return py::make_tuple(t.t1, t.t2, t.t11);
      },
      py::arg("n"), py::arg("m"));
  mod.def(
      "gaussian_quartic_moment",
      [](const Array& a, const Array& b) { return rd::gaussian_quartic_moment(to_matrix(a), to_vector(b)); },
      py::arg("A"), py::arg("a"));
  mod.def(
      "run_trials",
      [](std::size_t n, std::size_t m, double sigma, std::size_t count, std::uint64_t seed,
         std::optional<Array> theta, std::optional<Array> feature_cov, unsigned threads) {
        rd::RandomDesignConfig cfg;
        cfg.n = n;
        cfg.m = m;
        cfg.sigma = sigma;
        cfg.master_seed = seed;
        if (theta) cfg.theta_star = to_vector(*theta);
        if (feature_cov) cfg.feature_cov = to_matrix(*feature_cov);
        const rd::RandomDesignExperiment experiment(cfg);
        std::vector<double> losses;
        {
          py::gil_scoped_release release;
          losses = experiment.run_trials(count, threads);
        }
        return to_array(std::move(losses));
      },
      py::arg("n"), py::arg("m"), py::arg("sigma"), py::arg("count"), py::arg("seed"), py::arg("theta") = py::none(),
      py::arg("feature_cov") = py::none(), py::arg("threads") = 0,
      "Squared test errors of trials 0..count-1; theta defaults to a seeded random unit vector");
}
