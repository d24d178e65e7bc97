#include "cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lsqbounds/distributions.hpp"
#include "lsqbounds/errors.hpp"
#include "lsqbounds/fixed_design.hpp"
#include "lsqbounds/montecarlo.hpp"
#include "lsqbounds/random_design.hpp"

namespace lsqb::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Child seed tags for draws that are not per-replication.
constexpr std::uint64_t kDesignSeedTag = 0xD35167ULL;
constexpr std::uint64_t kThetaSeedTag = 0x7E7AULL;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(fs::path path, const std::vector<std::string>& header) : path_(std::move(path)), out_(path_) {
    if (!out_) throw std::runtime_error("cannot open " + path_.string() + " for writing: " + std::strerror(errno));
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }

  template <typename... Ts>
  void row(const Ts&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(fields), first = false), ...);
    out_ << '\n';
  }

  fs::path finish() {
    out_.close();
    if (!out_) throw std::runtime_error("failed writing " + path_.string() + ": " + std::strerror(errno));
    return path_;
  }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }

  fs::path path_;
  std::ofstream out_;
};

fs::path write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing: " + std::strerror(errno));
  out << doc.dump(2) << '\n';
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string() + ": " + std::strerror(errno));
  return path;
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::vector<std::vector<double>> read_numeric_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    bool numeric = true;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        if (field.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw UsageError(path.string() + ": non-numeric row '" + line + "'");
    }
    first = false;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw UsageError(path.string() + " contains no numeric rows");
  return rows;
}

Matrix read_design(const fs::path& path) {
  const auto rows = read_numeric_csv(path);
  const std::size_t cols = rows.front().size();
  std::vector<double> data;
  for (const auto& r : rows) {
    if (r.size() != cols) throw UsageError(path.string() + ": rows have different lengths");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

Vector read_theta(const fs::path& path) {
  Vector theta;
  for (const auto& r : read_numeric_csv(path)) theta.insert(theta.end(), r.begin(), r.end());
  return theta;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

void check_deltas(const std::vector<double>& deltas) {
  require(!deltas.empty(), "delta grid must not be empty");
  for (double d : deltas) require(d > 0.0 && d < 1.0, "every delta must lie in (0, 1), got " + format_double(d));
}

fixed::FixedDesignModel build_fixed_model(const ExperimentArgs& args) {
  fixed::FixedDesignModel model;
  model.sigma = args.sigma;
  bool reference_design = false;
  if (args.design_file) {
    model.design = read_design(*args.design_file);
  } else if (args.design == "random") {
    require(args.n > args.m && args.m >= 1, "--design random needs n > m >= 1");
    RngStream rng = substream(args.seed, kDesignSeedTag);
    model.design = Matrix(args.n, args.m);
    for (double& v : model.design.data()) v = normal_sample(rng);
  } else {
    require(args.design == "paper", "--design must be 'paper' or 'random'");
    model.design = fixed::reference_model().design;
    reference_design = true;
  }

  if (args.theta_file) {
    model.theta_star = read_theta(*args.theta_file);
  } else if (reference_design) {
    model.theta_star = fixed::reference_model().theta_star;
  } else {
    RngStream rng = substream(args.seed, kThetaSeedTag);
    model.theta_star = random_design::random_unit_vector(model.design.cols(), rng);
  }
  return model;
}

json moments_json(double mean, double variance) { return json{{"mean", mean}, {"variance", variance}}; }

std::vector<random_design::VarianceMode> selected_modes(const std::string& mode) {
  using random_design::VarianceMode;
  if (mode == "paper") return {VarianceMode::PaperPolynomial};
  if (mode == "corrected") return {VarianceMode::Corrected};
  require(mode == "both", "--variance-mode must be paper, corrected or both");
  return {VarianceMode::PaperPolynomial, VarianceMode::Corrected};
}

json random_design_discrepancies() {
  return json::array({
      json{{"id", "variance_polynomial"},
           {"detail",
            "the published variance polynomial equals E[l^2] - (sigma^2 m/(n-m-1))^2; E[l^2] - E[l]^2 is smaller by "
            "sigma^4 (n+m-1)/(n-m-1). Both modes are reported; the Monte Carlo variance adjudicates."}},
      json{{"id", "bound_bracket_location"},
           {"detail",
            "the published bound uses sigma^2 m/(n-m-1) as its location term instead of the mean "
            "sigma^2 (n-1)/(n-m-1); bound_* columns use the mean, published_bracket_bound uses the printed form."}},
      json{{"id", "theorem_sample_size_condition"},
           {"detail", "the theorem statement reads n > m - 3; the derivation needs n > m + 1 (mean) and n > m + 3 "
                      "(variance), which is what is enforced."}},
      json{{"id", "asymptotic_bound_location"},
           {"detail", "the alpha -> infinity bound is printed as sigma^2 sqrt(3/delta) although the mean tends to "
                      "sigma^2; both sigma^2 sqrt(3/delta) and sigma^2 (1 + sqrt(3/delta)) are reported."}},
  });
}

random_design::RandomDesignConfig random_config(const ExperimentArgs& args, std::uint64_t seed) {
  require(args.sigma > 0.0, "sigma must be > 0");
  require(args.m >= 1 && args.n > args.m + 3, "random design needs n > m + 3 (got n=" + std::to_string(args.n) +
                                                  ", m=" + std::to_string(args.m) + ")");
  random_design::RandomDesignConfig cfg;
  cfg.n = args.n;
  cfg.m = args.m;
  cfg.sigma = args.sigma;
  cfg.master_seed = seed;
  if (args.theta_file) {
    cfg.theta_star = read_theta(*args.theta_file);
    require(std::get<Vector>(cfg.theta_star).size() == args.m, "--theta-file must hold m values");
  }
  return cfg;
}

}  // namespace

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) out[k] = std::exp(a + (b - a) * static_cast<double>(k) / (count - 1.0));
  out.back() = hi;
  return out;
}

std::vector<std::size_t> parse_m_list(const std::string& text) {
  std::vector<std::size_t> out;
  auto to_size = [&](const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw UsageError("bad --m-list entry '" + s + "'");
    }
    if (used != s.size() || v < 1) throw UsageError("bad --m-list entry '" + s + "'");
    return static_cast<std::size_t>(v);
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    require(parts.size() == 2 || parts.size() == 3, "--m-list range must be start:stop[:step]");
    const std::size_t start = to_size(parts[0]);
    const std::size_t stop = to_size(parts[1]);
    const std::size_t step = parts.size() == 3 ? to_size(parts[2]) : 1;
    for (std::size_t m = start; m <= stop; m += step) out.push_back(m);
  } else {
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ',')) out.push_back(to_size(p));
  }
  require(!out.empty(), "--m-list is empty");
  return out;
}

std::vector<double> parse_delta_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string p;
  while (std::getline(ss, p, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(p, &used));
      if (used != p.size()) throw std::invalid_argument(p);
    } catch (const std::exception&) {
      throw UsageError("bad --delta-grid entry '" + p + "'");
    }
  }
  check_deltas(out);
  return out;
}

ExperimentArgs defaults_for(const std::string& subcommand) {
  ExperimentArgs a;
  a.subcommand = subcommand;
  if (subcommand == "fixed-design") {
    a.n = 4;
    a.m = 2;
    a.sigma = 0.1;
    a.samples = 100000;
    a.seed = 1;
    a.delta_grid = {0.01, 0.05, 0.1, 0.3, 0.5};
  } else if (subcommand == "random-design") {
    a.n = 60;
    a.m = 10;
    a.sigma = 0.2;
    a.samples = 100000;
    a.seed = 7;
    a.delta_grid = {0.02, 0.05, 0.1, 0.2, 0.5};
  } else if (subcommand == "sweep") {
    a.n = 60;
    a.sigma = 0.2;
    a.samples = 0;  // 100 n per experiment
    a.seed = 1;
    a.m_list = parse_m_list("2:50:4");
  } else if (subcommand == "tail") {
    a.n = 60;
    a.m = 10;
    a.sigma = 0.2;
    a.samples = 100000;
    a.seed = 7;
    a.delta_grid = log_spaced(0.01, 0.5, 20);
  } else {
    throw UsageError("unknown subcommand '" + subcommand + "'");
  }
  return a;
}

std::vector<fs::path> cmd_fixed_design(const ExperimentArgs& args) {
  require(args.sigma > 0.0, "sigma must be > 0");
  require(args.samples >= 2, "need at least 2 samples");
  check_deltas(args.delta_grid);
  const auto model = build_fixed_model(args);
  try {
    model.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const std::size_t n = model.n();
  const std::size_t m = model.m();
  prepare_out_dir(args.out_dir);
  std::vector<fs::path> written;

  const auto joint = fixed::sample_all_risks(model, args.samples, args.seed, args.threads);

  CsvWriter risks(args.out_dir / "risks.csv", {"sample_index", "g_training", "g_true", "g_testing"});
  for (std::size_t i = 0; i < args.samples; ++i) risks.row(i, joint.training[i], joint.truth[i], joint.testing[i]);
  written.push_back(risks.finish());

  using fixed::RiskKind;
  const auto training = fixed::analytic_risk_distribution(RiskKind::Training, n, m);
  const auto truth = fixed::analytic_risk_distribution(RiskKind::True, n, m);
  const auto testing = fixed::analytic_risk_distribution(RiskKind::Testing, n, m);

  constexpr std::size_t kGridPoints = 512;
  const double x_max = mixture_quantile(testing, 0.9999);
  double naive_gap_npm = 0.0;
  double naive_gap_np2m = 0.0;
  CsvWriter analytic(args.out_dir / "analytic.csv", {"x", "pdf_training", "pdf_true", "pdf_testing", "cdf_testing",
                                                     "cdf_naive_npm", "cdf_naive_np2m"});
  for (std::size_t k = 0; k < kGridPoints; ++k) {
    const double x = x_max * static_cast<double>(k) / (kGridPoints - 1.0);
    const double cdf = mixture_cdf(testing, x);
    const auto naive = fixed::naive_cdfs(n, m, x);
    naive_gap_npm = std::max(naive_gap_npm, std::abs(naive.chi2_n_plus_m - cdf));
    naive_gap_np2m = std::max(naive_gap_np2m, std::abs(naive.chi2_n_plus_2m - cdf));
    analytic.row(x, mixture_pdf(training, x), mixture_pdf(truth, x), mixture_pdf(testing, x), cdf,
                 naive.chi2_n_plus_m, naive.chi2_n_plus_2m);
  }
  written.push_back(analytic.finish());

  const EmpiricalDistribution testing_dist(joint.testing);
  CsvWriter bounds(args.out_dir / "bounds.csv", {"delta", "bound_g", "empirical_violation_rate"});
  json bounds_json = json::array();
  for (double delta : args.delta_grid) {
    const double b = fixed::testing_bound(n, m, delta);
    const double rate = testing_dist.exceedance(b);
    bounds.row(delta, b, rate);
    bounds_json.push_back(json{{"delta", delta}, {"bound_g", b}, {"bound_raw", b * model.sigma * model.sigma},
                               {"empirical_violation_rate", rate}, {"holds", rate <= delta}});
  }
  written.push_back(bounds.finish());

  const double s2 = model.sigma * model.sigma;
  json analytic_json = json::object();
  json empirical_json = json::object();
  json ks_json = json::object();
  for (RiskKind kind : fixed::kAllRiskKinds) {
    const std::string name(fixed::to_string(kind));
    const auto raw = fixed::risk_moments(kind, n, m, model.sigma);
    const auto mix = fixed::analytic_risk_distribution(kind, n, m);
    analytic_json[name] = json{{"g", moments_json(mix.mean(), mix.variance())}, {"raw", moments_json(raw.mean, raw.variance)}};

    const auto& values = joint.of(kind);
    const auto s = summarize(values);
    empirical_json[name] = json{{"g", json{{"mean", s.mean}, {"variance", s.variance},
                                          {"std_error_mean", s.std_error_mean},
                                          {"std_error_variance", s.std_error_variance}}},
                                {"raw", moments_json(s.mean * s2, s.variance * s2 * s2)}};
    ks_json[name] = ks_statistic(EmpiricalDistribution(values), [&](double x) { return mixture_cdf(mix, x); });
  }

  json summary{
      {"subcommand", "fixed-design"},
      {"n", n},
      {"m", m},
      {"sigma", model.sigma},
      {"samples", args.samples},
      {"seed", args.seed},
      {"units", "g = squared residual norm / sigma^2; raw = g * sigma^2; log-likelihood loss = g / 2"},
      {"analytic", analytic_json},
      {"empirical", empirical_json},
      {"ks_distance", ks_json},
      {"naive_max_cdf_gap", json{{"chi2_n_plus_m", naive_gap_npm}, {"chi2_n_plus_2m", naive_gap_np2m}}},
      {"bounds", bounds_json},
      {"paper_discrepancies",
       json::array({
           json{{"id", "training_noise_scale"},
                {"detail", "the theorem writes the training sample as A theta* + sigma^2 z; its derivation and the "
                           "worked example use sigma z, which is what is simulated."}},
           json{{"id", "testing_bound_units"},
                {"detail", "the testing bound n + m + sqrt((6m+2n)/delta) is stated for the raw squared norm but "
                           "only holds for g = ||y_t - A theta_LS||^2 / sigma^2; it is applied in g-units."}},
       })},
  };
  written.push_back(write_json(args.out_dir / "summary.json", summary));
  return written;
}

std::vector<fs::path> cmd_random_design(const ExperimentArgs& args) {
  using random_design::VarianceMode;
  require(args.samples >= 2, "need at least 2 trials");
  check_deltas(args.delta_grid);
  const auto modes = selected_modes(args.variance_mode);
  const random_design::RandomDesignExperiment experiment(random_config(args, args.seed));
  const std::size_t n = args.n;
  const std::size_t m = args.m;
  const double sigma = args.sigma;
  prepare_out_dir(args.out_dir);
  std::vector<fs::path> written;

  const std::vector<double> losses = experiment.run_trials(args.samples, args.threads);

  CsvWriter samples(args.out_dir / "samples.csv", {"trial_index", "loss"});
  for (std::size_t i = 0; i < losses.size(); ++i) samples.row(i, losses[i]);
  written.push_back(samples.finish());

  const EmpiricalDistribution dist(losses);
  CsvWriter bounds(args.out_dir / "bounds.csv", {"delta", "bound_paper", "bound_corrected",
                                                 "empirical_quantile_1_minus_delta", "violation_rate_paper",
                                                 "violation_rate_corrected"});
  json bounds_json = json::array();
  std::map<VarianceMode, bool> coverage{{VarianceMode::PaperPolynomial, true}, {VarianceMode::Corrected, true}};
  for (double delta : args.delta_grid) {
    const double bp = random_design::mse_bound(n, m, sigma, delta, VarianceMode::PaperPolynomial);
    const double bc = random_design::mse_bound(n, m, sigma, delta, VarianceMode::Corrected);
    const double rp = dist.exceedance(bp);
    const double rc = dist.exceedance(bc);
    coverage[VarianceMode::PaperPolynomial] = coverage[VarianceMode::PaperPolynomial] && rp <= delta;
    coverage[VarianceMode::Corrected] = coverage[VarianceMode::Corrected] && rc <= delta;
    bounds.row(delta, bp, bc, dist.quantile(1.0 - delta), rp, rc);
    bounds_json.push_back(json{{"delta", delta},
                               {"published_bracket_bound", random_design::published_bracket_bound(n, m, sigma, delta)}});
  }
  written.push_back(bounds.finish());

  const auto s = summarize(losses);
  std::vector<double> squares(losses.size());
  std::transform(losses.begin(), losses.end(), squares.begin(), [](double l) { return l * l; });
  const auto s2 = summarize(squares);

  const double mean = random_design::mean_mse(n, m, sigma);
  const double second = random_design::second_moment_mse(n, m, sigma);
  const double var_paper = random_design::variance_mse(n, m, sigma, VarianceMode::PaperPolynomial);
  const double var_corrected = random_design::variance_mse(n, m, sigma, VarianceMode::Corrected);

  json flags{
      {"mean_within_3_se", std::abs(s.mean - mean) <= 3.0 * s.std_error_mean},
      {"second_moment_within_3_se", std::abs(s2.mean - second) <= 3.0 * s2.std_error_mean},
      {"variance_within_4_se_of_corrected", std::abs(s.variance - var_corrected) <= 4.0 * s.std_error_variance},
      {"variance_10_se_below_paper", var_paper - s.variance >= 10.0 * s.std_error_variance},
  };
  for (VarianceMode mode : modes) flags["coverage_" + std::string(to_string(mode))] = coverage[mode];

  json mode_names = json::array();
  for (VarianceMode mode : modes) mode_names.push_back(std::string(to_string(mode)));

  json summary{
      {"subcommand", "random-design"},
      {"n", n},
      {"m", m},
      {"sigma", sigma},
      {"trials", args.samples},
      {"seed", args.seed},
      {"theta_star", experiment.theta_star()},
      {"variance_modes", mode_names},
      {"analytic", json{{"mean", mean},
                        {"second_moment", second},
                        {"second_moment_four_term", random_design::second_moment_mse_four_term(n, m, sigma)},
                        {"variance_paper", var_paper},
                        {"variance_corrected", var_corrected}}},
      {"empirical", json{{"mean", s.mean},
                         {"variance", s.variance},
                         {"std_error_mean", s.std_error_mean},
                         {"std_error_variance", s.std_error_variance},
                         {"second_moment", s2.mean},
                         {"std_error_second_moment", s2.std_error_mean}}},
      {"flags", flags},
      {"published_bracket_bounds", bounds_json},
      {"paper_discrepancies", random_design_discrepancies()},
  };
  written.push_back(write_json(args.out_dir / "summary.json", summary));
  return written;
}

std::vector<fs::path> cmd_sweep(const ExperimentArgs& args) {
  using random_design::VarianceMode;
  require(args.experiments >= 2, "sweep needs at least 2 experiments");
  require(!args.m_list.empty(), "sweep needs a non-empty --m-list");
  for (std::size_t m : args.m_list) {
    ExperimentArgs probe = args;
    probe.m = m;
    random_config(probe, args.seed);
  }
  const std::size_t trials = args.samples == 0 ? 100 * args.n : args.samples;
  require(trials >= 2, "need at least 2 trials per experiment");
  prepare_out_dir(args.out_dir);

  CsvWriter out(args.out_dir / "sweep.csv", {"m", "mean_analytic", "mean_empirical", "mean_se", "var_paper",
                                             "var_corrected", "var_empirical", "var_se"});
  for (std::size_t m : args.m_list) {
    ExperimentArgs row_args = args;
    row_args.m = m;
    const std::uint64_t row_seed = derive_seed(args.seed, m);
    std::vector<double> means(args.experiments);
    std::vector<double> variances(args.experiments);
    for (std::size_t e = 0; e < args.experiments; ++e) {
      const random_design::RandomDesignExperiment experiment(random_config(row_args, derive_seed(row_seed, e)));
      const auto s = summarize(experiment.run_trials(trials, args.threads));
      means[e] = s.mean;
      variances[e] = s.variance;
    }
    const auto mean_stats = summarize(means);
    const auto var_stats = summarize(variances);
    out.row(m, random_design::mean_mse(args.n, m, args.sigma), mean_stats.mean, mean_stats.std_error_mean,
            random_design::variance_mse(args.n, m, args.sigma, VarianceMode::PaperPolynomial),
            random_design::variance_mse(args.n, m, args.sigma, VarianceMode::Corrected), var_stats.mean,
            var_stats.std_error_mean);
  }
  return {out.finish()};
}

std::vector<fs::path> cmd_tail(const ExperimentArgs& args) {
  using random_design::VarianceMode;
  require(args.samples >= 2, "need at least 2 trials");
  check_deltas(args.delta_grid);
  const random_design::RandomDesignExperiment experiment(random_config(args, args.seed));
  prepare_out_dir(args.out_dir);

  const EmpiricalDistribution dist(experiment.run_trials(args.samples, args.threads));
  const double alpha = static_cast<double>(args.n) / static_cast<double>(args.m);
  CsvWriter out(args.out_dir / "tail.csv", {"delta", "bound_paper", "bound_corrected", "bound_largen",
                                            "bound_asymptotic", "empirical_quantile"});
  std::size_t uncovered = 0;
  for (double delta : args.delta_grid) {
    const double bp = random_design::mse_bound(args.n, args.m, args.sigma, delta, VarianceMode::PaperPolynomial);
    const double q = dist.quantile(1.0 - delta);
    if (q > bp) ++uncovered;
    out.row(delta, bp, random_design::mse_bound(args.n, args.m, args.sigma, delta, VarianceMode::Corrected),
            random_design::approx_bound(alpha, args.sigma, delta, random_design::ApproxRegime::LargeN),
            random_design::approx_bound(alpha, args.sigma, delta, random_design::ApproxRegime::Asymptotic), q);
  }
  if (uncovered > 0)
    std::cerr << "warning: empirical quantile exceeds bound_paper in " << uncovered << " row(s)\n";
  return {out.finish()};
}

std::vector<fs::path> run(const ExperimentArgs& args) {
  try {
    if (args.subcommand == "fixed-design") return cmd_fixed_design(args);
    if (args.subcommand == "random-design") return cmd_random_design(args);
    if (args.subcommand == "sweep") return cmd_sweep(args);
    if (args.subcommand == "tail") return cmd_tail(args);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown subcommand '" + args.subcommand + "'");
}

int main(int argc, char** argv) {
  CLI::App app{"Closed-form risk laws and Chebyshev bounds for least squares, checked by Monte Carlo"};
  app.require_subcommand(1);

  std::map<std::string, ExperimentArgs> parsed;
  std::map<std::string, std::string> delta_text;
  std::map<std::string, std::string> m_list_text;

  const std::vector<std::pair<std::string, std::string>> subcommands{
      {"fixed-design", "fixed design: risk samples, analytic laws, testing bound"},
      {"random-design", "random Gaussian design: loss samples, moments, tail bounds"},
      {"sweep", "mean and variance of the loss across feature dimensions m"},
      {"tail", "tail bounds against the empirical quantile over a delta grid"},
  };
  for (const auto& [name, help] : subcommands) {
    parsed[name] = defaults_for(name);
    ExperimentArgs& a = parsed[name];
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--n", a.n, "training set size")->capture_default_str();
    sub->add_option("--m", a.m, "number of features")->capture_default_str();
    sub->add_option("--sigma", a.sigma, "noise standard deviation")->capture_default_str();
    sub->add_option("--samples,--trials", a.samples,
                    name == "sweep" ? "trials per experiment (default 100 n)" : "number of replications")
        ->capture_default_str();
    sub->add_option("--seed", a.seed, "master seed")->capture_default_str();
    sub->add_option("--delta-grid", delta_text[name], "comma separated deltas in (0, 1)");
    sub->add_option("--m-list", m_list_text[name], "feature dimensions: start:stop:step or comma list");
    sub->add_option("--variance-mode", a.variance_mode, "paper, corrected or both")
        ->check(CLI::IsMember({"paper", "corrected", "both"}))
        ->capture_default_str();
    sub->add_option("--design", a.design, "paper or random (fixed-design)")
        ->check(CLI::IsMember({"paper", "random"}))
        ->capture_default_str();
    sub->add_option("--design-file", a.design_file, "CSV design matrix, one row per line");
    sub->add_option("--theta-file", a.theta_file, "true parameters, CSV");
    sub->add_option("--experiments", a.experiments, "independent experiments per m (sweep)")->capture_default_str();
    sub->add_option("--threads", a.threads, "worker threads (0 = all cores)")->capture_default_str();
    sub->add_option("--out-dir", a.out_dir, "output directory")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  ExperimentArgs args = parsed[name];
  try {
    if (!delta_text[name].empty()) args.delta_grid = parse_delta_grid(delta_text[name]);
    if (!m_list_text[name].empty()) args.m_list = parse_m_list(m_list_text[name]);
    for (const auto& path : run(args)) std::cout << path.string() << '\n';
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace lsqb::cli
