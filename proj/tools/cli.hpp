#pragma once

// Experiment commands behind the `lsqbounds` executable. Each command writes
// its CSV/JSON artifacts into args.out_dir and returns the paths written.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsqb::cli {

struct ExperimentArgs {
  std::string subcommand;
  std::size_t n = 0;
  std::size_t m = 0;
  double sigma = 0.0;
  std::size_t samples = 0;  // --samples / --trials; for sweep, trials per experiment
  std::uint64_t seed = 1;
  std::vector<double> delta_grid;
  std::vector<std::size_t> m_list;
  std::string variance_mode = "both";  // paper | corrected | both
  std::string design = "paper";        // paper | random (fixed-design only)
  std::optional<std::filesystem::path> design_file;
  std::optional<std::filesystem::path> theta_file;
  std::size_t experiments = 100;  // sweep only
  unsigned threads = 0;           // 0 = machine parallelism
  std::filesystem::path out_dir = ".";
};

/// Defaults for a subcommand, before command-line overrides.
ExperimentArgs defaults_for(const std::string& subcommand);

/// Raised for arguments that violate a command's preconditions.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::filesystem::path> cmd_fixed_design(const ExperimentArgs& args);
std::vector<std::filesystem::path> cmd_random_design(const ExperimentArgs& args);
std::vector<std::filesystem::path> cmd_sweep(const ExperimentArgs& args);
std::vector<std::filesystem::path> cmd_tail(const ExperimentArgs& args);

std::vector<std::filesystem::path> run(const ExperimentArgs& args);

/// Parses "2:50:4" (inclusive start:stop:step) or "2,6,10".
std::vector<std::size_t> parse_m_list(const std::string& text);
std::vector<double> parse_delta_grid(const std::string& text);
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

/// Full entry point: parses argv, runs, maps errors to exit codes
/// (0 success, 1 I/O or runtime failure, 2 usage error).
int main(int argc, char** argv);

}  // namespace lsqb::cli
