#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tpcorr/montecarlo.hpp"

namespace tpcorr::cli {

enum class Command { Moments, Efficiency, Estimate, Simulate, Enumerate };

struct RunConfig {
  Command command = Command::Moments;
  std::optional<std::filesystem::path> population;
  std::optional<std::filesystem::path> params;
  std::optional<std::size_t> n;
  std::optional<std::size_t> n1;
  // Estimator texts; `t-linear:optimal`, `h-linear:optimal` and
  // `difference:optimal` resolve against the population moments.
  std::vector<std::string> estimators;
  std::uint64_t seed = 1;
  std::size_t reps = 1000;
  unsigned workers = 1;
  std::uint64_t cap = kDefaultEnumerationCap;
  std::optional<std::filesystem::path> output;
  bool clamp = false;
  bool delta310_from_delta300 = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Executes one command and writes its JSON report to `config.output` or
// `out`. Diagnostics go to `err`. Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses command-line arguments (argv[0] is the program name) and runs.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

[[nodiscard]] EstimatorSpec resolve_estimator(const std::string& text, const MomentSet& moments);

}  // namespace tpcorr::cli
