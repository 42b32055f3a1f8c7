#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "tpcorr/estimators.hpp"
#include "tpcorr/moments.hpp"
#include "tpcorr/sampling.hpp"

namespace tpcorr {

struct SimulationOptions {
  // Worker threads; results do not depend on this value.
  unsigned workers = 1;
  // Clamp every estimate to [-1, 1] before aggregation.
  bool clamp = false;
  // Runs whose skipped share exceeds this fraction fail with ExcessiveSkips.
  double max_skip_fraction = 0.01;
};

struct SimulationResult {
  std::size_t reps_requested = 0;
  std::size_t reps_used = 0;
  std::size_t reps_skipped = 0;
  std::map<std::string, std::size_t> skip_reasons;
  double rho_population = 0.0;
  double mean_estimate = 0.0;
  double bias = 0.0;
  double empirical_mse = 0.0;
  double mc_standard_error_of_mse = 0.0;
  double mc_standard_error_of_mean = 0.0;
  std::optional<double> analytic_variance;
  EstimatorSpec estimator;
  DesignSpec design;
  std::uint64_t seed = 0;
  bool clamped = false;

  bool operator==(const SimulationResult&) const = default;
};

// Replication k draws its two-phase sample from the stream (seed, k). Known z
// parameters come from the exact population moments, and the MSE is measured
// against the population rho_yx. Samples on which the estimator cannot be
// formed are skipped and counted by reason.
[[nodiscard]] SimulationResult simulate(const PopulationFrame& frame, const DesignSpec& design,
                                        const EstimatorSpec& spec, std::size_t reps, std::uint64_t seed,
                                        const SimulationOptions& options = {});

struct ExactResult {
  std::size_t pairs_total = 0;
  std::size_t pairs_used = 0;
  std::size_t pairs_skipped = 0;
  std::map<std::string, std::size_t> skip_reasons;
  double rho_population = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double mse = 0.0;
  double variance = 0.0;
  EstimatorSpec estimator;
  DesignSpec design;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

// Exact design expectation over all C(N, n1) C(n1, n) equally likely
// (first phase, second phase) pairs. Throws TooManySamples above `cap`.
[[nodiscard]] ExactResult enumerate_exact(const PopulationFrame& frame, const DesignSpec& design,
                                          const EstimatorSpec& spec, std::uint64_t cap = kDefaultEnumerationCap,
                                          double max_skip_fraction = 0.01);

// First-order variance the theory assigns to `spec`, when it has one.
// The plug-in (td-star) variants share the optimum variance.
[[nodiscard]] std::optional<double> first_order_variance(const EstimatorSpec& spec, const MomentSet& moments,
                                                         std::size_t n, std::size_t n1);

// Synthetic population used by the simulation checks:
//   z = z_offset + Gamma(z_shape, z_scale)
//   x = x_slope z + Normal(0, x_noise)
//   y = y_slope x + Normal(0, y_noise)
// The defaults give rho_yx ~ 0.92, rho_xz ~ 0.98 and mildly skewed z.
struct SyntheticShape {
  double z_offset = 20.0;
  double z_shape = 25.0;
  double z_scale = 25.0;
  double x_slope = 2.0;
  double x_noise = 50.0;
  double y_slope = 1.5;
  double y_noise = 162.5;
};

[[nodiscard]] PopulationFrame synthetic_population(std::size_t N, std::uint64_t seed,
                                                   const SyntheticShape& shape = {});

}  // namespace tpcorr
