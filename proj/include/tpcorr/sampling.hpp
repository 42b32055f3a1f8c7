#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "tpcorr/moments.hpp"

namespace tpcorr {

// Sizes of a two-phase SRSWOR design: 2 <= n <= n1 <= N.
struct DesignSpec {
  std::size_t N = 0;
  std::size_t n1 = 0;
  std::size_t n = 0;

  // Throws InvalidDesign.
  void validate() const;
  bool operator==(const DesignSpec&) const = default;
};

// Index sets into a population. Both are sorted ascending and
// second_phase is a subset of first_phase.
struct TwoPhaseSample {
  std::vector<std::size_t> first_phase;
  std::vector<std::size_t> second_phase;

  bool operator==(const TwoPhaseSample&) const = default;
};

// Known population mean and variance (divisor N-1) of z.
struct KnownAux {
  double mean_z = 0.0;
  double var_z = 0.0;
};

[[nodiscard]] KnownAux known_aux(const PopulationFrame& frame);

// Second-phase quantities use divisor n-1 (and 1/n inside the delta table);
// first-phase quantities carry a `_star` suffix and use divisor n1-1.
struct SampleStatistics {
  std::size_t n = 0;
  std::size_t n1 = 0;
  double mean_x = 0.0, mean_y = 0.0, mean_z = 0.0;
  double mean_x_star = 0.0, mean_z_star = 0.0;
  double var_x = 0.0, var_y = 0.0, var_z = 0.0, cov_yx = 0.0;
  double var_x_star = 0.0, var_z_star = 0.0;
  double known_mean_z = 0.0, known_var_z = 0.0;
  double r = 0.0;
  double u = 1.0;  // mean_x / mean_x_star
  double v = 1.0;  // var_x / var_x_star
  double w = 1.0;  // mean_z_star / Zbar
  double a = 1.0;  // var_z_star / S_z^2
  double cv_x = 0.0;  // s_x / mean_x
  double cv_z = 0.0;  // s_z / mean_z
  DeltaTable delta;
};

// Random engine for one replication. The stream is a pure function of
// (seed, stream) so replications can run on any thread in any order.
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t stream);

  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// Partial Fisher-Yates at each phase. Identical (design, seed, stream)
// arguments reproduce the same sample.
[[nodiscard]] TwoPhaseSample draw_two_phase(const DesignSpec& design, std::uint64_t seed,
                                            std::uint64_t stream = 0);

// Throws DegenerateSample when a first- or second-phase variance (or a mean
// used as a divisor) is zero.
[[nodiscard]] SampleStatistics sample_statistics(const PopulationFrame& frame, const TwoPhaseSample& sample,
                                                 const KnownAux& aux);

}  // namespace tpcorr
