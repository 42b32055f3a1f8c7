#pragma once

namespace tpcorr {

// A, B, D, F enter the first-order variance linearly; alpha..delta are the
// derivative values t_1(P)..t_4(P) that minimize it.
struct OptimumConstants {
  double A = 0.0;
  double B = 0.0;
  double D = 0.0;
  double F = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;

  bool operator==(const OptimumConstants&) const = default;
};

// Relative tolerance used to declare a denominator singular.
inline constexpr double kSingularTolerance = 1e-9;
// |rho| below this is treated as zero wherever rho divides.
inline constexpr double kZeroCorrelationTolerance = 1e-12;

}  // namespace tpcorr
