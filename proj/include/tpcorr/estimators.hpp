#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>

#include "tpcorr/moments.hpp"
#include "tpcorr/optimum_constants.hpp"
#include "tpcorr/sampling.hpp"

namespace tpcorr {

namespace estimator {

using Exponents2 = std::array<double, 2>;
using Exponents4 = std::array<double, 4>;

// r
struct SampleR {
  bool operator==(const SampleR&) const = default;
};
// r (xbar*/xbar)(Zbar/zbar*)(s_x*^2/s_x^2)(S_z^2/s_z*^2)
struct ChainRatio {
  bool operator==(const ChainRatio&) const = default;
};
// r (xbar/xbar*)^a1 (s_x^2/s_x*^2)^a2 (zbar*/Zbar)^a3 (s_z*^2/S_z^2)^a4
struct GeneralizedPower {
  Exponents4 alpha{};
  bool operator==(const GeneralizedPower&) const = default;
};
// r [1 + a1(u-1) + a2(v-1)]
struct HLinear {
  Exponents2 alpha{};
  bool operator==(const HLinear&) const = default;
};
// r u^a1 v^a2
struct HPower {
  Exponents2 alpha{};
  bool operator==(const HPower&) const = default;
};
// r [1 + a1(u-1) + a2(v-1) + a3(w-1) + a4(a-1)]
struct TLinear {
  Exponents4 alpha{};
  bool operator==(const TLinear&) const = default;
};
// r u^a1 v^a2 w^a3 a^a4
struct TPower {
  Exponents4 alpha{};
  bool operator==(const TPower&) const = default;
};

// Plug-in members: the constants are estimated from the same sample.
struct TdStarPower {
  bool operator==(const TdStarPower&) const = default;
};
struct TdStarRatio {
  bool operator==(const TdStarRatio&) const = default;
};
struct TdStarLinear {
  bool operator==(const TdStarLinear&) const = default;
};
struct TdStarInverse {
  bool operator==(const TdStarInverse&) const = default;
};

// r + a1(u-1) + a2(v-1) + a3(w-1) + a4(a-1)
struct DifferenceType {
  Exponents4 alpha{};
  bool operator==(const DifferenceType&) const = default;
};

}  // namespace estimator

using EstimatorSpec =
    std::variant<estimator::SampleR, estimator::ChainRatio, estimator::GeneralizedPower, estimator::HLinear,
                 estimator::HPower, estimator::TLinear, estimator::TPower, estimator::TdStarPower,
                 estimator::TdStarRatio, estimator::TdStarLinear, estimator::TdStarInverse,
                 estimator::DifferenceType>;

// Evaluates the estimator on one sample. Estimates are not clamped to [-1, 1].
// Throws NonPositiveRatio for power and ratio forms when any of u, v, w, a is
// not positive, and SingularDenominator when a ratio/inverse bracket vanishes.
[[nodiscard]] double estimate(const EstimatorSpec& spec, const SampleStatistics& stats);

// Sample analogues of (A, B, D, F, alpha, beta, gamma, delta) built from the
// second-phase delta table, s_x/xbar, s_z/zbar and r.
[[nodiscard]] OptimumConstants estimated_optimum_constants(const SampleStatistics& stats);

// TLinear carrying the population-optimum constants.
[[nodiscard]] EstimatorSpec make_optimal_spec(const MomentSet& moments);
// HLinear carrying the population-optimum (alpha, beta); ignores z.
[[nodiscard]] EstimatorSpec make_optimal_h_spec(const MomentSet& moments);

// Canonical text form: `sample-r`, `chain-ratio`, `generalized-power:a1,a2,a3,a4`,
// `h-linear:a1,a2`, `h-power:a1,a2`, `t-linear:...`, `t-power:...`,
// `td-star:power|ratio|linear|inverse` (`product` is accepted for `power`),
// `difference:a1,a2,a3,a4`. Throws InvalidSpec.
[[nodiscard]] EstimatorSpec parse_estimator_spec(std::string_view text);
[[nodiscard]] std::string to_string(const EstimatorSpec& spec);

}  // namespace tpcorr
