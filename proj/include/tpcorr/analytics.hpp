#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tpcorr/moments.hpp"
#include "tpcorr/optimum_constants.hpp"

namespace tpcorr {

// First-order (large-sample) variance theory for the estimator classes of
// rho_yx under two-phase sampling. Finite population corrections are ignored
// throughout. Every function takes the second-phase size n and, where the
// first phase matters, its size n1 (2 <= n <= n1); sizes outside that range
// raise InvalidDesign.

struct AuxConstants {
  double A = 0.0;
  double B = 0.0;
  double D = 0.0;
  double F = 0.0;
};

// A = {d210 + d030 - 2 d120/rho} C_x     B = d220 + d040 - 2 d130/rho
// D = {d201 + d021 - 2 d111/rho} C_z     F = d202 + d022 - 2 d112/rho
[[nodiscard]] AuxConstants constants_ABDF(const MomentSet& m);

// Var(r) = (rho^2/n)[d220/rho^2 + (d040 + d400 + 2 d220)/4 - (d130 + d310)/rho],
// evaluated as [d220 + rho^2 (d040 + d400 + 2 d220)/4 - rho (d130 + d310)]/n.
[[nodiscard]] double var_r(const MomentSet& m, std::size_t n);

// Minimizer of var_t_class. The gamma denominator is C_z^2 (d004 - d003^2 - 1).
[[nodiscard]] OptimumConstants optimum_constants(const MomentSet& m);

// Minimizer of var_h_class: the (alpha, beta) pair, from the x block only.
struct HOptimum {
  double alpha = 0.0;
  double beta = 0.0;
};
[[nodiscard]] HOptimum optimum_constants_h(const MomentSet& m);

// First-order variance of r t(u, v, w, a) for a class function with
// first derivatives `derivs` = (t1, t2, t3, t4) at (1, 1, 1, 1).
[[nodiscard]] double var_t_class(const MomentSet& m, std::size_t n, std::size_t n1,
                                 const std::array<double, 4>& derivs);
[[nodiscard]] double min_var_td(const MomentSet& m, std::size_t n, std::size_t n1);

// First-order variance of r h(u, v) for derivatives (h1, h2) at (1, 1).
[[nodiscard]] double var_h_class(const MomentSet& m, std::size_t n, std::size_t n1,
                                 const std::array<double, 2>& derivs);
[[nodiscard]] double min_var_hd(const MomentSet& m, std::size_t n, std::size_t n1);

// min Var(h class) - min Var(t class), via the closed form and by subtraction.
struct VarianceGap {
  double closed_form = 0.0;
  double by_subtraction = 0.0;
};
[[nodiscard]] VarianceGap variance_gap(const MomentSet& m, std::size_t n, std::size_t n1);

// Percent relative efficiency 100 var_base / var_est. Throws NonPositiveVariance.
[[nodiscard]] double pre(double var_base, double var_est);

struct PublishedEfficiencies {
  double pre_r = 100.0;
  double pre_hd = 0.0;
  double pre_td = 0.0;
};

struct VarianceReport {
  std::size_t n = 0;
  std::size_t n1 = 0;
  double var_r = 0.0;
  double var_hd_min = 0.0;
  double var_td_min = 0.0;
  double gap = 0.0;
  double pre_hd = 0.0;
  double pre_td = 0.0;
  OptimumConstants constants;
  std::optional<PublishedEfficiencies> published;
  std::vector<std::string> interpretation_notes;
};

// Assembles the variance report. When `m` carries the Murthy (1967)
// reference parameters and (n, n1) = (10, 25), the published efficiencies are
// embedded next to the computed ones together with a discrepancy note.
[[nodiscard]] VarianceReport efficiency_report(const MomentSet& m, std::size_t n, std::size_t n1);

// Summary parameters of the Murthy (1967) factory data (y = output,
// x = number of workers, z = fixed capital) as published, N = 80.
// The list has d_300 but no d_310.
[[nodiscard]] ParamDocument murthy_reference_parameters();
[[nodiscard]] PublishedEfficiencies murthy_published_efficiencies();
[[nodiscard]] bool matches_murthy_reference(const MomentSet& m);

}  // namespace tpcorr
