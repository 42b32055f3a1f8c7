#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tpcorr {

// Exponents (p, q, m) of a mixed central moment in (y, x, z).
struct DeltaIndex {
  int p = 0;
  int q = 0;
  int m = 0;

  auto operator<=>(const DeltaIndex&) const = default;

  // Parameter-document key, e.g. {3,1,0} -> "d_310".
  [[nodiscard]] std::string key() const;
  [[nodiscard]] static std::optional<DeltaIndex> from_key(std::string_view key);
};

// Table of standardized mixed central moments
//   delta_pqm = mu_pqm / (mu_200^{p/2} mu_020^{q/2} mu_002^{m/2}).
class DeltaTable {
 public:
  void set(DeltaIndex index, double value) { values_[index] = value; }
  [[nodiscard]] bool contains(DeltaIndex index) const { return values_.contains(index); }

  // Throws MissingParameter naming the key (e.g. "d_310") when absent.
  [[nodiscard]] double at(DeltaIndex index) const;
  [[nodiscard]] double operator()(int p, int q, int m) const { return at({p, q, m}); }

  [[nodiscard]] const std::map<DeltaIndex, double>& entries() const noexcept { return values_; }

  bool operator==(const DeltaTable&) const = default;

 private:
  std::map<DeltaIndex, double> values_;
};

// Two-pass standardized moments of every order 2..max_order with divisor 1/len.
// All three series must have the same length and non-zero spread.
[[nodiscard]] DeltaTable standardized_moments(std::span<const double> y, std::span<const double> x,
                                              std::span<const double> z, int max_order = 4);

// A finite population of N units observed on the study variable y and the
// auxiliaries x and z. Construction validates: N >= 4, equal lengths, finite
// values, and non-zero spread in each variable.
class PopulationFrame {
 public:
  PopulationFrame(std::vector<double> y, std::vector<double> x, std::vector<double> z);

  [[nodiscard]] std::size_t size() const noexcept { return y_.size(); }
  [[nodiscard]] std::span<const double> y() const noexcept { return y_; }
  [[nodiscard]] std::span<const double> x() const noexcept { return x_; }
  [[nodiscard]] std::span<const double> z() const noexcept { return z_; }

 private:
  std::vector<double> y_;
  std::vector<double> x_;
  std::vector<double> z_;
};

// Population-level parameters. Fields built from a parameter document may be
// absent; the accessors below raise MissingParameter in that case.
//
// Divisors: the S^2 variances use N-1, while every mu_pqm behind the delta
// table uses 1/N.
struct MomentSet {
  std::optional<std::size_t> N;
  std::optional<double> mean_y, mean_x, mean_z;
  std::optional<double> var_y, var_x, var_z;
  std::optional<double> cv_y, cv_x, cv_z;
  std::optional<double> rho_yx, rho_xz, rho_yz;
  DeltaTable delta;
  // Human-readable interpretation notes (e.g. substituted parameters).
  std::vector<std::string> notes;

  [[nodiscard]] double rho() const;
  [[nodiscard]] double cx() const;
  [[nodiscard]] double cz() const;
  [[nodiscard]] double d(int p, int q, int m) const { return delta(p, q, m); }

  bool operator==(const MomentSet&) const = default;
};

[[nodiscard]] MomentSet population_moments(const PopulationFrame& frame);

// Flat key/value parameter document: C_x, C_z, rho_yx, rho_xz, rho_yz, d_pqm,
// and optionally N, n, n1, mean_y, mean_x, mean_z, S2_y, S2_x, S2_z, C_y.
using ParamDocument = std::map<std::string, double>;

struct ParamOptions {
  // Use d_300 in place of a missing d_310 and record a note saying so.
  bool delta310_from_delta300 = false;
};

[[nodiscard]] MomentSet moments_from_params(const ParamDocument& doc, const ParamOptions& options = {});
[[nodiscard]] ParamDocument moments_to_params(const MomentSet& moments);

struct NormalTheoryOptions {
  double rho_xz = 0.0;
  double rho_yz = 0.0;
  std::optional<double> cv_x;
  std::optional<double> cv_z;
};

// Moments of a trivariate normal population with the given correlations:
// all odd standardized moments vanish and the fourth-order ones follow from
// Isserlis' theorem (delta_220 = 1 + 2 rho^2, delta_130 = 3 rho, ...).
[[nodiscard]] MomentSet normal_theory_moments(double rho_yx, const NormalTheoryOptions& options = {});

}  // namespace tpcorr
