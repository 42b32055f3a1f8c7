#include "tpcorr/moments.hpp"

#include <array>
#include <cmath>

#include "detail/format.hpp"
#include "detail/summaries.hpp"
#include "tpcorr/error.hpp"

namespace tpcorr {
namespace {

std::optional<double> lookup(const ParamDocument& doc, const std::string& key) {
  if (auto it = doc.find(key); it != doc.end()) return it->second;
  return std::nullopt;
}

double required(const std::optional<double>& value, std::string_view key) {
  if (!value) throw Error(ErrorCode::MissingParameter, std::string("missing parameter ") + std::string(key));
  return *value;
}

double coefficient(const std::optional<double>& cv, const std::optional<double>& mean, std::string_view key) {
  if (cv) return *cv;
  if (mean && *mean == 0.0)
    throw Error(ErrorCode::ZeroMean, std::string(key) + " is undefined for a zero mean");
  return required(cv, key);
}

void check_kurtosis(const DeltaTable& table, DeltaIndex fourth, DeltaIndex third) {
  if (!table.contains(fourth) || !table.contains(third)) return;
  const double k = table.at(fourth) - table.at(third) * table.at(third) - 1.0;
  if (k < 0.0)
    throw Error(ErrorCode::InvalidParameter,
                fourth.key() + " - " + third.key() + "^2 - 1 = " + detail::format_double(k) + " is negative");
}

}  // namespace

std::string DeltaIndex::key() const {
  return "d_" + std::to_string(p) + std::to_string(q) + std::to_string(m);
}

std::optional<DeltaIndex> DeltaIndex::from_key(std::string_view key) {
  if (key.size() != 5 || key.substr(0, 2) != "d_") return std::nullopt;
  std::array<int, 3> e{};
  for (std::size_t i = 0; i < 3; ++i) {
    const char c = key[2 + i];
    if (c < '0' || c > '9') return std::nullopt;
    e[i] = c - '0';
  }
  return DeltaIndex{e[0], e[1], e[2]};
}

double DeltaTable::at(DeltaIndex index) const {
  if (auto it = values_.find(index); it != values_.end()) return it->second;
  throw Error(ErrorCode::MissingParameter, "missing parameter " + index.key());
}

DeltaTable standardized_moments(std::span<const double> y, std::span<const double> x,
                                std::span<const double> z, int max_order) {
  const std::size_t n = y.size();
  const double my = detail::mean(y), mx = detail::mean(x), mz = detail::mean(z);
  std::vector<double> cy(n), cx(n), cz(n);
  for (std::size_t i = 0; i < n; ++i) {
    cy[i] = y[i] - my;
    cx[i] = x[i] - mx;
    cz[i] = z[i] - mz;
  }

  auto mu = [&](int p, int q, int m) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double term = 1.0;
      for (int k = 0; k < p; ++k) term *= cy[i];
      for (int k = 0; k < q; ++k) term *= cx[i];
      for (int k = 0; k < m; ++k) term *= cz[i];
      sum += term;
    }
    return sum / static_cast<double>(n);
  };

  const double sy = std::sqrt(mu(2, 0, 0)), sx = std::sqrt(mu(0, 2, 0)), sz = std::sqrt(mu(0, 0, 2));
  DeltaTable table;
  for (int order = 2; order <= max_order; ++order) {
    for (int p = order; p >= 0; --p) {
      for (int q = order - p; q >= 0; --q) {
        const int m = order - p - q;
        const double scale = std::pow(sy, p) * std::pow(sx, q) * std::pow(sz, m);
        table.set({p, q, m}, mu(p, q, m) / scale);
      }
    }
  }
  table.set({2, 0, 0}, 1.0);
  table.set({0, 2, 0}, 1.0);
  table.set({0, 0, 2}, 1.0);
  return table;
}

PopulationFrame::PopulationFrame(std::vector<double> y, std::vector<double> x, std::vector<double> z)
    : y_(std::move(y)), x_(std::move(x)), z_(std::move(z)) {
  if (y_.size() != x_.size() || y_.size() != z_.size())
    throw Error(ErrorCode::InvalidParameter, "y, x and z must have the same length");
  if (y_.size() < 4)
    throw Error(ErrorCode::InvalidParameter,
                "population needs at least 4 units, got " + std::to_string(y_.size()));
  for (std::size_t i = 0; i < y_.size(); ++i) {
    if (!std::isfinite(y_[i]) || !std::isfinite(x_[i]) || !std::isfinite(z_[i]))
      throw Error(ErrorCode::InvalidParameter, "non-finite value at unit " + std::to_string(i));
  }
  const std::array<std::pair<const std::vector<double>*, const char*>, 3> vars{
      {{&y_, "y"}, {&x_, "x"}, {&z_, "z"}}};
  for (const auto& [v, name] : vars) {
    if (detail::variance(*v, detail::mean(*v)) <= 0.0)
      throw Error(ErrorCode::DegenerateVariable, std::string("variable ") + name + " is constant");
  }
}

double MomentSet::rho() const { return required(rho_yx, "rho_yx"); }
double MomentSet::cx() const { return coefficient(cv_x, mean_x, "C_x"); }
double MomentSet::cz() const { return coefficient(cv_z, mean_z, "C_z"); }

MomentSet population_moments(const PopulationFrame& frame) {
  MomentSet out;
  out.N = frame.size();
  const double my = detail::mean(frame.y()), mx = detail::mean(frame.x()), mz = detail::mean(frame.z());
  const double vy = detail::variance(frame.y(), my), vx = detail::variance(frame.x(), mx),
               vz = detail::variance(frame.z(), mz);
  if (vy <= 0.0 || vx <= 0.0 || vz <= 0.0)
    throw Error(ErrorCode::DegenerateVariable, "population variable with zero variance");
  out.mean_y = my;
  out.mean_x = mx;
  out.mean_z = mz;
  out.var_y = vy;
  out.var_x = vx;
  out.var_z = vz;
  if (my != 0.0) out.cv_y = std::sqrt(vy) / my;
  if (mx != 0.0) out.cv_x = std::sqrt(vx) / mx;
  if (mz != 0.0) out.cv_z = std::sqrt(vz) / mz;
  out.rho_yx = detail::correlation(detail::covariance(frame.y(), frame.x(), my, mx), vy, vx);
  out.rho_xz = detail::correlation(detail::covariance(frame.x(), frame.z(), mx, mz), vx, vz);
  out.rho_yz = detail::correlation(detail::covariance(frame.y(), frame.z(), my, mz), vy, vz);

  out.delta = standardized_moments(frame.y(), frame.x(), frame.z());
  out.delta.set({1, 1, 0}, *out.rho_yx);
  out.delta.set({1, 0, 1}, *out.rho_yz);
  out.delta.set({0, 1, 1}, *out.rho_xz);
  return out;
}

MomentSet moments_from_params(const ParamDocument& doc, const ParamOptions& options) {
  static const std::array<std::string_view, 16> scalar_keys{
      "N",    "n",    "n1",   "mean_y", "mean_x", "mean_z", "S2_y",   "S2_x",
      "S2_z", "C_y",  "C_x",  "C_z",    "rho_yx", "rho_xz", "rho_yz", ""};

  MomentSet out;
  for (const auto& [key, value] : doc) {
    if (!std::isfinite(value)) throw Error(ErrorCode::InvalidParameter, key + " is not finite");
    if (auto index = DeltaIndex::from_key(key)) {
      out.delta.set(*index, value);
      continue;
    }
    bool known = false;
    for (auto k : scalar_keys) known = known || (!k.empty() && k == key);
    if (!known) throw Error(ErrorCode::InvalidParameter, "unknown parameter " + key);
  }

  if (auto n = lookup(doc, "N")) {
    if (*n < 4 || std::floor(*n) != *n)
      throw Error(ErrorCode::InvalidParameter, "N must be an integer >= 4");
    out.N = static_cast<std::size_t>(*n);
  }
  out.mean_y = lookup(doc, "mean_y");
  out.mean_x = lookup(doc, "mean_x");
  out.mean_z = lookup(doc, "mean_z");
  out.var_y = lookup(doc, "S2_y");
  out.var_x = lookup(doc, "S2_x");
  out.var_z = lookup(doc, "S2_z");
  for (const auto* key : {"S2_y", "S2_x", "S2_z"}) {
    if (auto v = lookup(doc, key); v && *v <= 0.0)
      throw Error(ErrorCode::InvalidParameter, std::string(key) + " must be positive");
  }
  out.cv_y = lookup(doc, "C_y");
  out.cv_x = lookup(doc, "C_x");
  out.cv_z = lookup(doc, "C_z");
  for (const auto* key : {"C_y", "C_x", "C_z"}) {
    if (auto v = lookup(doc, key); v && *v == 0.0)
      throw Error(ErrorCode::InvalidParameter, std::string(key) + " must be non-zero");
  }
  out.rho_yx = lookup(doc, "rho_yx");
  out.rho_xz = lookup(doc, "rho_xz");
  out.rho_yz = lookup(doc, "rho_yz");

  const std::array<std::pair<const char*, DeltaIndex>, 3> corr{
      {{"rho_yx", {1, 1, 0}}, {"rho_yz", {1, 0, 1}}, {"rho_xz", {0, 1, 1}}}};
  for (const auto& [key, index] : corr) {
    auto rho = lookup(doc, key);
    if (rho && std::abs(*rho) > 1.0)
      throw Error(ErrorCode::InvalidParameter, std::string(key) + " lies outside [-1, 1]");
    if (rho && out.delta.contains(index) && std::abs(out.delta.at(index) - *rho) > 1e-12)
      throw Error(ErrorCode::InvalidParameter, index.key() + " disagrees with " + key);
    if (rho) out.delta.set(index, *rho);
  }

  for (DeltaIndex unit : {DeltaIndex{2, 0, 0}, DeltaIndex{0, 2, 0}, DeltaIndex{0, 0, 2}}) {
    if (out.delta.contains(unit) && std::abs(out.delta.at(unit) - 1.0) > 1e-12)
      throw Error(ErrorCode::InvalidParameter, unit.key() + " must equal 1");
    out.delta.set(unit, 1.0);
  }

  check_kurtosis(out.delta, {0, 4, 0}, {0, 3, 0});
  check_kurtosis(out.delta, {0, 0, 4}, {0, 0, 3});
  check_kurtosis(out.delta, {4, 0, 0}, {3, 0, 0});

  if (options.delta310_from_delta300 && !out.delta.contains({3, 1, 0}) && out.delta.contains({3, 0, 0})) {
    out.delta.set({3, 1, 0}, out.delta.at({3, 0, 0}));
    out.notes.push_back("d_310 is not supplied; d_300 = " + detail::format_double(out.delta.at({3, 0, 0})) +
                        " is used in its place (interpreting the listed d_300 as a misprint of d_310)");
  }
  return out;
}

ParamDocument moments_to_params(const MomentSet& moments) {
  ParamDocument doc;
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) doc[key] = *v;
  };
  if (moments.N) doc["N"] = static_cast<double>(*moments.N);
  put("mean_y", moments.mean_y);
  put("mean_x", moments.mean_x);
  put("mean_z", moments.mean_z);
  put("S2_y", moments.var_y);
  put("S2_x", moments.var_x);
  put("S2_z", moments.var_z);
  put("C_y", moments.cv_y);
  put("C_x", moments.cv_x);
  put("C_z", moments.cv_z);
  put("rho_yx", moments.rho_yx);
  put("rho_xz", moments.rho_xz);
  put("rho_yz", moments.rho_yz);
  for (const auto& [index, value] : moments.delta.entries()) doc[index.key()] = value;
  return doc;
}

MomentSet normal_theory_moments(double rho_yx, const NormalTheoryOptions& options) {
  for (double r : {rho_yx, options.rho_xz, options.rho_yz}) {
    if (!(std::abs(r) < 1.0))
      throw Error(ErrorCode::InvalidParameter, "normal-theory correlations must lie in (-1, 1)");
  }
  // Variables 0 = y, 1 = x, 2 = z.
  const std::array<std::array<double, 3>, 3> R{{{1.0, rho_yx, options.rho_yz},
                                               {rho_yx, 1.0, options.rho_xz},
                                               {options.rho_yz, options.rho_xz, 1.0}}};
  const double det = 1.0 + 2.0 * rho_yx * options.rho_xz * options.rho_yz - rho_yx * rho_yx -
                     options.rho_xz * options.rho_xz - options.rho_yz * options.rho_yz;
  if (det <= 0.0) throw Error(ErrorCode::InvalidParameter, "correlation matrix is not positive definite");

  MomentSet out;
  out.rho_yx = rho_yx;
  out.rho_xz = options.rho_xz;
  out.rho_yz = options.rho_yz;
  out.cv_x = options.cv_x;
  out.cv_z = options.cv_z;

  for (int order = 2; order <= 4; ++order) {
    for (int p = order; p >= 0; --p) {
      for (int q = order - p; q >= 0; --q) {
        const int m = order - p - q;
        std::vector<int> v;
        v.insert(v.end(), p, 0);
        v.insert(v.end(), q, 1);
        v.insert(v.end(), m, 2);
        double value = 0.0;
        if (order == 2) {
          value = R[v[0]][v[1]];
        } else if (order == 4) {
          value = R[v[0]][v[1]] * R[v[2]][v[3]] + R[v[0]][v[2]] * R[v[1]][v[3]] +
                  R[v[0]][v[3]] * R[v[1]][v[2]];
        }
        out.delta.set({p, q, m}, value);
      }
    }
  }
  return out;
}

}  // namespace tpcorr
