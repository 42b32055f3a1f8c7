#include "tpcorr/estimators.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tpcorr/analytics.hpp"
#include "tpcorr/error.hpp"

namespace tpcorr {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(std::initializer_list<double> ratios) {
  for (double q : ratios) {
    if (!(q > 0.0)) throw Error(ErrorCode::NonPositiveRatio, "power and ratio forms need u, v, w, a > 0");
  }
}

double checked_bracket(double bracket) {
  // The leading term of every bracket is 1.
  if (bracket <= kSingularTolerance)
    throw Error(ErrorCode::SingularDenominator, "estimator denominator is not positive");
  return bracket;
}

double linear_t(const estimator::Exponents4& c, const SampleStatistics& s) {
  return 1.0 + c[0] * (s.u - 1.0) + c[1] * (s.v - 1.0) + c[2] * (s.w - 1.0) + c[3] * (s.a - 1.0);
}

double power_t(const estimator::Exponents4& c, const SampleStatistics& s) {
  require_positive({s.u, s.v, s.w, s.a});
  return std::pow(s.u, c[0]) * std::pow(s.v, c[1]) * std::pow(s.w, c[2]) * std::pow(s.a, c[3]);
}

estimator::Exponents4 plug_in(const SampleStatistics& s) {
  const auto c = estimated_optimum_constants(s);
  return {c.alpha, c.beta, c.gamma, c.delta};
}

void check_finite(std::initializer_list<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidSpec, "estimator constants must be finite");
  }
}

std::string join(const double* values, std::size_t count) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < count; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

std::vector<double> parse_numbers(std::string_view text, std::size_t expected, std::string_view name) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw Error(ErrorCode::InvalidSpec, "bad number '" + std::string(item) + "' in " + std::string(name));
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.size() != expected)
    throw Error(ErrorCode::InvalidSpec, std::string(name) + " takes " + std::to_string(expected) + " constants");
  for (double v : out) check_finite({v});
  return out;
}

}  // namespace

double estimate(const EstimatorSpec& spec, const SampleStatistics& s) {
  using namespace estimator;
  const double r = s.r;
  return std::visit(
      Overloaded{
          [&](const SampleR&) { return r; },
          [&](const ChainRatio&) {
            require_positive({s.u, s.v, s.w, s.a});
            return r * (s.mean_x_star / s.mean_x) * (s.known_mean_z / s.mean_z_star) *
                   (s.var_x_star / s.var_x) * (s.known_var_z / s.var_z_star);
          },
          [&](const GeneralizedPower& e) {
            check_finite({e.alpha[0], e.alpha[1], e.alpha[2], e.alpha[3]});
            return r * power_t(e.alpha, s);
          },
          [&](const HLinear& e) {
            check_finite({e.alpha[0], e.alpha[1]});
            return r * (1.0 + e.alpha[0] * (s.u - 1.0) + e.alpha[1] * (s.v - 1.0));
          },
          [&](const HPower& e) {
            check_finite({e.alpha[0], e.alpha[1]});
            require_positive({s.u, s.v});
            return r * std::pow(s.u, e.alpha[0]) * std::pow(s.v, e.alpha[1]);
          },
          [&](const TLinear& e) {
            check_finite({e.alpha[0], e.alpha[1], e.alpha[2], e.alpha[3]});
            return r * linear_t(e.alpha, s);
          },
          [&](const TPower& e) {
            check_finite({e.alpha[0], e.alpha[1], e.alpha[2], e.alpha[3]});
            return r * power_t(e.alpha, s);
          },
          [&](const TdStarPower&) {
            require_positive({s.u, s.v, s.w, s.a});
            return r * power_t(plug_in(s), s);
          },
          [&](const TdStarRatio&) {
            const auto c = plug_in(s);
            const double top = 1.0 + c[0] * (s.u - 1.0) + c[2] * (s.w - 1.0);
            const double bottom = checked_bracket(1.0 - c[1] * (s.v - 1.0) - c[3] * (s.a - 1.0));
            return r * top / bottom;
          },
          [&](const TdStarLinear&) { return r * linear_t(plug_in(s), s); },
          [&](const TdStarInverse&) {
            const auto c = plug_in(s);
            const estimator::Exponents4 negated{-c[0], -c[1], -c[2], -c[3]};
            return r / checked_bracket(linear_t(negated, s));
          },
          [&](const DifferenceType& e) {
            check_finite({e.alpha[0], e.alpha[1], e.alpha[2], e.alpha[3]});
            return r + e.alpha[0] * (s.u - 1.0) + e.alpha[1] * (s.v - 1.0) + e.alpha[2] * (s.w - 1.0) +
                   e.alpha[3] * (s.a - 1.0);
          },
      },
      spec);
}

OptimumConstants estimated_optimum_constants(const SampleStatistics& s) {
  const DeltaTable& d = s.delta;
  const double r = s.r;
  if (std::abs(r) < kZeroCorrelationTolerance)
    throw Error(ErrorCode::ZeroCorrelation, "sample correlation is zero");
  const double cx = s.cv_x, cz = s.cv_z;

  OptimumConstants c;
  c.A = (d(2, 1, 0) + d(0, 3, 0) - 2.0 * (d(1, 2, 0) / r)) * cx;
  c.B = d(2, 2, 0) + d(0, 4, 0) - 2.0 * (d(1, 3, 0) / r);
  c.D = (d(2, 0, 1) + d(0, 2, 1) - 2.0 * (d(1, 1, 1) / r)) * cz;
  c.F = d(2, 0, 2) + d(0, 2, 2) - 2.0 * (d(1, 1, 2) / r);

  const double kx = d(0, 4, 0) - d(0, 3, 0) * d(0, 3, 0) - 1.0;
  const double kz = d(0, 0, 4) - d(0, 0, 3) * d(0, 0, 3) - 1.0;
  if (kx <= kSingularTolerance * std::abs(d(0, 4, 0)) || kz <= kSingularTolerance * std::abs(d(0, 0, 4)))
    throw Error(ErrorCode::SingularDenominator, "sample kurtosis-skewness bracket is not positive");

  const double den_x = 2.0 * cx * cx * kx;
  const double den_z = 2.0 * cz * cz * kz;
  c.alpha = (c.A * (d(0, 4, 0) - 1.0) - c.B * d(0, 3, 0) * cx) / den_x;
  c.beta = (c.B * cx * cx - c.A * d(0, 3, 0) * cx) / den_x;
  c.gamma = (c.D * (d(0, 0, 4) - 1.0) - c.F * d(0, 0, 3) * cz) / den_z;
  c.delta = (cz * cz * c.F - c.D * d(0, 0, 3) * cz) / den_z;
  return c;
}

EstimatorSpec make_optimal_spec(const MomentSet& moments) {
  const auto c = optimum_constants(moments);
  return estimator::TLinear{{c.alpha, c.beta, c.gamma, c.delta}};
}

EstimatorSpec make_optimal_h_spec(const MomentSet& moments) {
  const auto c = optimum_constants_h(moments);
  return estimator::HLinear{{c.alpha, c.beta}};
}

EstimatorSpec parse_estimator_spec(std::string_view text) {
  using namespace estimator;
  const auto colon = text.find(':');
  const auto name = text.substr(0, colon);
  const auto args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool has_args = colon != std::string_view::npos;

  auto no_args = [&]() {
    if (has_args) throw Error(ErrorCode::InvalidSpec, std::string(name) + " takes no arguments");
  };
  auto four = [&]() {
    const auto v = parse_numbers(args, 4, name);
    return Exponents4{v[0], v[1], v[2], v[3]};
  };
  auto two = [&]() {
    const auto v = parse_numbers(args, 2, name);
    return Exponents2{v[0], v[1]};
  };

  if (name == "sample-r") return no_args(), SampleR{};
  if (name == "chain-ratio") return no_args(), ChainRatio{};
  if (name == "generalized-power") return GeneralizedPower{four()};
  if (name == "h-linear") return HLinear{two()};
  if (name == "h-power") return HPower{two()};
  if (name == "t-linear") return TLinear{four()};
  if (name == "t-power") return TPower{four()};
  if (name == "difference") return DifferenceType{four()};
  if (name == "td-star") {
    if (args == "power" || args == "product") return TdStarPower{};
    if (args == "ratio") return TdStarRatio{};
    if (args == "linear") return TdStarLinear{};
    if (args == "inverse") return TdStarInverse{};
    throw Error(ErrorCode::InvalidSpec, "td-star needs one of power, ratio, linear, inverse");
  }
  throw Error(ErrorCode::InvalidSpec, "unknown estimator '" + std::string(text) + "'");
}

std::string to_string(const EstimatorSpec& spec) {
  using namespace estimator;
  return std::visit(Overloaded{
                        [](const SampleR&) { return std::string("sample-r"); },
                        [](const ChainRatio&) { return std::string("chain-ratio"); },
                        [](const GeneralizedPower& e) { return "generalized-power:" + join(e.alpha.data(), 4); },
                        [](const HLinear& e) { return "h-linear:" + join(e.alpha.data(), 2); },
                        [](const HPower& e) { return "h-power:" + join(e.alpha.data(), 2); },
                        [](const TLinear& e) { return "t-linear:" + join(e.alpha.data(), 4); },
                        [](const TPower& e) { return "t-power:" + join(e.alpha.data(), 4); },
                        [](const TdStarPower&) { return std::string("td-star:power"); },
                        [](const TdStarRatio&) { return std::string("td-star:ratio"); },
                        [](const TdStarLinear&) { return std::string("td-star:linear"); },
                        [](const TdStarInverse&) { return std::string("td-star:inverse"); },
                        [](const DifferenceType& e) { return "difference:" + join(e.alpha.data(), 4); },
                    },
                    spec);
}

}  // namespace tpcorr
