#include "tpcorr/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "detail/summaries.hpp"
#include "tpcorr/error.hpp"

namespace tpcorr {

void DesignSpec::validate() const {
  if (n < 2 || n > n1 || n1 > N) {
    throw Error(ErrorCode::InvalidDesign, "need 2 <= n <= n1 <= N, got N=" + std::to_string(N) +
                                              " n1=" + std::to_string(n1) + " n=" + std::to_string(n));
  }
}

KnownAux known_aux(const PopulationFrame& frame) {
  const double m = detail::mean(frame.z());
  return {m, detail::variance(frame.z(), m)};
}

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

std::uint64_t SampleRng::below(std::uint64_t bound) {
  // Rejection on the top of the range keeps the draw exactly uniform and
  // independent of the standard library's distribution implementation.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

TwoPhaseSample draw_two_phase(const DesignSpec& design, std::uint64_t seed, std::uint64_t stream) {
  design.validate();
  SampleRng rng(seed, stream);

  std::vector<std::size_t> units(design.N);
  std::iota(units.begin(), units.end(), std::size_t{0});
  for (std::size_t i = 0; i < design.n1; ++i) {
    std::swap(units[i], units[i + rng.below(design.N - i)]);
  }
  units.resize(design.n1);

  std::vector<std::size_t> second(units);
  for (std::size_t i = 0; i < design.n; ++i) {
    std::swap(second[i], second[i + rng.below(design.n1 - i)]);
  }
  second.resize(design.n);

  std::sort(units.begin(), units.end());
  std::sort(second.begin(), second.end());
  return {std::move(units), std::move(second)};
}

SampleStatistics sample_statistics(const PopulationFrame& frame, const TwoPhaseSample& sample,
                                   const KnownAux& aux) {
  const std::size_t N = frame.size();
  auto check = [N](const std::vector<std::size_t>& index, const char* phase) {
    for (std::size_t i : index) {
      if (i >= N) throw Error(ErrorCode::InvalidDesign, std::string(phase) + " index out of range");
    }
    if (std::adjacent_find(index.begin(), index.end(), std::greater_equal<>()) != index.end())
      throw Error(ErrorCode::InvalidDesign, std::string(phase) + " indices must be strictly increasing");
  };
  check(sample.first_phase, "first-phase");
  check(sample.second_phase, "second-phase");
  if (sample.second_phase.size() < 2 || sample.second_phase.size() > sample.first_phase.size())
    throw Error(ErrorCode::InvalidDesign, "need 2 <= n <= n1");
  if (!std::includes(sample.first_phase.begin(), sample.first_phase.end(), sample.second_phase.begin(),
                     sample.second_phase.end()))
    throw Error(ErrorCode::InvalidDesign, "second phase is not nested in the first phase");
  if (!(aux.var_z > 0.0) || aux.mean_z == 0.0)
    throw Error(ErrorCode::InvalidParameter, "known z parameters need S_z^2 > 0 and a non-zero mean");

  const auto x1 = detail::gather(frame.x(), sample.first_phase);
  const auto z1 = detail::gather(frame.z(), sample.first_phase);
  const auto xs = detail::gather(frame.x(), sample.second_phase);
  const auto ys = detail::gather(frame.y(), sample.second_phase);
  const auto zs = detail::gather(frame.z(), sample.second_phase);

  SampleStatistics s;
  s.n = xs.size();
  s.n1 = x1.size();
  s.mean_x = detail::mean(xs);
  s.mean_y = detail::mean(ys);
  s.mean_z = detail::mean(zs);
  s.mean_x_star = detail::mean(x1);
  s.mean_z_star = detail::mean(z1);
  s.var_x = detail::variance(xs, s.mean_x);
  s.var_y = detail::variance(ys, s.mean_y);
  s.var_z = detail::variance(zs, s.mean_z);
  s.cov_yx = detail::covariance(ys, xs, s.mean_y, s.mean_x);
  s.var_x_star = detail::variance(x1, s.mean_x_star);
  s.var_z_star = detail::variance(z1, s.mean_z_star);

  if (s.var_x <= 0.0 || s.var_y <= 0.0 || s.var_z <= 0.0)
    throw Error(ErrorCode::DegenerateSample, "zero variance in the second-phase sample");
  if (s.var_x_star <= 0.0 || s.var_z_star <= 0.0)
    throw Error(ErrorCode::DegenerateSample, "zero variance in the first-phase sample");
  if (s.mean_x_star == 0.0 || s.mean_x == 0.0 || s.mean_z == 0.0)
    throw Error(ErrorCode::DegenerateSample, "zero sample mean used as a divisor");

  s.known_mean_z = aux.mean_z;
  s.known_var_z = aux.var_z;
  s.r = detail::correlation(s.cov_yx, s.var_y, s.var_x);
  s.u = s.mean_x / s.mean_x_star;
  s.v = s.var_x / s.var_x_star;
  s.w = s.mean_z_star / aux.mean_z;
  s.a = s.var_z_star / aux.var_z;
  s.cv_x = std::sqrt(s.var_x) / s.mean_x;
  s.cv_z = std::sqrt(s.var_z) / s.mean_z;
  s.delta = standardized_moments(ys, xs, zs);
  return s;
}

}  // namespace tpcorr
