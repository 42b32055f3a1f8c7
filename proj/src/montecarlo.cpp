#include "tpcorr/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "tpcorr/analytics.hpp"
#include "tpcorr/error.hpp"

namespace tpcorr {
namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

bool is_skippable(ErrorCode code) {
  return code == ErrorCode::DegenerateSample || code == ErrorCode::NonPositiveRatio ||
         code == ErrorCode::SingularDenominator || code == ErrorCode::ZeroCorrelation;
}

struct Outcome {
  double value = 0.0;
  std::optional<ErrorCode> skipped;
};

Outcome evaluate(const PopulationFrame& frame, const TwoPhaseSample& sample, const KnownAux& aux,
                 const EstimatorSpec& spec, bool clamp) {
  try {
    double e = estimate(spec, sample_statistics(frame, sample, aux));
    if (clamp) e = std::clamp(e, -1.0, 1.0);
    return {e, std::nullopt};
  } catch (const Error& err) {
    if (!is_skippable(err.code())) throw;
    return {0.0, err.code()};
  }
}

void enforce_skip_policy(std::size_t used, std::size_t skipped, double max_fraction) {
  if (used == 0) throw Error(ErrorCode::AllSamplesDegenerate, "the estimator could not be formed on any sample");
  const double total = static_cast<double>(used + skipped);
  if (static_cast<double>(skipped) > max_fraction * total) {
    throw Error(ErrorCode::ExcessiveSkips, std::to_string(skipped) + " of " +
                                               std::to_string(used + skipped) +
                                               " samples were skipped; the design is unsuitable");
  }
}

std::uint64_t saturating_binomial(std::uint64_t n, std::uint64_t k) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // out * (n - k + i) / i is exact at every step.
    const std::uint64_t factor = n - k + i;
    if (out > kMax / factor) return kMax;
    out = out * factor / i;
  }
  return out;
}

std::uint64_t saturating_product(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

// Calls fn(index set) for every k-subset of `units`, in lexicographic order.
template <class Fn>
void for_each_subset(const std::vector<std::size_t>& units, std::size_t k, Fn&& fn) {
  std::vector<char> chosen(units.size(), 0);
  std::fill(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(k), 1);
  std::vector<std::size_t> subset;
  subset.reserve(k);
  do {
    subset.clear();
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (chosen[i]) subset.push_back(units[i]);
    }
    fn(subset);
  } while (std::prev_permutation(chosen.begin(), chosen.end()));
}

}  // namespace

SimulationResult simulate(const PopulationFrame& frame, const DesignSpec& design, const EstimatorSpec& spec,
                          std::size_t reps, std::uint64_t seed, const SimulationOptions& options) {
  design.validate();
  if (design.N != frame.size())
    throw Error(ErrorCode::InvalidDesign, "design N does not match the population size");
  if (reps < 1) throw Error(ErrorCode::InvalidDesign, "reps must be at least 1");

  const MomentSet moments = population_moments(frame);
  const KnownAux aux = known_aux(frame);
  const double rho = moments.rho();

  std::vector<Outcome> outcomes(reps);
  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, reps);
  std::vector<std::exception_ptr> failures(workers);
  auto run = [&](std::size_t worker) {
    try {
      for (std::size_t k = worker; k < reps; k += workers) {
        outcomes[k] = evaluate(frame, draw_two_phase(design, seed, k), aux, spec, options.clamp);
      }
    } catch (...) {
      failures[worker] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  SimulationResult result;
  result.reps_requested = reps;
  result.rho_population = rho;
  result.estimator = spec;
  result.design = design;
  result.seed = seed;
  result.clamped = options.clamp;

  // Aggregate in replication order so the result is independent of scheduling.
  CompensatedSum sum, sum_sq_err;
  for (const auto& o : outcomes) {
    if (o.skipped) {
      ++result.reps_skipped;
      ++result.skip_reasons[std::string(to_string(*o.skipped))];
      continue;
    }
    ++result.reps_used;
    sum.add(o.value);
    sum_sq_err.add((o.value - rho) * (o.value - rho));
  }
  enforce_skip_policy(result.reps_used, result.reps_skipped, options.max_skip_fraction);

  const double used = static_cast<double>(result.reps_used);
  result.mean_estimate = sum.value() / used;
  result.bias = result.mean_estimate - rho;
  result.empirical_mse = sum_sq_err.value() / used;

  CompensatedSum dev_mean, dev_mse;
  for (const auto& o : outcomes) {
    if (o.skipped) continue;
    const double se = (o.value - rho) * (o.value - rho);
    dev_mean.add((o.value - result.mean_estimate) * (o.value - result.mean_estimate));
    dev_mse.add((se - result.empirical_mse) * (se - result.empirical_mse));
  }
  if (result.reps_used > 1) {
    result.mc_standard_error_of_mean = std::sqrt(dev_mean.value() / (used - 1.0) / used);
    result.mc_standard_error_of_mse = std::sqrt(dev_mse.value() / (used - 1.0) / used);
  }
  result.analytic_variance = first_order_variance(spec, moments, design.n, design.n1);
  return result;
}

ExactResult enumerate_exact(const PopulationFrame& frame, const DesignSpec& design, const EstimatorSpec& spec,
                            std::uint64_t cap, double max_skip_fraction) {
  design.validate();
  if (design.N != frame.size())
    throw Error(ErrorCode::InvalidDesign, "design N does not match the population size");
  const std::uint64_t pairs =
      saturating_product(saturating_binomial(design.N, design.n1), saturating_binomial(design.n1, design.n));
  if (pairs > cap) {
    throw Error(ErrorCode::TooManySamples,
                std::to_string(pairs) + " two-phase samples exceed the cap of " + std::to_string(cap));
  }

  const MomentSet moments = population_moments(frame);
  const KnownAux aux = known_aux(frame);
  const double rho = moments.rho();

  ExactResult result;
  result.rho_population = rho;
  result.estimator = spec;
  result.design = design;

  std::vector<double> values;
  values.reserve(pairs);
  std::vector<std::size_t> all(design.N);
  for (std::size_t i = 0; i < design.N; ++i) all[i] = i;

  for_each_subset(all, design.n1, [&](const std::vector<std::size_t>& first) {
    for_each_subset(first, design.n, [&](const std::vector<std::size_t>& second) {
      ++result.pairs_total;
      const auto o = evaluate(frame, {first, second}, aux, spec, false);
      if (o.skipped) {
        ++result.pairs_skipped;
        ++result.skip_reasons[std::string(to_string(*o.skipped))];
      } else {
        values.push_back(o.value);
      }
    });
  });
  result.pairs_used = values.size();
  enforce_skip_policy(result.pairs_used, result.pairs_skipped, max_skip_fraction);

  CompensatedSum sum, sq_err;
  for (double v : values) {
    sum.add(v);
    sq_err.add((v - rho) * (v - rho));
  }
  const double used = static_cast<double>(values.size());
  result.mean = sum.value() / used;
  result.bias = result.mean - rho;
  result.mse = sq_err.value() / used;
  CompensatedSum dev;
  for (double v : values) dev.add((v - result.mean) * (v - result.mean));
  result.variance = dev.value() / used;
  return result;
}

std::optional<double> first_order_variance(const EstimatorSpec& spec, const MomentSet& moments, std::size_t n,
                                           std::size_t n1) {
  using namespace estimator;
  try {
    if (std::holds_alternative<SampleR>(spec)) return var_r(moments, n);
    if (std::holds_alternative<ChainRatio>(spec)) return var_t_class(moments, n, n1, {-1.0, -1.0, -1.0, -1.0});
    if (const auto* e = std::get_if<GeneralizedPower>(&spec)) return var_t_class(moments, n, n1, e->alpha);
    if (const auto* e = std::get_if<TLinear>(&spec)) return var_t_class(moments, n, n1, e->alpha);
    if (const auto* e = std::get_if<TPower>(&spec)) return var_t_class(moments, n, n1, e->alpha);
    if (const auto* e = std::get_if<HLinear>(&spec)) return var_h_class(moments, n, n1, e->alpha);
    if (const auto* e = std::get_if<HPower>(&spec)) return var_h_class(moments, n, n1, e->alpha);
    if (const auto* e = std::get_if<DifferenceType>(&spec)) {
      // r + sum a_i (q_i - 1) linearizes like r t with t_i = a_i / rho.
      const double rho = moments.rho();
      return var_t_class(moments, n, n1,
                         {e->alpha[0] / rho, e->alpha[1] / rho, e->alpha[2] / rho, e->alpha[3] / rho});
    }
    return min_var_td(moments, n, n1);
  } catch (const Error&) {
    return std::nullopt;
  }
}

PopulationFrame synthetic_population(std::size_t N, std::uint64_t seed, const SyntheticShape& shape) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 engine(seq);
  std::gamma_distribution<double> gamma(shape.z_shape, shape.z_scale);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> y(N), x(N), z(N);
  for (std::size_t i = 0; i < N; ++i) {
    z[i] = shape.z_offset + gamma(engine);
    x[i] = shape.x_slope * z[i] + shape.x_noise * normal(engine);
    y[i] = shape.y_slope * x[i] + shape.y_noise * normal(engine);
  }
  return PopulationFrame(std::move(y), std::move(x), std::move(z));
}

}  // namespace tpcorr
