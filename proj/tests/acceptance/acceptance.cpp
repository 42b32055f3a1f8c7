// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadratic_min.hpp"
#include "test_support.hpp"
#include "tpcorr/analytics.hpp"
#include "tpcorr/cli.hpp"
#include "tpcorr/error.hpp"
#include "tpcorr/estimators.hpp"
#include "tpcorr/montecarlo.hpp"

namespace {

using namespace tpcorr;
using namespace tpcorr::estimator;

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Records the first failing observation; later ones only flip the verdict.
void require(Verdict& v, bool ok, const std::string& what) {
  if (!ok && v.pass) v.detail = what;
  v.pass = v.pass && ok;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Verdict normal_theory_identity() {
  Verdict v;
  double worst = 0.0;
  for (double rho : {0.0, 0.3, 0.9136}) {
    const auto m = normal_theory_moments(rho);
    for (std::size_t n : {10u, 100u}) {
      const double expected = (1 - rho * rho) * (1 - rho * rho) / static_cast<double>(n);
      const double rel = std::abs(var_r(m, n) - expected) / expected;
      worst = std::max(worst, rel);
      require(v, rel <= 1e-10, "rho=" + num(rho) + " n=" + std::to_string(n) + " rel err " + num(rel));
    }
  }
  if (v.pass) v.detail = "max relative error " + num(worst);
  return v;
}

Verdict quadratic_minimum() {
  Verdict v;
  const auto m = moments_from_params(murthy_reference_parameters(), {.delta310_from_delta300 = true});
  const auto f = [&](const std::array<double, 4>& t) { return var_t_class(m, 10, 25, t); };
  const auto t = test::newton_minimize(f, {0, 0, 0, 0});
  const auto c = optimum_constants(m);
  const std::array<double, 4> closed{c.alpha, c.beta, c.gamma, c.delta};
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(t[i] - closed[i]));
  const double value_err = std::abs(f(t) - min_var_td(m, 10, 25));
  require(v, worst <= 1e-6, "argmin differs by " + num(worst));
  require(v, value_err <= 1e-9, "minimum differs by " + num(value_err));
  if (v.pass) v.detail = "argmin err " + num(worst) + ", value err " + num(value_err);
  return v;
}

Verdict gap_identity() {
  Verdict v;
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    PopulationFrame frame = [&] {
      if (i % 2 == 0) return test::random_frame(rng, 200);
      SyntheticShape shape;
      shape.z_shape = std::uniform_real_distribution<double>(2.0, 40.0)(rng);
      shape.x_noise = std::uniform_real_distribution<double>(10.0, 200.0)(rng);
      shape.y_noise = std::uniform_real_distribution<double>(20.0, 400.0)(rng);
      return synthetic_population(200, rng(), shape);
    }();
    const auto m = population_moments(frame);
    const std::size_t n = 10 + static_cast<std::size_t>(i % 5) * 10;
    const std::size_t n1 = n * (2 + static_cast<std::size_t>(i % 3));
    const auto g = variance_gap(m, n, n1);
    const double diff = std::abs(g.closed_form - g.by_subtraction);
    worst = std::max(worst, diff);
    const double td = min_var_td(m, n, n1), hd = min_var_hd(m, n, n1), r = var_r(m, n);
    const std::string tag = "population " + std::to_string(i) + ": ";
    require(v, g.closed_form >= 0.0, tag + "negative gap " + num(g.closed_form));
    require(v, diff <= 1e-12, tag + "closed form vs subtraction " + num(diff));
    require(v, td <= hd && hd <= r, tag + "ordering violated " + num(td) + " " + num(hd) + " " + num(r));
  }
  if (v.pass) v.detail = "100 populations, max |closed - subtraction| " + num(worst);
  return v;
}

Verdict enumeration_vs_simulation() {
  Verdict v;
  const auto frame = test::fixture6();
  const DesignSpec design{6, 4, 3};
  const auto exact = enumerate_exact(frame, design, SampleR{});
  const auto sim = simulate(frame, design, SampleR{}, 200000, 8675309);
  const double z_mean = std::abs(sim.mean_estimate - exact.mean) / sim.mc_standard_error_of_mean;
  const double z_mse = std::abs(sim.empirical_mse - exact.mse) / sim.mc_standard_error_of_mse;
  require(v, z_mean <= 4.0, "mean off by " + num(z_mean) + " SE");
  require(v, z_mse <= 4.0, "MSE off by " + num(z_mse) + " SE");
  if (v.pass) v.detail = "mean " + num(z_mean) + " SE, MSE " + num(z_mse) + " SE";
  return v;
}

// Shared setting of the two large-sample simulation criteria.
struct LargeSample {
  PopulationFrame frame = synthetic_population(10000, 2024);
  MomentSet moments = population_moments(frame);
  DesignSpec design{10000, 400, 100};
  std::size_t reps = 20000;
  std::uint64_t seed = 31337;
};

const LargeSample& large_sample() {
  static const LargeSample setting;
  return setting;
}

const SimulationResult& large_sample_run(const EstimatorSpec& spec) {
  static std::vector<std::pair<EstimatorSpec, SimulationResult>> cache;
  for (const auto& [s, r] : cache) {
    if (s == spec) return r;
  }
  const auto& ls = large_sample();
  cache.emplace_back(spec, simulate(ls.frame, ls.design, spec, ls.reps, ls.seed));
  return cache.back().second;
}

Verdict first_order_realism() {
  Verdict v;
  const auto& ls = large_sample();
  const auto& r = large_sample_run(SampleR{});
  const auto& t = large_sample_run(make_optimal_spec(ls.moments));
  const double theory_r = var_r(ls.moments, ls.design.n);
  const double theory_t = min_var_td(ls.moments, ls.design.n, ls.design.n1);
  const double dev_r = std::abs(r.empirical_mse / theory_r - 1.0);
  const double dev_t = std::abs(t.empirical_mse / theory_t - 1.0);
  require(v, dev_r <= 0.10, "sample r MSE deviates " + num(100 * dev_r) + "% from theory");
  require(v, dev_t <= 0.15, "optimum t-linear MSE deviates " + num(100 * dev_t) + "% from theory");
  v.detail = (v.pass ? "" : v.detail + "; ") + "rho_yx " + num(ls.moments.rho()) + ", r " + num(100 * dev_r) +
             "%, t-linear " + num(100 * dev_t) + "%";
  return v;
}

Verdict plug_in_equivalence() {
  Verdict v;
  const auto& ls = large_sample();
  const auto& t = large_sample_run(make_optimal_spec(ls.moments));
  const auto& star = large_sample_run(TdStarPower{});
  const double se = std::hypot(t.mc_standard_error_of_mse, star.mc_standard_error_of_mse);
  const double z = std::abs(star.empirical_mse - t.empirical_mse) / se;
  require(v, z <= 3.0, "MSEs differ by " + num(z) + " combined SE");
  v.detail = (v.pass ? "" : v.detail + "; ") + "td-star " + num(star.empirical_mse) + " vs t-linear " +
             num(t.empirical_mse) + " (" + num(z) + " SE, " + std::to_string(star.reps_skipped) + " skipped)";
  return v;
}

Verdict published_table_handling() {
  Verdict v;
  const std::string params = test::data_path("murthy1967_params.json");
  const char* argv[] = {"tpcorr", "efficiency", "--params", params.c_str(), "--n", "10", "--n1", "25",
                        "--delta310-from-delta300"};
  std::ostringstream out, err;
  const int status = cli::run_cli(static_cast<int>(std::size(argv)), argv, out, err);
  require(v, status == 0, "efficiency exited " + std::to_string(status) + ": " + err.str());
  if (!v.pass) return v;
  const auto j = nlohmann::json::parse(out.str());
  require(v, j.contains("published"), "published values missing");
  if (!v.pass) return v;
  const auto& p = j["published"];
  require(v, p["pre_r"] == 100.0 && p["pre_hd"] == 129.147 && p["pre_td"] == 305.441, "published values wrong");
  const double hd = j["pre_hd"].get<double>(), td = j["pre_td"].get<double>();
  require(v, j["pre_r"] == 100.0 && td >= hd && hd >= 100.0, "computed ordering violated");
  bool discrepancy = false, substitution = false;
  for (const auto& note : j["notes"]) {
    const auto s = note.get<std::string>();
    discrepancy = discrepancy || (s.find("not reproduced") != std::string::npos);
    substitution = substitution || (s.find("d_310") != std::string::npos);
  }
  require(v, discrepancy, "discrepancy note missing");
  require(v, substitution, "d_310 interpretation note missing");
  if (v.pass) v.detail = "computed pre_hd " + num(hd) + ", pre_td " + num(td) + "; published 129.147, 305.441";
  return v;
}

Verdict unity_collapse() {
  Verdict v;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  std::size_t checked = 0;
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    const auto frame = test::random_frame(rng, 60);
    auto s = sample_statistics(frame, draw_two_phase({60, 30, 12}, trial, 0), known_aux(frame));
    s.u = s.v = s.w = s.a = 1.0;
    s.mean_x = s.mean_x_star;
    s.var_x = s.var_x_star;
    s.mean_z_star = s.known_mean_z;
    s.var_z_star = s.known_var_z;
    auto four = [&] { return Exponents4{c(rng), c(rng), c(rng), c(rng)}; };
    auto two = [&] { return Exponents2{c(rng), c(rng)}; };
    const std::vector<EstimatorSpec> specs{
        SampleR{},     ChainRatio{},    GeneralizedPower{four()}, HLinear{two()},  HPower{two()},
        TLinear{four()}, TPower{four()}, TdStarPower{},           TdStarRatio{},   TdStarLinear{},
        TdStarInverse{}, DifferenceType{four()}};
    for (const auto& spec : specs) {
      ++checked;
      require(v, estimate(spec, s) == s.r, to_string(spec) + " does not return r exactly");
    }
  }
  if (v.pass) v.detail = std::to_string(checked) + " evaluations across 12 variants";
  return v;
}

Verdict determinism() {
  Verdict v;
  const auto frame = synthetic_population(2000, 99);
  const DesignSpec design{2000, 200, 50};
  for (const EstimatorSpec& spec : {EstimatorSpec{SampleR{}}, EstimatorSpec{TdStarPower{}}}) {
    const auto a = simulate(frame, design, spec, 5000, 123, {.workers = 1});
    const auto b = simulate(frame, design, spec, 5000, 123, {.workers = 1});
    const auto c = simulate(frame, design, spec, 5000, 123, {.workers = 8});
    const auto d = simulate(frame, design, spec, 5000, 123, {.workers = 8});
    require(v, a == b, to_string(spec) + ": repeated single-worker runs differ");
    require(v, c == d, to_string(spec) + ": repeated 8-worker runs differ");
    require(v, a == c, to_string(spec) + ": 1 and 8 workers differ");
  }
  if (v.pass) v.detail = "identical results for workers 1 and 8";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"normal-theory identity for var_r", normal_theory_identity},
      {"numerical minimum of var_t_class matches closed form", quadratic_minimum},
      {"variance gap identity and ordering on 100 populations", gap_identity},
      {"simulation agrees with exact enumeration", enumeration_vs_simulation},
      {"first-order variances match simulated MSE", first_order_realism},
      {"plug-in estimator matches oracle optimum", plug_in_equivalence},
      {"published efficiency table handling", published_table_handling},
      {"unity collapse for every estimator", unity_collapse},
      {"determinism across worker counts", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
