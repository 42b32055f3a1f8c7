#include "tpcorr/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tpcorr/analytics.hpp"
#include "tpcorr/error.hpp"
#include "tpcorr/io.hpp"

namespace tpcorr::cli {
namespace {

PopulationFrame require_population(const RunConfig& c) {
  if (!c.population) throw Error(ErrorCode::InvalidParameter, "this command needs a population CSV (--pop)");
  return load_population_csv(*c.population);
}

MomentSet load_moments(const RunConfig& c) {
  if (c.population && c.params)
    throw Error(ErrorCode::InvalidParameter, "give either a population CSV or a parameter document, not both");
  if (c.params) return moments_from_params(load_params_json(*c.params), {c.delta310_from_delta300});
  if (c.population) return population_moments(load_population_csv(*c.population));
  throw Error(ErrorCode::InvalidParameter, "this command needs --pop or --params");
}

std::pair<std::size_t, std::size_t> require_sizes(const RunConfig& c) {
  if (!c.n || !c.n1) throw Error(ErrorCode::InvalidDesign, "this command needs --n and --n1");
  return {*c.n, *c.n1};
}

DesignSpec require_design(const RunConfig& c, const PopulationFrame& frame) {
  const auto [n, n1] = require_sizes(c);
  DesignSpec design{frame.size(), n1, n};
  design.validate();
  return design;
}

std::string require_single_estimator(const RunConfig& c) {
  if (c.estimators.size() != 1) throw Error(ErrorCode::InvalidSpec, "this command needs exactly one --estimator");
  return c.estimators.front();
}

nlohmann::json source_json(const RunConfig& c) {
  nlohmann::json j = nlohmann::json::object();
  if (c.population) j["population"] = c.population->filename().string();
  if (c.params) j["params"] = c.params->filename().string();
  return j;
}

nlohmann::json run_estimate(const RunConfig& c) {
  const auto frame = require_population(c);
  const auto design = require_design(c, frame);
  const auto moments = population_moments(frame);
  const auto sample = draw_two_phase(design, c.seed);
  const auto stats = sample_statistics(frame, sample, known_aux(frame));

  std::vector<std::string> texts = c.estimators;
  if (texts.empty()) {
    texts = {"sample-r",        "chain-ratio",   "h-linear:optimal", "t-linear:optimal", "difference:optimal",
             "td-star:power",   "td-star:ratio", "td-star:linear",   "td-star:inverse"};
  }
  nlohmann::json estimates = nlohmann::json::object();
  nlohmann::json failures = nlohmann::json::object();
  for (const auto& text : texts) {
    const auto spec = resolve_estimator(text, moments);
    try {
      double value = estimate(spec, stats);
      if (c.clamp) value = std::clamp(value, -1.0, 1.0);
      estimates[text] = {{"spec", to_string(spec)}, {"value", value}};
    } catch (const Error& e) {
      if (!is_validation_error(e.code()) || e.code() == ErrorCode::MissingParameter) {
        failures[text] = std::string(to_string(e.code()));
      } else {
        throw;
      }
    }
  }
  return {
      {"schema", kReportSchema},
      {"kind", "estimate"},
      {"design", {{"N", design.N}, {"n1", design.n1}, {"n", design.n}}},
      {"seed", c.seed},
      {"clamped", c.clamp},
      {"rho_population", moments.rho()},
      {"sample", {{"first_phase", sample.first_phase}, {"second_phase", sample.second_phase}}},
      {"statistics", {{"r", stats.r}, {"u", stats.u}, {"v", stats.v}, {"w", stats.w}, {"a", stats.a}}},
      {"estimates", estimates},
      {"failures", failures},
  };
}

nlohmann::json execute(const RunConfig& c) {
  switch (c.command) {
    case Command::Moments: {
      auto j = to_json(load_moments(c));
      j["source"] = source_json(c);
      return j;
    }
    case Command::Efficiency: {
      const auto moments = load_moments(c);
      const auto [n, n1] = require_sizes(c);
      auto j = to_json(efficiency_report(moments, n, n1));
      j["inputs"]["source"] = source_json(c);
      return j;
    }
    case Command::Estimate:
      return run_estimate(c);
    case Command::Simulate: {
      const auto frame = require_population(c);
      const auto design = require_design(c, frame);
      const auto spec = resolve_estimator(require_single_estimator(c), population_moments(frame));
      SimulationOptions options;
      options.workers = c.workers;
      options.clamp = c.clamp;
      return to_json(simulate(frame, design, spec, c.reps, c.seed, options));
    }
    case Command::Enumerate: {
      const auto frame = require_population(c);
      const auto design = require_design(c, frame);
      const auto spec = resolve_estimator(require_single_estimator(c), population_moments(frame));
      return to_json(enumerate_exact(frame, design, spec, c.cap));
    }
  }
  throw Error(ErrorCode::InvalidParameter, "unknown command");
}

}  // namespace

EstimatorSpec resolve_estimator(const std::string& text, const MomentSet& moments) {
  if (text == "t-linear:optimal") return make_optimal_spec(moments);
  if (text == "h-linear:optimal") return make_optimal_h_spec(moments);
  if (text == "difference:optimal") {
    // r + rho alpha_i (q_i - 1) matches r t(...) to first order.
    const auto c = optimum_constants(moments);
    const double rho = moments.rho();
    return estimator::DifferenceType{{rho * c.alpha, rho * c.beta, rho * c.gamma, rho * c.delta}};
  }
  return parse_estimator_spec(text);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const std::string text = dump_canonical(execute(config));
    if (config.output) {
      std::ofstream file(*config.output, std::ios::binary);
      if (!file) throw Error(ErrorCode::InvalidParameter, "cannot write " + config.output->string());
      file << text;
    } else {
      out << text;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_validation_error(e.code()) ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Correlation estimation under two-phase sampling with auxiliary information", "tpcorr"};
  app.require_subcommand(1);
  RunConfig config;
  std::string output;
  std::string population, params;
  std::size_t n = 0, n1 = 0;

  auto add_inputs = [&](CLI::App* sub, bool allow_params) {
    sub->add_option("--pop", population, "Population CSV with header y,x,z");
    if (allow_params) {
      sub->add_option("--params", params, "Flat JSON parameter document");
      sub->add_flag("--delta310-from-delta300", config.delta310_from_delta300,
                    "Use d_300 in place of a missing d_310");
    }
    sub->add_option("-o,--output", output, "Write the report here instead of standard output");
  };
  auto add_design = [&](CLI::App* sub) {
    sub->add_option("--n", n, "Second-phase sample size");
    sub->add_option("--n1", n1, "First-phase sample size");
  };

  auto* moments = app.add_subcommand("moments", "Population moments and standardized mixed moments");
  moments->add_option("population", population, "Population CSV (same as --pop)");
  add_inputs(moments, true);

  auto* efficiency = app.add_subcommand("efficiency", "First-order variances and relative efficiencies");
  add_inputs(efficiency, true);
  add_design(efficiency);

  auto* est = app.add_subcommand("estimate", "Draw one two-phase sample and evaluate estimators");
  add_inputs(est, false);
  add_design(est);
  est->add_option("--seed", config.seed, "Sampling seed");
  est->add_option("--estimator", config.estimators, "Estimator spec (repeatable; default: all)");
  est->add_flag("--clamp", config.clamp, "Clamp reported estimates to [-1, 1]");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo study of one estimator");
  add_inputs(sim, false);
  add_design(sim);
  sim->add_option("--estimator", config.estimators, "Estimator spec")->required();
  sim->add_option("--reps", config.reps, "Replications");
  sim->add_option("--seed", config.seed, "Base seed");
  sim->add_option("--workers", config.workers, "Worker threads");
  sim->add_flag("--clamp", config.clamp, "Clamp estimates to [-1, 1] before aggregation");

  auto* enu = app.add_subcommand("enumerate", "Exact design expectation by full enumeration");
  add_inputs(enu, false);
  add_design(enu);
  enu->add_option("--estimator", config.estimators, "Estimator spec")->required();
  enu->add_option("--cap", config.cap, "Maximum number of two-phase samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (*moments) config.command = Command::Moments;
  if (*efficiency) config.command = Command::Efficiency;
  if (*est) config.command = Command::Estimate;
  if (*sim) config.command = Command::Simulate;
  if (*enu) config.command = Command::Enumerate;
  if (!population.empty()) config.population = population;
  if (!params.empty()) config.params = params;
  if (!output.empty()) config.output = output;
  if (n != 0) config.n = n;
  if (n1 != 0) config.n1 = n1;
  return run(config, out, err);
}

}  // namespace tpcorr::cli
