#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "quadratic_min.hpp"
#include "test_support.hpp"
#include "tpcorr/analytics.hpp"
#include "tpcorr/error.hpp"

namespace tpcorr {
namespace {

MomentSet reference() { return moments_from_params(murthy_reference_parameters(), {true}); }

// Moment set with A = B = D = F = 0 at rho = 0.5 (see the estimator tests).
MomentSet no_aux_gain() {
  return moments_from_params({{"rho_yx", 0.5}, {"C_x", 0.3}, {"C_z", 0.6}, {"d_210", 0},   {"d_030", 0},
                              {"d_120", 0},    {"d_220", 1},   {"d_040", 3},   {"d_130", 1},   {"d_201", 0},
                              {"d_021", 0},    {"d_111", 0},   {"d_202", 1},   {"d_022", 1},   {"d_112", 0.5},
                              {"d_004", 3},    {"d_003", 0},   {"d_400", 3},   {"d_310", 1.5}});
}

template <class Fn>
ErrorCode error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected tpcorr::Error";
  return ErrorCode::ParseError;
}

TEST(ConstantsABDF, ReferenceValuesMatchOracle) {
  const auto k = constants_ABDF(reference());
  EXPECT_NEAR(k.A, -0.15038042469352014011, 1e-12);
  EXPECT_NEAR(k.B, -0.25682714535901926445, 1e-12);
  EXPECT_NEAR(k.D, -0.12088139579684763573, 1e-12);
  EXPECT_NEAR(k.F, -0.19924168126094570928, 1e-12);
}

TEST(ConstantsABDF, VanishingOddMoments) {
  EXPECT_EQ(constants_ABDF(no_aux_gain()).A, 0.0);
  const auto k = constants_ABDF(normal_theory_moments(0.4, {.rho_xz = 0.6, .rho_yz = 0.3, .cv_x = 0.2, .cv_z = 0.5}));
  EXPECT_NEAR(k.A, 0.0, 1e-15);
  EXPECT_NEAR(k.D, 0.0, 1e-15);
}

TEST(ConstantsABDF, ZeroCorrelation) {
  EXPECT_EQ(error_code_of([] { (void)constants_ABDF(normal_theory_moments(0.0)); }), ErrorCode::ZeroCorrelation);
}

TEST(VarR, NormalTheoryIdentity) {
  for (double rho : {0.0, 0.3, 0.9136, -0.55}) {
    for (std::size_t n : {10u, 100u}) {
      const double expected = (1 - rho * rho) * (1 - rho * rho) / static_cast<double>(n);
      EXPECT_TRUE(test::close_rel(var_r(normal_theory_moments(rho), n), expected, 1e-12)) << rho;
    }
  }
}

TEST(VarR, HalvesWhenNDoubles) {
  const auto m = population_moments(test::fixture6());
  EXPECT_DOUBLE_EQ(var_r(m, 20), var_r(m, 10) / 2);
}

TEST(VarR, ReferenceValue) { EXPECT_NEAR(var_r(reference(), 10), 0.1823010320704, 1e-12); }

TEST(VarR, MissingD310WithoutInterpretation) {
  const auto m = moments_from_params(murthy_reference_parameters());
  EXPECT_EQ(error_code_of([&] { (void)var_r(m, 10); }), ErrorCode::MissingParameter);
}

TEST(OptimumConstants, ReferenceValuesMatchOracle) {
  const auto c = optimum_constants(reference());
  EXPECT_NEAR(c.alpha, -0.049048194523577450622, 1e-12);
  EXPECT_NEAR(c.beta, -0.025855340849145171014, 1e-12);
  EXPECT_NEAR(c.gamma, -0.080887774698844730216, 1e-12);
  EXPECT_NEAR(c.delta, -0.020075167331426564958, 1e-12);
}

TEST(OptimumConstants, ZeroNumerators) {
  const auto c = optimum_constants(no_aux_gain());
  EXPECT_EQ(c.alpha, 0.0);
  EXPECT_EQ(c.beta, 0.0);
  EXPECT_EQ(c.gamma, 0.0);
  EXPECT_EQ(c.delta, 0.0);
}

TEST(OptimumConstants, HBlockMatchesTBlock) {
  const auto m = reference();
  const auto c = optimum_constants(m);
  const auto h = optimum_constants_h(m);
  EXPECT_EQ(h.alpha, c.alpha);
  EXPECT_EQ(h.beta, c.beta);
}

TEST(OptimumConstants, SingularKurtosis) {
  auto doc = murthy_reference_parameters();
  doc["d_310"] = 0.1301;
  doc["d_004"] = 1.0 + doc["d_003"] * doc["d_003"];
  EXPECT_EQ(error_code_of([&] { (void)optimum_constants(moments_from_params(doc)); }),
            ErrorCode::SingularDenominator);
}

TEST(VarTClass, ZeroDerivativesGiveVarR) {
  const auto m = reference();
  EXPECT_DOUBLE_EQ(var_t_class(m, 10, 25, {0, 0, 0, 0}), var_r(m, 10));
}

TEST(VarTClass, MinimumAttainedAtOptimum) {
  const auto m = reference();
  const auto c = optimum_constants(m);
  const double at_opt = var_t_class(m, 10, 25, {c.alpha, c.beta, c.gamma, c.delta});
  EXPECT_NEAR(at_opt, min_var_td(m, 10, 25), 1e-12);
  EXPECT_NEAR(at_opt, 0.18172007187569105933, 1e-12);
  EXPECT_GT(var_t_class(m, 10, 25, {c.alpha + 0.01, c.beta + 0.01, c.gamma + 0.01, c.delta + 0.01}), at_opt);
  for (int i = 0; i < 4; ++i) {
    for (double step : {-0.01, 0.01}) {
      std::array<double, 4> t{c.alpha, c.beta, c.gamma, c.delta};
      t[static_cast<std::size_t>(i)] += step;
      EXPECT_GT(var_t_class(m, 10, 25, t), at_opt);
    }
  }
}

TEST(VarTClass, NumericalMinimizerMatchesClosedForm) {
  std::mt19937_64 rng(21);
  std::vector<MomentSet> sets{reference(), population_moments(test::fixture6())};
  for (int i = 0; i < 5; ++i) sets.push_back(population_moments(test::random_frame(rng, 120)));
  for (const auto& m : sets) {
    const auto f = [&](const std::array<double, 4>& t) { return var_t_class(m, 10, 25, t); };
    const auto t = test::newton_minimize(f, {0, 0, 0, 0});
    const auto c = optimum_constants(m);
    EXPECT_NEAR(t[0], c.alpha, 1e-6);
    EXPECT_NEAR(t[1], c.beta, 1e-6);
    EXPECT_NEAR(t[2], c.gamma, 1e-6);
    EXPECT_NEAR(t[3], c.delta, 1e-6);
    EXPECT_NEAR(f(t), min_var_td(m, 10, 25), 1e-9);
  }
}

TEST(VarTClass, ExactQuadratic) {
  // Third differences of a quadratic vanish along any line.
  const auto m = reference();
  const std::array<double, 4> dir{0.3, -0.7, 0.2, 0.5};
  auto g = [&](double s) {
    return var_t_class(m, 10, 25, {s * dir[0], s * dir[1], s * dir[2], s * dir[3]});
  };
  EXPECT_NEAR(g(3) - 3 * g(2) + 3 * g(1) - g(0), 0.0, 1e-12);
}

TEST(MinVarTd, NoAuxiliaryGain) {
  const auto m = no_aux_gain();
  EXPECT_EQ(min_var_td(m, 10, 25), var_r(m, 10));
  EXPECT_EQ(min_var_hd(m, 10, 25), var_r(m, 10));
  EXPECT_EQ(variance_gap(m, 10, 25).closed_form, 0.0);
}

TEST(MinVarTd, LargeFirstPhaseRemovesZTerm) {
  const auto m = reference();
  const double gap_small = variance_gap(m, 10, 1000).closed_form;
  const double gap_large = variance_gap(m, 10, 1000000).closed_form;
  EXPECT_NEAR(gap_large / gap_small, 1000.0 / 1000000.0, 1e-12);
  EXPECT_NEAR(min_var_hd(m, 10, 1000000000) - min_var_td(m, 10, 1000000000), 0.0, 1e-9);
}

TEST(MinVarHd, ReferenceValueAndCollapse) {
  const auto m = reference();
  EXPECT_NEAR(min_var_hd(m, 10, 25), 0.18195006609572644724, 1e-12);
  EXPECT_DOUBLE_EQ(min_var_hd(m, 10, 10), var_r(m, 10));
  EXPECT_DOUBLE_EQ(var_h_class(m, 10, 25, {0, 0}), var_r(m, 10));
  const auto h = optimum_constants_h(m);
  EXPECT_NEAR(var_h_class(m, 10, 25, {h.alpha, h.beta}), min_var_hd(m, 10, 25), 1e-12);
}

TEST(MinVarHd, HClassIsTClassWithoutZ) {
  const auto m = reference();
  EXPECT_NEAR(var_h_class(m, 10, 25, {0.2, -0.4}), var_t_class(m, 10, 25, {0.2, -0.4, 0, 0}), 1e-14);
}

TEST(VarianceGap, ClosedFormEqualsSubtraction) {
  std::mt19937_64 rng(22);
  std::vector<MomentSet> sets{reference()};
  for (int i = 0; i < 30; ++i) sets.push_back(population_moments(test::random_frame(rng, 200)));
  for (const auto& m : sets) {
    const auto g = variance_gap(m, 20, 60);
    EXPECT_GE(g.closed_form, 0.0);
    EXPECT_NEAR(g.closed_form, g.by_subtraction, 1e-12);
    EXPECT_LE(min_var_td(m, 20, 60), min_var_hd(m, 20, 60));
    EXPECT_LE(min_var_hd(m, 20, 60), var_r(m, 20));
  }
}

TEST(Sizes, InvalidDesigns) {
  const auto m = reference();
  EXPECT_EQ(error_code_of([&] { (void)min_var_td(m, 25, 10); }), ErrorCode::InvalidDesign);
  EXPECT_EQ(error_code_of([&] { (void)var_r(m, 1); }), ErrorCode::InvalidDesign);
}

TEST(Pre, Basics) {
  EXPECT_EQ(pre(0.3, 0.3), 100.0);
  EXPECT_DOUBLE_EQ(pre(0.2, 0.1), 200.0);
  EXPECT_EQ(error_code_of([] { (void)pre(0.2, 0.0); }), ErrorCode::NonPositiveVariance);
  EXPECT_EQ(error_code_of([] { (void)pre(0.2, -1.0); }), ErrorCode::NonPositiveVariance);
}

TEST(EfficiencyReport, ReferenceEmbedsPublishedValues) {
  const auto r = efficiency_report(reference(), 10, 25);
  ASSERT_TRUE(r.published.has_value());
  EXPECT_EQ(r.published->pre_r, 100.0);
  EXPECT_EQ(r.published->pre_hd, 129.147);
  EXPECT_EQ(r.published->pre_td, 305.441);
  EXPECT_NEAR(r.pre_hd, 100.19289136970629332, 1e-9);
  EXPECT_NEAR(r.pre_td, 100.3197006190413336, 1e-9);
  EXPECT_GE(r.pre_td, r.pre_hd);
  EXPECT_GE(r.pre_hd, 100.0);
  ASSERT_EQ(r.interpretation_notes.size(), 2u);
  EXPECT_NE(r.interpretation_notes[0].find("d_310"), std::string::npos);
  EXPECT_NE(r.interpretation_notes[1].find("129.147"), std::string::npos);
}

TEST(EfficiencyReport, OtherDesignsCarryNoPublishedValues) {
  EXPECT_FALSE(efficiency_report(reference(), 20, 50).published.has_value());
  EXPECT_FALSE(efficiency_report(population_moments(test::fixture6()), 3, 5).published.has_value());
}

TEST(EfficiencyReport, OrderingOnPopulations) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const auto r = efficiency_report(population_moments(test::random_frame(rng, 150)), 15, 45);
    EXPECT_LE(r.var_td_min, r.var_hd_min);
    EXPECT_LE(r.var_hd_min, r.var_r);
    EXPECT_GE(r.pre_hd, 100.0);
    EXPECT_GE(r.pre_td, r.pre_hd);
    EXPECT_NEAR(r.gap, r.var_hd_min - r.var_td_min, 1e-12);
  }
}

TEST(EfficiencyReport, NoZGainGivesEqualPre) {
  auto doc = moments_to_params(no_aux_gain());
  doc["d_210"] = 0.3;  // x block contributes, z block still does not
  const auto r = efficiency_report(moments_from_params(doc), 10, 30);
  EXPECT_GT(r.pre_hd, 100.0);
  EXPECT_EQ(r.pre_td, r.pre_hd);
}

}  // namespace
}  // namespace tpcorr
