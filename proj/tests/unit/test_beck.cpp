#include <cmath>

#include <gtest/gtest.h>

#include "beurlab/beck.hpp"
#include "beurlab/errors.hpp"
#include "generators.hpp"

using namespace beurlab;

namespace {

const RealFunc kLog([](double x) { return std::log(x); }, Interval::open_above(0.0));

}  // namespace

TEST(BeckChain, DoublingUnderLinearPhi) {
    const auto c = beck_sequence(make_function("linear", {1.0}), 1.0, 1.0, 10);
    ASSERT_EQ(c.values.size(), 11U);
    for (int k = 0; k <= 10; ++k) EXPECT_EQ(c.values[k], std::ldexp(1.0, k));
    EXPECT_EQ(c.growth, 1024.0);
    EXPECT_FALSE(c.divergent);
    EXPECT_TRUE(beck_sequence(make_function("linear", {1.0}), 1.0, 1.0, 30).divergent);
    EXPECT_THROW(beck_sequence(make_function("linear", {1.0}), 1.0, 0.0, 3), BadParamError);
    EXPECT_THROW(beck_sequence(make_function("linear", {1.0}), -1.0, 1.0, 3), DomainError);
}

TEST(BeckChain, GpSequenceClosedForm) {
    // u_{k+1} = 2 + 2 u_k from u_0 = 2 gives 2^{k+2} - 2.
    const auto s = gp_sequence(make_function("linear", {1.0}), 2.0, 6);
    ASSERT_EQ(s.size(), 7U);
    for (int k = 0; k <= 6; ++k) EXPECT_EQ(s[k], std::ldexp(1.0, k + 2) - 2.0);
}

TEST(BeckBounds, ConstantsByHand) {
    const auto b = prop11_bounds(1.0, 2.0, 0.5);
    EXPECT_DOUBLE_EQ(b.eta_a(), 3.0);
    EXPECT_DOUBLE_EQ(b.delta(), 1.0 / 3.0);
    EXPECT_NEAR(b.C_minus(), std::log(4.0 / 3.0), 1e-15);
    EXPECT_NEAR(b.C_plus(), std::log(8.0 / 3.0), 1e-15);
    EXPECT_NEAR(b.C_plus_safe(), std::log(4.0), 1e-15);
    EXPECT_DOUBLE_EQ(b.lower(1), 3.0);
    EXPECT_DOUBLE_EQ(b.upper(1), 3.0);
    EXPECT_DOUBLE_EQ(b.lower(2), 7.0);
    EXPECT_DOUBLE_EQ(b.upper(2), 11.0);
    EXPECT_THROW(prop11_bounds(0.0, 2.0, 0.5), BadParamError);
    EXPECT_THROW(prop11_bounds(1.0, 1.0, 0.5), BadParamError);
    EXPECT_THROW(prop11_bounds(1.0, 2.0, 1.0), BadParamError);
}

TEST(BeckBounds, SandwichHoldsForLinearPhi) {
    const auto b = prop11_bounds(1.0, 2.0, 0.5);
    const auto rows = prop11_sandwich(b, make_function("linear", {1.0}), 100.0, 30);
    ASSERT_EQ(rows.size(), 30U);
    for (const auto& r : rows) {
        EXPECT_NEAR(r.value, std::pow(3.0, r.m), 1e-12 * std::pow(3.0, r.m));
        EXPECT_NEAR(r.root_ratio, 1.0, 1e-12);
        EXPECT_TRUE(r.inside) << r.m;
    }
}

TEST(BeckBounds, LogSandwichRowsAreExact) {
    const auto b = prop11_bounds(1.0, 2.0, 0.5);
    const auto rows = prop11_log_sandwich(b, make_function("linear", {1.0}), 100.0, {2.0, 7.4, 30.0});
    ASSERT_EQ(rows.size(), 3U);
    EXPECT_EQ(rows[0].m, 1);  // 2 <= u < 8
    EXPECT_TRUE(rows[0].holds);
    // log 7.4 = 2.0015 exceeds 2 C_+ = 1.9617 with these constants.
    EXPECT_EQ(rows[1].m, 1);
    EXPECT_FALSE(rows[1].holds);
    EXPECT_EQ(rows[2].m, 3);  // iterates 2, 8, 26, 80
    EXPECT_NEAR(rows[2].upper, 4.0 * std::log(8.0 / 3.0), 1e-14);
    EXPECT_THROW(prop11_log_sandwich(b, make_function("linear", {1.0}), 100.0, {1.5}), BadParamError);
}

TEST(Recurrence, SmallCaseByHand) {
    // 2 v_{n+1} - v_n = 3^n, v_1 = 1: v_2 = 2, v_3 = 5.5.
    EXPECT_DOUBLE_EQ(solve_recurrence(2.0, 3.0, 1.0, 1), 1.0);
    EXPECT_NEAR(solve_recurrence(2.0, 3.0, 1.0, 2), 2.0, 1e-14);
    EXPECT_NEAR(solve_recurrence(2.0, 3.0, 1.0, 3), 5.5, 1e-14);
    EXPECT_DOUBLE_EQ(iterate_recurrence(2.0, 3.0, 1.0, 3), 5.5);
    EXPECT_THROW(solve_recurrence(2.0, 0.5, 1.0, 3), ResonanceError);
    EXPECT_THROW(solve_recurrence(0.0, 0.5, 1.0, 3), BadParamError);
    EXPECT_THROW(solve_recurrence(2.0, 3.0, 1.0, 0), BadParamError);
}

TEST(RecurrenceProperty, ClosedFormMatchesIteration) {
    testgen::Gen g(71);
    int checked = 0;
    while (checked < 200) {
        const double b = g.uniform(0.5, 3.0);
        const double r = g.uniform(0.5, 2.0);
        if (std::abs(b * r - 1.0) <= 0.1) continue;
        const double v1 = g.uniform(-2.0, 2.0);
        const int n = g.integer(1, 50);
        const double direct = iterate_recurrence(b, r, v1, n);
        ASSERT_NEAR(solve_recurrence(b, r, v1, n), direct, 1e-10 * std::max(1.0, std::abs(direct)))
            << b << " " << r << " " << v1 << " " << n;
        ++checked;
    }
}

TEST(BeckIncrement, LogarithmHasConstantLog3OverLog2) {
    const std::vector<double> u_grid{2.0, 4.0, 16.0, 256.0};
    const auto rep = theorem10_check(kLog, make_function("linear", {1.0}), 1.0, {1e2, 1e4, 1e6}, u_grid);
    EXPECT_NEAR(rep.C_hat, std::log(3.0) / std::log(2.0), 1e-12);
    EXPECT_TRUE(rep.bounded);
    ASSERT_TRUE(rep.reference_C.has_value());
    EXPECT_NEAR(*rep.reference_C, 1.0 / std::log(4.0 / 3.0), 1e-12);
    EXPECT_EQ(rep.rows.size(), 12U);
    EXPECT_THROW(theorem10_check(kLog, make_function("linear", {1.0}), 1.0, {1e2}, {0.5}), BadParamError);
}

TEST(Representation, ForwardRatiosTendToC) {
    LinearPlusIntegral F{1.0, 2.0, RealFunc([](double x) { return 1.0 / x; }, Interval::open_above(0.0))};
    EXPECT_NEAR(F(std::exp(1.0)), 2.0 + 2.0 * std::exp(1.0), 1e-12);
    const auto r = represent_forward(F, make_function("linear", {1.0}), {1e2, 1e4, 1e6}, {0.5, 1.0, 2.0});
    EXPECT_TRUE(r.passed);
    // (c u x + log(1 + u)) / (u x) - c at x = 1e6, worst at u = 0.5.
    EXPECT_NEAR(r.max_deviation_last, std::log(1.5) / 0.5e6, 1e-12);
}

TEST(Representation, ReverseReconstructsTheFunction) {
    const RealFunc F([](double x) { return 2.0 * x + std::log(x); }, Interval::open_above(0.0));
    const auto diff = represent_reverse(F, make_function("linear", {1.0}), std::nullopt, 10.0, {1e1, 1e2, 1e4, 1e6});
    EXPECT_TRUE(diff.c_fitted);
    EXPECT_NEAR(diff.c, 2.0, 1e-6);
    EXPECT_LT(diff.max_rel_error, 1e-3);
    const auto chain = represent_reverse(F, make_function("linear", {1.0}), 2.0, 10.0, {1e1, 1e2, 1e4, 1e6}, 0.01,
                                         ReconstructionMode::beck_chain);
    EXPECT_FALSE(chain.c_fitted);
    EXPECT_LT(chain.max_rel_error, 1e-3);
    EXPECT_THROW(represent_reverse(F, make_function("linear", {1.0}), 2.0, 10.0, {5.0}), BadParamError);
}

TEST(Riesz, LinearUAgainstQuadraticWeight) {
    // phi = x, base 1: lambda = x^2 and the mean of U = y is (2/3)(x^3 - 1)/x^2.
    for (double x : {10.0, 100.0}) {
        const auto r = riesz_mean(RealFunc::identity(), make_function("linear", {1.0}), x, 1.0);
        const double expected = 2.0 / 3.0 * (x * x * x - 1.0) / (x * x);
        EXPECT_NEAR(r.mean, expected, 1e-7 * expected);
        EXPECT_NEAR(r.lambda_ratio, 1.0 / (x * x), 1e-12);
        EXPECT_NEAR(r.moving_average, 1.0, 1e-12);
    }
    EXPECT_THROW(riesz_mean(RealFunc::identity(), make_function("linear", {1.0}), 1.0, 1.0), BadParamError);
}
