#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "beurlab/errors.hpp"
#include "beurlab/quadrature.hpp"
#include "beurlab/real_func.hpp"
#include "generators.hpp"

using namespace beurlab;

TEST(Quadrature, PolynomialsAreExact) {
    // GK15 integrates degree <= 22 exactly on one panel.
    const auto r = integrate([](double x) { return std::pow(x, 10) - 3 * x * x; }, -1.0, 2.0);
    EXPECT_NEAR(r.value, (std::pow(2.0, 11) + 1.0) / 11.0 - 9.0, 1e-12);
    EXPECT_GT(r.evaluations, 0);
}

TEST(Quadrature, ReversedLimitsNegate) {
    auto f = [](double x) { return std::exp(x); };
    EXPECT_NEAR(integrate(f, 0.0, 1.0).value, std::exp(1.0) - 1.0, 1e-13);
    EXPECT_NEAR(integrate(f, 1.0, 0.0).value, 1.0 - std::exp(1.0), 1e-13);
    EXPECT_EQ(integrate(f, 2.0, 2.0).value, 0.0);
}

TEST(Quadrature, OscillatoryAndPeaked) {
    EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, 20 * std::numbers::pi).value, 0.0, 1e-10);
    // Runge function: integral of 1/(1 + 25x^2) over [-1,1] is (2/5) atan 5.
    EXPECT_NEAR(integrate([](double x) { return 1.0 / (1.0 + 25 * x * x); }, -1.0, 1.0).value,
                0.4 * std::atan(5.0), 1e-12);
}

TEST(Quadrature, BreakpointsHandleKinks) {
    auto f = [](double x) { return std::abs(x - 0.3); };
    const auto r = integrate(f, std::vector<double>{0.0, 0.3, 1.0});
    EXPECT_NEAR(r.value, 0.5 * 0.09 + 0.5 * 0.49, 1e-14);
}

TEST(Quadrature, LogVariableOverManyDecades) {
    const auto r = integrate_log([](double w) { return 1.0 / w; }, 1e-3, 1e9);
    EXPECT_NEAR(r.value, std::log(1e12), 1e-10);
    const auto s = integrate_log([](double w) { return 1.0 / std::sqrt(w); }, 1.0, 1e8);
    EXPECT_NEAR(s.value, 2.0 * (1e4 - 1.0), 1e-7);
}

TEST(Quadrature, NonIntegrableSingularityFails) {
    QuadratureOptions opts;
    opts.max_intervals = 200;
    EXPECT_THROW(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, opts), NonconvergenceError);
}

TEST(QuadratureProperty, AdditiveOverSplitPoints) {
    testgen::Gen g(41);
    auto f = [](double x) { return std::exp(std::sin(3 * x)) + x * x; };
    for (int i = 0; i < 100; ++i) {
        const double a = g.uniform(-5, 5);
        const double b = g.uniform(-5, 5);
        const double c = g.uniform(-5, 5);
        const double whole = integrate(f, a, c).value;
        const double split = integrate(f, a, b).value + integrate(f, b, c).value;
        ASSERT_NEAR(whole, split, 1e-9 * std::max(1.0, std::abs(whole)));
    }
}

TEST(RealFuncDomain, OutsideDomainThrows) {
    const RealFunc f([](double x) { return std::log(x); }, Interval::open_above(0.0), "log");
    EXPECT_THROW(f(0.0), DomainError);
    EXPECT_THROW(f(-1.0), DomainError);
    EXPECT_DOUBLE_EQ(f(std::exp(2.0)), 2.0);
    const RealFunc nan_fn([](double) { return std::nan(""); });
    EXPECT_THROW(nan_fn(1.0), DomainError);
    EXPECT_TRUE(Interval::closed(0, 1).contains(1.0));
    EXPECT_FALSE(Interval::open_above(0).contains(0.0));
    const RealFunc sum = linear_combination(2.0, f, -1.0, RealFunc::identity());
    EXPECT_DOUBLE_EQ(sum(1.0), -1.0);
    EXPECT_THROW(sum(-1.0), DomainError);
}
