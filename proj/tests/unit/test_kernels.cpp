#include <cmath>

#include <gtest/gtest.h>

#include "beurlab/errors.hpp"
#include "beurlab/kernels.hpp"
#include "generators.hpp"

using namespace beurlab;

namespace {

double scaled(std::pair<double, double> s) {
    return std::abs(s.first - s.second) / std::max({1.0, std::abs(s.first), std::abs(s.second)});
}

RealFunc weight(double gamma) {
    return kernel_function({KernelKind::exp_g, 0.0, gamma, 1.0});
}

}  // namespace

TEST(Kernels, ClosedFormsByHand) {
    EXPECT_DOUBLE_EQ(h_gamma(1.0, 1.0), std::exp(1.0) - 1.0);
    EXPECT_DOUBLE_EQ(h_gamma(-0.5, 2.0), 2.0 * (1.0 - std::exp(-1.0)));
    EXPECT_EQ(h_gamma(0.0, 3.5), 3.5);
    // K_{1,1}(x) = x and K_{1,2}(x) = x + x^2 / 2.
    EXPECT_DOUBLE_EQ(k_rho_gamma(1.0, 1.0, 4.0), 4.0);
    EXPECT_DOUBLE_EQ(k_rho_gamma(1.0, 2.0, 4.0), 12.0);
    EXPECT_DOUBLE_EQ(k_rho_gamma(2.0, 0.0, 1.5), std::log(4.0) / 2.0);
    EXPECT_EQ(k_rho_gamma(0.0, 3.0, 1.5), 1.5);
}

TEST(Kernels, EvalKernelScalesAndChecksDomain) {
    EXPECT_DOUBLE_EQ(eval_kernel({KernelKind::eta, 1.0, 0.0, 1.0}, 3.0), 4.0);
    EXPECT_DOUBLE_EQ(eval_kernel({KernelKind::eta, 1.0, 0.0, 2.5}, 3.0), 10.0);
    EXPECT_DOUBLE_EQ(eval_kernel({KernelKind::tau_eta, 1.0, 0.0, 1.0}, std::exp(1.0) - 1.0), 1.0);
    EXPECT_DOUBLE_EQ(eval_kernel({KernelKind::flow_rate_f, 1.0, 3.0, 1.0}, 1.0), 0.25);
    EXPECT_DOUBLE_EQ(eval_kernel({KernelKind::flow_rate_f, 0.0, 2.0, 1.0}, 1.0), std::exp(-2.0));
    EXPECT_DOUBLE_EQ(eval_kernel({KernelKind::exp_g, 1.0, 2.0, 1.0}, 1.0), 4.0);
    EXPECT_THROW(eval_kernel({KernelKind::K_rho_gamma, 1.0, 0.5, 1.0}, -1.0), DomainError);
    EXPECT_THROW(eval_kernel({KernelKind::eta, -1.0, 0.0, 1.0}, 1.0), BadParamError);
    EXPECT_NO_THROW(eval_kernel({KernelKind::H_gamma, 1.0, 0.5, 1.0}, -5.0));
}

TEST(Kernels, KindNamesRoundTrip) {
    for (auto k : {KernelKind::eta, KernelKind::H_gamma, KernelKind::K_rho_gamma, KernelKind::tau_eta,
                   KernelKind::flow_rate_f, KernelKind::exp_g})
        EXPECT_EQ(parse_kernel_kind(kernel_kind_name(k)), k);
    EXPECT_THROW(parse_kernel_kind("sinc"), UnknownFamilyError);
}

TEST(Kernels, GammaSwitchIsContinuous) {
    for (double x : {-2.0, -0.3, 0.7, 5.0}) {
        const double below = h_gamma(0.999 * kGammaSwitch, x);
        const double above = h_gamma(1.001 * kGammaSwitch, x);
        EXPECT_NEAR(below, above, 1e-6 * std::max(1.0, std::abs(x)));
        EXPECT_NEAR(h_gamma(1e-12, x), x, 1e-10);
    }
    for (double rho : {0.5, 1.0, 2.0})
        for (double x : {0.1, 1.0, 100.0}) {
            const double below = k_rho_gamma(rho, -0.999 * kGammaSwitch, x);
            const double above = k_rho_gamma(rho, -1.001 * kGammaSwitch, x);
            EXPECT_NEAR(below, above, 1e-6);
            EXPECT_NEAR(k_rho_gamma(rho, 1e-12, x), std::log1p(rho * x) / rho, 1e-10);
        }
}

TEST(Kernels, TauNumericMatchesClosedFormOnLogGrid) {
    for (double rho : {0.5, 1.0, 2.0}) {
        const RealFunc eta_fn = kernel_function({KernelKind::eta, rho, 0.0, 1.0});
        for (int i = 0; i <= 30; ++i) {
            const double x = std::pow(10.0, -2.0 + 5.0 * i / 30.0);
            const double closed = std::log1p(rho * x) / rho;
            EXPECT_NEAR(tau_numeric(eta_fn, x, 0.0), closed, 1e-8) << "rho=" << rho << " x=" << x;
        }
    }
}

TEST(Kernels, TauNumericSignAndSingularity) {
    const RealFunc one = RealFunc::constant(2.0);
    EXPECT_DOUBLE_EQ(tau_numeric(one, 1.0, 5.0), -2.0);
    EXPECT_EQ(tau_numeric(one, 3.0, 3.0), 0.0);
    const RealFunc vanishing([](double w) { return w - 1.0; });
    EXPECT_THROW(tau_numeric(vanishing, 2.0, 0.0), SingularIntegrandError);
}

TEST(FunctionalEquations, MissingRoleIsReported) {
    FunctionRoles roles{{"K", RealFunc::identity()}};
    EXPECT_THROW(fe_sides(EquationId::GFE, roles, 1.0, 1.0), MissingRoleError);
    EXPECT_THROW(fe_sides(EquationId::CBE, roles, 1.0, 1.0), MissingRoleError);
}

TEST(FunctionalEquations, EtaSolvesGolabSchinzel) {
    testgen::Gen g(31);
    for (double rho : {0.0, 0.5, 1.0}) {
        const RealFunc e = kernel_function({KernelKind::eta, rho, 0.0, 1.0});
        const FunctionRoles gs{{"h", e}};
        const FunctionRoles bfe{{"eta", e}};
        for (int i = 0; i < 200; ++i) {
            const double u = testgen::positive_element(g, rho == 0.0 ? 1.0 : rho);
            const double v = testgen::positive_element(g, rho == 0.0 ? 1.0 : rho);
            ASSERT_LT(scaled(fe_sides(EquationId::GS, gs, u, v)), 1e-12);
            ASSERT_LT(scaled(fe_sides(EquationId::BFE, bfe, u, v)), 1e-12);
        }
    }
}

TEST(FunctionalEquations, HGammaSolvesGoldie) {
    testgen::Gen g(32);
    for (double gamma : {-0.5, 0.5, 1.0, 2.0}) {
        const FunctionRoles roles{{"K", kernel_function({KernelKind::H_gamma, 0.0, gamma, 1.0})},
                                  {"g", weight(gamma)}};
        for (int i = 0; i < 500; ++i) {
            const double u = g.uniform(-2.0, 2.0);
            const double v = g.uniform(-2.0, 2.0);
            ASSERT_LT(scaled(fe_sides(EquationId::GFE, roles, u, v)), 1e-12);
            ASSERT_EQ(fe_residual(EquationId::GFI, roles, u, v), 0.0);
        }
    }
}

TEST(FunctionalEquations, KRhoGammaSolvesPexiderizedGoldieBeurling) {
    testgen::Gen g(33);
    for (double rho : {0.5, 1.0})
        for (double gamma : {-0.5, 0.5, 1.0, 2.0}) {
            const KernelSpec h{KernelKind::eta, rho, 0.0, 1.0};
            const KernelSpec gg{KernelKind::exp_g, rho, gamma, 1.0};
            const KernelSpec K = solve_gbe_kernel(h, gg, 1.0);
            ASSERT_EQ(K.kind, KernelKind::K_rho_gamma);
            const FunctionRoles roles{{"K", kernel_function(K)},
                                      {"kappa", kernel_function(K)},
                                      {"h", kernel_function(h)},
                                      {"g", kernel_function(gg)}};
            for (int i = 0; i < 500; ++i) {
                const double u = testgen::positive_element(g, rho);
                const double v = testgen::positive_element(g, rho);
                ASSERT_LT(scaled(fe_sides(EquationId::GBE_P, roles, u, v)), 1e-12) << rho << " " << gamma;
                ASSERT_LT(scaled(fe_sides(EquationId::GBE_GROUP, roles, u, v)), 1e-12);
            }
        }
}

TEST(FunctionalEquations, FlowRateSolvesCauchyBeurling) {
    testgen::Gen g(34);
    for (double rho : {0.5, 1.0})
        for (double gamma : {-0.5, 0.5, 1.0, 2.0}) {
            const FunctionRoles roles{{"f", kernel_function({KernelKind::flow_rate_f, rho, gamma, 1.0})},
                                      {"h", kernel_function({KernelKind::eta, rho, 0.0, 1.0})}};
            for (int i = 0; i < 500; ++i) {
                const double u = testgen::positive_element(g, rho);
                const double v = testgen::positive_element(g, rho);
                ASSERT_LT(scaled(fe_sides(EquationId::CBE, roles, u, v)), 1e-12);
            }
        }
}

TEST(FunctionalEquations, ScaledSolutionsStaySolutions) {
    // c * K solves the linear equations for any c.
    testgen::Gen g(35);
    for (double c : {-3.0, 0.25, 7.0}) {
        const FunctionRoles roles{{"K", kernel_function({KernelKind::H_gamma, 0.0, 0.5, c})}, {"g", weight(0.5)}};
        for (int i = 0; i < 100; ++i)
            ASSERT_LT(scaled(fe_sides(EquationId::GFE, roles, g.uniform(-2, 2), g.uniform(-2, 2))), 1e-12);
    }
}

TEST(FunctionalEquations, InequalitySlackDetectsStrictSupersolutions) {
    const double gamma = 0.5;
    const RealFunc base = kernel_function({KernelKind::H_gamma, 0.0, gamma, 1.0});
    const RealFunc shifted_down([base](double x) { return base(x) - 1.0; });
    const RealFunc shifted_up([base](double x) { return base(x) + 1.0; });
    // K = H - 1: lhs - rhs = e^{gamma u}.
    EXPECT_NEAR(fe_residual(EquationId::GFI, {{"K", shifted_down}, {"g", weight(gamma)}}, 1.0, 0.5),
                std::exp(gamma), 1e-12);
    EXPECT_EQ(fe_residual(EquationId::GFI, {{"K", shifted_up}, {"g", weight(gamma)}}, 1.0, 0.5), 0.0);
}

TEST(FunctionalEquations, SolverPairsAndRejections) {
    const KernelSpec at_zero = solve_gbe_kernel({KernelKind::eta, 0.0, 0.0, 1.0}, {KernelKind::exp_g, 0.0, 2.0, 1.0}, 3.0);
    EXPECT_EQ(at_zero.kind, KernelKind::H_gamma);
    EXPECT_EQ(at_zero.gamma, 2.0);
    EXPECT_EQ(at_zero.c, 3.0);
    EXPECT_THROW(solve_gbe_kernel({KernelKind::eta, 1.0, 0.0, 1.0}, {KernelKind::exp_g, 0.5, 2.0, 1.0}, 1.0),
                 UnsupportedPairError);
    EXPECT_THROW(solve_gbe_kernel({KernelKind::H_gamma, 1.0, 0.0, 1.0}, {KernelKind::exp_g, 1.0, 2.0, 1.0}, 1.0),
                 UnsupportedPairError);
    EXPECT_THROW(solve_gbe_kernel({KernelKind::eta, 1.0, 0.0, 2.0}, {KernelKind::exp_g, 1.0, 2.0, 1.0}, 1.0),
                 UnsupportedPairError);
}

TEST(FunctionalEquations, KappaEqualToKIsForcedByTheEquation) {
    // Putting v = 0 in GBE-P gives K(u) = K(0) + kappa(u) g(0) = kappa(u).
    const KernelSpec K{KernelKind::K_rho_gamma, 1.0, 0.5, 1.0};
    const RealFunc k = kernel_function(K);
    const FunctionRoles roles{{"K", k},
                              {"kappa", k},
                              {"h", kernel_function({KernelKind::eta, 1.0, 0.0, 1.0})},
                              {"g", kernel_function({KernelKind::exp_g, 1.0, 0.5, 1.0})}};
    testgen::Gen g(36);
    for (int i = 0; i < 100; ++i) {
        const double u = testgen::positive_element(g, 1.0);
        const auto [lhs, rhs] = fe_sides(EquationId::GBE_P, roles, u, 0.0);
        ASSERT_NEAR(lhs, k(u), 1e-14 * std::max(1.0, std::abs(lhs)));
        ASSERT_NEAR(rhs, k(u), 1e-14 * std::max(1.0, std::abs(rhs)));
    }
}
