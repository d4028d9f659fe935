#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "beurlab/errors.hpp"
#include "beurlab/exprlang.hpp"
#include "generators.hpp"

using namespace beurlab;

namespace {

const ParamMap kBound{{"rho", 0.5}, {"gamma", 0.75}};

double eval_at(const std::string& src, double x, const ParamMap& params = kBound) {
    return eval_expr(parse(src), x, params);
}

// Inputs that must be rejected with a position inside (or at the end of) the text.
const std::vector<std::string> kMalformed{
    "0..5", "1e", "1e+", "x $ 2", "x # 1", "", "   ", "(", ")", "x +", "* x", "x 2", "sqrt", "sqrt(", "sqrt()",
    "sqrt(x, x)", "pow(x)", "H(1, x)", "min(x,)", "foo(x)", "((x)", "(x))", "x ^", "1.2.3", "x,2", "2..", "--",
    "indicator(1)", "log(x) log(x)", "3 (x)", "x^^2", "@", "x\t+\t\x01", "1e999"};

}  // namespace

TEST(Tokenizer, SegmentsTheSample) {
    const auto toks = tokenize("0.5*x + sqrt(x)");
    std::vector<std::string> texts;
    for (const auto& t : toks) texts.push_back(t.text);
    ASSERT_EQ(toks.size(), 9U);
    EXPECT_EQ(toks[0].kind, TokenKind::number);
    EXPECT_EQ(toks[0].value, 0.5);
    EXPECT_EQ(toks[1].kind, TokenKind::op);
    EXPECT_EQ(toks[2].kind, TokenKind::identifier);
    EXPECT_EQ(toks[4].text, "sqrt");
    EXPECT_EQ(toks[5].kind, TokenKind::lparen);
    EXPECT_EQ(toks[7].kind, TokenKind::rparen);
    EXPECT_EQ(toks.back().kind, TokenKind::end);
    for (std::size_t i = 1; i + 1 < toks.size(); ++i) EXPECT_GT(toks[i].position, toks[i - 1].position);
}

TEST(Tokenizer, NumberForms) {
    const auto t = tokenize("1e3");
    ASSERT_EQ(t.size(), 2U);
    EXPECT_EQ(t[0].value, 1000.0);
    EXPECT_EQ(tokenize("2.5E-2")[0].value, 0.025);
    EXPECT_EQ(tokenize(".5")[0].value, 0.5);
    EXPECT_EQ(tokenize("7.")[0].value, 7.0);
}

TEST(Tokenizer, DoubleDotIsPositioned) {
    try {
        tokenize("0..5");
        FAIL() << "expected LexError";
    } catch (const LexError& e) {
        EXPECT_EQ(e.position(), 2U);
    }
    try {
        tokenize("x + $");
        FAIL() << "expected LexError";
    } catch (const LexError& e) {
        EXPECT_EQ(e.position(), 4U);
    }
}

TEST(Parser, PrecedenceAndAssociativity) {
    EXPECT_EQ(eval_at("x+2*x", 5.0), 15.0);
    EXPECT_EQ(eval_at("-x^2", 3.0), -9.0);
    EXPECT_EQ(eval_at("2^3^2", 0.0), 512.0);
    EXPECT_EQ(eval_at("8/4/2", 0.0), 1.0);
    EXPECT_EQ(eval_at("1-2-3", 0.0), -4.0);
    EXPECT_EQ(eval_at("2^-1", 0.0), 0.5);
    EXPECT_EQ(eval_at("(x+1)*(x-1)", 3.0), 8.0);
    EXPECT_EQ(pretty_print(parse("x+2*x")), "x + 2*x");
}

TEST(Parser, ArityErrorsCarryPositionAndExpectation) {
    try {
        parse("H(1, x)");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 3U);
        EXPECT_FALSE(e.expected().empty());
    }
    try {
        parse("x +");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 3U);
    }
}

TEST(Evaluator, ExamplesAndErrors) {
    EXPECT_EQ(eval_at("0.5*x+sqrt(x)", 4.0), 4.0);
    EXPECT_EQ(eval_at("eta(x)", 3.0, {{"rho", 1.0}}), 4.0);
    EXPECT_THROW(eval_at("log(x)", 0.0), DomainError);
    EXPECT_THROW(eval_at("sqrt(x)", -1.0), DomainError);
    EXPECT_THROW(eval_at("x/0", 1.0), DomainError);
    EXPECT_THROW(eval_at("Krg(x)", -3.0), DomainError);
    EXPECT_THROW(eval_at("eta(x)", 1.0, {}), UnboundParamError);
    EXPECT_THROW(eval_at("k*x", 1.0), UnboundParamError);
    EXPECT_EQ(eval_at("k*x", 2.0, {{"k", 3.0}}), 6.0);
    EXPECT_EQ(eval_at("indicator(0, 1)", 1.0), 1.0);
    EXPECT_EQ(eval_at("indicator(0, 1)", 1.5), 0.0);
    EXPECT_NEAR(eval_at("cos(pi)", 0.0), -1.0, 1e-15);
}

TEST(Evaluator, FreeParamsIncludeKernelIndices) {
    const auto names = free_params(parse("a*x + H(x) + eta(x)"));
    EXPECT_EQ(names, (std::vector<std::string>{"a", "gamma", "rho"}));
    EXPECT_TRUE(free_params(parse("pi*x")).empty());
}

TEST(Expression, BindsParamsAndBuildsFunctions) {
    const Expression e("c*log(x)", {{"c", 2.0}});
    EXPECT_NEAR(e(std::exp(1.5)), 3.0, 1e-15);
    const RealFunc f = e.to_func(Interval::open_above(0.0));
    EXPECT_THROW(f(-1.0), DomainError);
    EXPECT_THROW(Expression("c*x"), UnboundParamError);
    EXPECT_THROW(Expression("x +"), ParseError);
}

TEST(ExprProperty, PrettyPrintIsAFixedPoint) {
    testgen::Gen g(81);
    for (int i = 0; i < 200; ++i) {
        const auto expr = testgen::random_expression(g, 5);
        const std::string once = pretty_print(parse(expr.source));
        const std::string twice = pretty_print(parse(once));
        ASSERT_EQ(once, twice) << expr.source;
    }
}

TEST(ExprProperty, PrettyPrintPreservesValues) {
    testgen::Gen g(82);
    for (int i = 0; i < 200; ++i) {
        const auto expr = testgen::random_expression(g, 4);
        const ExprNode tree = parse(expr.source);
        const ExprNode again = parse(pretty_print(tree));
        const double x = g.uniform(-3.0, 3.0);
        double a = 0.0;
        try {
            a = eval_expr(tree, x, kBound);
        } catch (const DomainError&) {
            continue;
        }
        ASSERT_EQ(a, eval_expr(again, x, kBound)) << expr.source;
    }
}

TEST(ExprProperty, AgreesWithHandBuiltReference) {
    testgen::Gen g(83);
    int checked = 0;
    while (checked < 100) {
        const auto expr = testgen::random_expression(g, 4);
        const double x = g.uniform(-3.0, 3.0);
        const double ref = expr.eval(x);
        if (!std::isfinite(ref)) continue;
        double got = 0.0;
        try {
            got = eval_expr(parse(expr.source), x, kBound);
        } catch (const DomainError&) {
            continue;
        }
        ASSERT_LE(std::abs(got - ref), 1e-14 * std::max(1.0, std::abs(ref))) << expr.source << " at x=" << x;
        ++checked;
    }
}

TEST(ExprProperty, MalformedCorpusYieldsPositionedErrors) {
    for (const auto& src : kMalformed) {
        bool positioned = false;
        try {
            parse(src);
        } catch (const LexError& e) {
            positioned = e.position() <= src.size();
        } catch (const ParseError& e) {
            positioned = e.position() <= src.size();
        }
        EXPECT_TRUE(positioned) << "'" << src << "'";
    }
}

TEST(ExprProperty, RandomBytesNeverCrash) {
    testgen::Gen g(84);
    const std::string alphabet = "x0123456789.eE+-*/^(),  sqrtlogexpinHKrgabcd$#";
    for (int i = 0; i < 2000; ++i) {
        std::string src;
        const int len = g.integer(0, 16);
        for (int k = 0; k < len; ++k) src += alphabet[static_cast<std::size_t>(g.integer(0, static_cast<int>(alphabet.size()) - 1))];
        try {
            const ExprNode tree = parse(src);
            ASSERT_EQ(pretty_print(parse(pretty_print(tree))), pretty_print(tree)) << src;
        } catch (const LexError& e) {
            ASSERT_LE(e.position(), src.size()) << src;
        } catch (const ParseError& e) {
            ASSERT_LE(e.position(), src.size()) << src;
        }
    }
}
