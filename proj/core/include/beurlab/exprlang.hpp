#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "beurlab/real_func.hpp"

namespace beurlab {

enum class TokenKind { number, identifier, op, lparen, rparen, comma, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    std::size_t position = 0;
    double value = 0.0;  ///< set for numbers
};

/// Splits src into tokens; the last token is always `end`. Throws LexError.
std::vector<Token> tokenize(const std::string& src);

struct ExprNode {
    enum class Kind { number, variable, param, negate, binary, call };

    Kind kind = Kind::number;
    double value = 0.0;         ///< number
    char op = 0;                ///< binary: + - * / ^
    std::string name;           ///< param or function name
    std::vector<ExprNode> args; ///< operands or call arguments
    std::size_t position = 0;

    static ExprNode number(double v);
    static ExprNode variable();
    static ExprNode param(std::string name);
    static ExprNode negate(ExprNode operand);
    static ExprNode binary(char op, ExprNode lhs, ExprNode rhs);
    static ExprNode call(std::string name, std::vector<ExprNode> args);
};

using ParamMap = std::map<std::string, double>;

/// Arity of a built-in function, or -1 when the name is not a function.
int function_arity(const std::string& name);
const std::vector<std::string>& function_names();

/// Throws ParseError with the offending position and the expected tokens.
ExprNode parse(const std::vector<Token>& tokens);
ExprNode parse(const std::string& src);

/// Canonical text with the fewest parentheses that preserve the tree.
std::string pretty_print(const ExprNode& node);

/// Throws DomainError or UnboundParamError.
double eval_expr(const ExprNode& node, double x, const ParamMap& params);

/// Names of the free parameters referenced by the tree, including the
/// implicit rho/gamma of the kernel functions.
std::vector<std::string> free_params(const ExprNode& node);

/// A parsed expression with its parameters bound.
class Expression {
public:
    Expression(const std::string& source, ParamMap params = {});

    double operator()(double x) const;
    const std::string& source() const { return source_; }
    const ExprNode& tree() const { return *tree_; }
    const ParamMap& params() const { return params_; }
    RealFunc to_func(Interval domain = Interval::real_line()) const;

private:
    std::string source_;
    std::shared_ptr<const ExprNode> tree_;
    ParamMap params_;
};

}  // namespace beurlab
