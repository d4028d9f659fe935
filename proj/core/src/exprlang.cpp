#include "beurlab/exprlang.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "beurlab/errors.hpp"
#include "beurlab/kernels.hpp"

namespace beurlab {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

constexpr int kMaxDepth = 200;

}  // namespace

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(src[i + 1]))) {
            while (i < n && is_digit(src[i])) ++i;
            if (i < n && src[i] == '.') {
                ++i;
                while (i < n && is_digit(src[i])) ++i;
            }
            if (i < n && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < n && is_digit(src[j])) {
                    while (j < n && is_digit(src[j])) ++j;
                    i = j;
                } else {
                    throw LexError("malformed exponent", i);
                }
            }
            if (i < n && (src[i] == '.' || is_digit(src[i]))) throw LexError("malformed number", i);
            Token t{TokenKind::number, src.substr(start, i - start), start, 0.0};
            t.value = std::strtod(t.text.c_str(), nullptr);
            if (!std::isfinite(t.value)) throw LexError("number out of range", start);
            out.push_back(std::move(t));
            continue;
        }
        if (is_ident_start(c)) {
            while (i < n && is_ident_char(src[i])) ++i;
            out.push_back({TokenKind::identifier, src.substr(start, i - start), start, 0.0});
            continue;
        }
        switch (c) {
            case '+':
            case '-':
            case '*':
            case '/':
            case '^': out.push_back({TokenKind::op, std::string(1, c), start, 0.0}); break;
            case '(': out.push_back({TokenKind::lparen, "(", start, 0.0}); break;
            case ')': out.push_back({TokenKind::rparen, ")", start, 0.0}); break;
            case ',': out.push_back({TokenKind::comma, ",", start, 0.0}); break;
            default: {
                std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "\\x" + std::to_string(static_cast<unsigned char>(c));
                throw LexError("illegal character '" + shown + "'", start);
            }
        }
        ++i;
    }
    out.push_back({TokenKind::end, "", n, 0.0});
    return out;
}

ExprNode ExprNode::number(double v) {
    ExprNode e;
    e.kind = Kind::number;
    e.value = v;
    return e;
}

ExprNode ExprNode::variable() {
    ExprNode e;
    e.kind = Kind::variable;
    return e;
}

ExprNode ExprNode::param(std::string name) {
    ExprNode e;
    e.kind = Kind::param;
    e.name = std::move(name);
    return e;
}

ExprNode ExprNode::negate(ExprNode operand) {
    ExprNode e;
    e.kind = Kind::negate;
    e.args.push_back(std::move(operand));
    return e;
}

ExprNode ExprNode::binary(char op, ExprNode lhs, ExprNode rhs) {
    ExprNode e;
    e.kind = Kind::binary;
    e.op = op;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

ExprNode ExprNode::call(std::string name, std::vector<ExprNode> args) {
    ExprNode e;
    e.kind = Kind::call;
    e.name = std::move(name);
    e.args = std::move(args);
    return e;
}

const std::vector<std::string>& function_names() {
    static const std::vector<std::string> names{"sqrt", "log", "exp", "sin", "cos", "abs", "pow",
                                                "min", "max", "indicator", "eta", "H", "Krg"};
    return names;
}

int function_arity(const std::string& name) {
    static const std::map<std::string, int> arity{
        {"sqrt", 1}, {"log", 1}, {"exp", 1}, {"sin", 1}, {"cos", 1}, {"abs", 1}, {"eta", 1},
        {"H", 1},    {"Krg", 1}, {"pow", 2}, {"min", 2}, {"max", 2}, {"indicator", 2}};
    auto it = arity.find(name);
    return it == arity.end() ? -1 : it->second;
}

namespace {

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

    ExprNode run() {
        if (toks_.empty() || toks_.back().kind != TokenKind::end)
            throw ParseError("token stream not terminated", 0, {"end of input"});
        ExprNode e = expr();
        if (peek().kind != TokenKind::end)
            throw ParseError("unexpected '" + peek().text + "'", peek().position,
                             {"+", "-", "*", "/", "^", "end of input"});
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool at_op(char c) const { return peek().kind == TokenKind::op && peek().text[0] == c; }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxDepth)
                throw ParseError("expression nested too deeply", p_.peek().position, {});
        }
        ~DepthGuard() { --p_.depth_; }
        Parser& p_;
    };

    ExprNode expr() {
        DepthGuard g(*this);
        ExprNode lhs = term();
        while (at_op('+') || at_op('-')) {
            const Token& t = next();
            ExprNode rhs = term();
            lhs = ExprNode::binary(t.text[0], std::move(lhs), std::move(rhs));
            lhs.position = t.position;
        }
        return lhs;
    }

    ExprNode term() {
        ExprNode lhs = unary();
        while (at_op('*') || at_op('/')) {
            const Token& t = next();
            ExprNode rhs = unary();
            lhs = ExprNode::binary(t.text[0], std::move(lhs), std::move(rhs));
            lhs.position = t.position;
        }
        return lhs;
    }

    ExprNode unary() {
        DepthGuard g(*this);
        if (at_op('-')) {
            const Token& t = next();
            ExprNode e = ExprNode::negate(unary());
            e.position = t.position;
            return e;
        }
        return power();
    }

    ExprNode power() {
        ExprNode base = primary();
        if (at_op('^')) {
            const Token& t = next();
            ExprNode e = ExprNode::binary('^', std::move(base), unary());
            e.position = t.position;
            return e;
        }
        return base;
    }

    ExprNode primary() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::number: {
                next();
                ExprNode e = ExprNode::number(t.value);
                e.position = t.position;
                return e;
            }
            case TokenKind::identifier: return identifier();
            case TokenKind::lparen: {
                next();
                ExprNode e = expr();
                expect_rparen();
                return e;
            }
            default: break;
        }
        std::string what = t.kind == TokenKind::end ? "unexpected end of input" : "unexpected '" + t.text + "'";
        throw ParseError(what, t.position, {"number", "identifier", "(", "-"});
    }

    ExprNode identifier() {
        const Token& t = next();
        const int arity = function_arity(t.text);
        if (arity < 0) {
            if (peek().kind == TokenKind::lparen)
                throw ParseError("unknown function '" + t.text + "'", t.position, function_names());
            ExprNode e;
            if (t.text == "x")
                e = ExprNode::variable();
            else if (t.text == "pi")
                e = ExprNode::number(M_PI);
            else
                e = ExprNode::param(t.text);
            e.position = t.position;
            return e;
        }
        if (peek().kind != TokenKind::lparen)
            throw ParseError("function '" + t.text + "' must be called", peek().position, {"("});
        next();
        std::vector<ExprNode> args;
        args.push_back(expr());
        while (peek().kind == TokenKind::comma) {
            if (static_cast<int>(args.size()) >= arity)
                throw ParseError("too many arguments for '" + t.text + "' (takes " + std::to_string(arity) + ")",
                                 peek().position, {")"});
            next();
            args.push_back(expr());
        }
        if (static_cast<int>(args.size()) < arity) {
            if (peek().kind == TokenKind::rparen)
                throw ParseError("too few arguments for '" + t.text + "' (takes " + std::to_string(arity) + ")",
                                 peek().position, {","});
        }
        expect_rparen();
        ExprNode e = ExprNode::call(t.text, std::move(args));
        e.position = t.position;
        return e;
    }

    void expect_rparen() {
        if (peek().kind != TokenKind::rparen) {
            std::string what = peek().kind == TokenKind::end ? "unexpected end of input" : "unexpected '" + peek().text + "'";
            throw ParseError(what, peek().position, {")", ",", "+", "-", "*", "/", "^"});
        }
        next();
    }

    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

// Binding strength used by the printer.
int level(const ExprNode& e) {
    switch (e.kind) {
        case ExprNode::Kind::number: return e.value < 0.0 || std::signbit(e.value) ? 3 : 5;
        case ExprNode::Kind::variable:
        case ExprNode::Kind::param:
        case ExprNode::Kind::call: return 5;
        case ExprNode::Kind::negate: return 3;
        case ExprNode::Kind::binary:
            switch (e.op) {
                case '+':
                case '-': return 1;
                case '*':
                case '/': return 2;
                default: return 4;
            }
    }
    return 5;
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void print(const ExprNode& e, int min_level, std::string& out) {
    const bool paren = level(e) < min_level;
    if (paren) out += '(';
    switch (e.kind) {
        case ExprNode::Kind::number:
            if (std::signbit(e.value)) {
                out += '-';
                out += format_number(-e.value);
            } else {
                out += format_number(e.value);
            }
            break;
        case ExprNode::Kind::variable: out += 'x'; break;
        case ExprNode::Kind::param: out += e.name; break;
        case ExprNode::Kind::negate:
            out += '-';
            print(e.args[0], 3, out);
            break;
        case ExprNode::Kind::binary:
            switch (e.op) {
                case '+':
                case '-':
                    print(e.args[0], 1, out);
                    out += e.op == '+' ? " + " : " - ";
                    print(e.args[1], 2, out);
                    break;
                case '*':
                case '/':
                    print(e.args[0], 2, out);
                    out += e.op;
                    print(e.args[1], 3, out);
                    break;
                default:
                    print(e.args[0], 5, out);
                    out += '^';
                    print(e.args[1], 3, out);
                    break;
            }
            break;
        case ExprNode::Kind::call:
            out += e.name;
            out += '(';
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                print(e.args[i], 0, out);
            }
            out += ')';
            break;
    }
    if (paren) out += ')';
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double lookup(const ParamMap& params, const std::string& name) {
    auto it = params.find(name);
    if (it == params.end()) throw UnboundParamError("parameter '" + name + "' is not bound");
    return it->second;
}

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " produced a non-finite value");
    return v;
}

double eval_call(const ExprNode& e, double x, const ParamMap& params) {
    const std::string& f = e.name;
    if (f == "indicator") {
        const double lo = eval_expr(e.args[0], x, params);
        const double hi = eval_expr(e.args[1], x, params);
        return (x >= lo && x <= hi) ? 1.0 : 0.0;
    }
    const double a = eval_expr(e.args[0], x, params);
    if (f == "sqrt") {
        if (a < 0.0) throw DomainError("sqrt of negative value " + fmt(a));
        return std::sqrt(a);
    }
    if (f == "log") {
        if (!(a > 0.0)) throw DomainError("log of non-positive value " + fmt(a));
        return std::log(a);
    }
    if (f == "exp") return checked(std::exp(a), "exp");
    if (f == "sin") return std::sin(a);
    if (f == "cos") return std::cos(a);
    if (f == "abs") return std::abs(a);
    if (f == "eta") return 1.0 + lookup(params, "rho") * a;
    if (f == "H") return checked(h_gamma(lookup(params, "gamma"), a), "H");
    if (f == "Krg") {
        KernelSpec spec{KernelKind::K_rho_gamma, lookup(params, "rho"), lookup(params, "gamma"), 1.0};
        return checked(eval_kernel(spec, a), "Krg");
    }
    const double b = eval_expr(e.args[1], x, params);
    if (f == "pow") return checked(std::pow(a, b), "pow");
    if (f == "min") return std::min(a, b);
    if (f == "max") return std::max(a, b);
    throw ParseError("unknown function '" + f + "'", e.position, function_names());
}

void collect(const ExprNode& e, std::set<std::string>& names) {
    if (e.kind == ExprNode::Kind::param) names.insert(e.name);
    if (e.kind == ExprNode::Kind::call) {
        if (e.name == "eta") names.insert("rho");
        if (e.name == "H") names.insert("gamma");
        if (e.name == "Krg") {
            names.insert("rho");
            names.insert("gamma");
        }
    }
    for (const auto& a : e.args) collect(a, names);
}

}  // namespace

ExprNode parse(const std::vector<Token>& tokens) {
    return Parser(tokens).run();
}

ExprNode parse(const std::string& src) {
    return parse(tokenize(src));
}

std::string pretty_print(const ExprNode& node) {
    std::string out;
    print(node, 0, out);
    return out;
}

double eval_expr(const ExprNode& e, double x, const ParamMap& params) {
    switch (e.kind) {
        case ExprNode::Kind::number: return e.value;
        case ExprNode::Kind::variable: return x;
        case ExprNode::Kind::param: return lookup(params, e.name);
        case ExprNode::Kind::negate: return -eval_expr(e.args[0], x, params);
        case ExprNode::Kind::call: return eval_call(e, x, params);
        case ExprNode::Kind::binary: {
            const double a = eval_expr(e.args[0], x, params);
            const double b = eval_expr(e.args[1], x, params);
            switch (e.op) {
                case '+': return checked(a + b, "addition");
                case '-': return checked(a - b, "subtraction");
                case '*': return checked(a * b, "multiplication");
                case '/':
                    if (b == 0.0) throw DomainError("division by zero");
                    return checked(a / b, "division");
                case '^': {
                    const double v = std::pow(a, b);
                    if (std::isnan(v)) throw DomainError("power " + fmt(a) + "^" + fmt(b) + " undefined");
                    return checked(v, "power");
                }
            }
            break;
        }
    }
    throw DomainError("malformed expression tree");
}

std::vector<std::string> free_params(const ExprNode& node) {
    std::set<std::string> names;
    collect(node, names);
    return {names.begin(), names.end()};
}

Expression::Expression(const std::string& source, ParamMap params)
    : source_(source), tree_(std::make_shared<const ExprNode>(parse(source))), params_(std::move(params)) {
    for (const auto& name : free_params(*tree_))
        if (!params_.count(name)) throw UnboundParamError("parameter '" + name + "' is not bound in '" + source + "'");
}

double Expression::operator()(double x) const {
    return eval_expr(*tree_, x, params_);
}

RealFunc Expression::to_func(Interval domain) const {
    auto tree = tree_;
    auto params = params_;
    return RealFunc([tree, params](double x) { return eval_expr(*tree, x, params); }, domain, source_);
}

}  // namespace beurlab
