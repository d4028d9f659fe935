#pragma once

#include <functional>
#include <limits>
#include <string>

namespace beurlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
    double lo = -kInf;
    double hi = kInf;
    bool lo_open = true;
    bool hi_open = true;

    static Interval real_line() { return {}; }
    static Interval open_above(double lo) { return {lo, kInf, true, true}; }
    static Interval closed_above(double lo) { return {lo, kInf, false, true}; }
    static Interval closed(double lo, double hi) { return {lo, hi, false, false}; }

    bool contains(double x) const;
    std::string to_string() const;
};

/// A real function of one real variable with an explicit domain. Calls
/// outside the domain, or calls producing a non-finite value, throw
/// DomainError.
class RealFunc {
public:
    using Fn = std::function<double(double)>;

    RealFunc() = default;
    RealFunc(Fn fn, Interval domain = Interval::real_line(), std::string name = {});

    double operator()(double x) const;
    double unchecked(double x) const { return fn_(x); }

    const Interval& domain() const { return domain_; }
    const std::string& name() const { return name_; }
    bool valid() const { return static_cast<bool>(fn_); }

    static RealFunc constant(double c);
    static RealFunc identity();

private:
    Fn fn_;
    Interval domain_;
    std::string name_;
};

/// a*f + b*g on the intersection of the two domains.
RealFunc linear_combination(double a, const RealFunc& f, double b, const RealFunc& g);

}  // namespace beurlab
