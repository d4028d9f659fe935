#include "beurlab/real_func.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "beurlab/errors.hpp"

namespace beurlab {

bool Interval::contains(double x) const {
    if (std::isnan(x)) return false;
    bool above = lo_open ? x > lo : x >= lo;
    bool below = hi_open ? x < hi : x <= hi;
    return above && below;
}

std::string Interval::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << (lo_open ? '(' : '[') << lo << ", " << hi << (hi_open ? ')' : ']');
    return os.str();
}

RealFunc::RealFunc(Fn fn, Interval domain, std::string name)
    : fn_(std::move(fn)), domain_(domain), name_(std::move(name)) {}

double RealFunc::operator()(double x) const {
    if (!domain_.contains(x)) {
        std::ostringstream os;
        os.precision(17);
        os << (name_.empty() ? "function" : name_) << ": argument " << x << " outside domain "
           << domain_.to_string();
        throw DomainError(os.str());
    }
    double y = fn_(x);
    if (!std::isfinite(y)) {
        std::ostringstream os;
        os.precision(17);
        os << (name_.empty() ? "function" : name_) << ": non-finite value at " << x;
        throw DomainError(os.str());
    }
    return y;
}

RealFunc RealFunc::constant(double c) {
    std::ostringstream os;
    os.precision(17);
    os << c;
    return RealFunc([c](double) { return c; }, Interval::real_line(), os.str());
}

RealFunc RealFunc::identity() {
    return RealFunc([](double x) { return x; }, Interval::real_line(), "x");
}

RealFunc linear_combination(double a, const RealFunc& f, double b, const RealFunc& g) {
    Interval d;
    const Interval& df = f.domain();
    const Interval& dg = g.domain();
    if (df.lo > dg.lo || (df.lo == dg.lo && df.lo_open)) {
        d.lo = df.lo;
        d.lo_open = df.lo_open;
    } else {
        d.lo = dg.lo;
        d.lo_open = dg.lo_open;
    }
    if (df.hi < dg.hi || (df.hi == dg.hi && df.hi_open)) {
        d.hi = df.hi;
        d.hi_open = df.hi_open;
    } else {
        d.hi = dg.hi;
        d.hi_open = dg.hi_open;
    }
    return RealFunc([a, f, b, g](double x) { return a * f(x) + b * g(x); }, d);
}

}  // namespace beurlab
