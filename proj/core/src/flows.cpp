#include "beurlab/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "beurlab/errors.hpp"
#include "beurlab/kernels.hpp"

namespace beurlab {

namespace {

const QuadratureOptions kFlowQuad{1e-13, 1e-14, 60, 20000};
constexpr int kKnots = 1024;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double integral(const RealFunc& phi, double from, double to) {
    return tau_numeric(phi, to, from, kFlowQuad);
}

// Solves anchor_tau + int_anchor^x dw/phi = y for x in [lo, hi], given the
// sign change f(lo) <= 0 <= f(hi).
double refine(const RealFunc& phi, double anchor, double anchor_tau, double y, double lo, double hi,
              double f_lo, double f_hi) {
    auto F = [&](double x) { return anchor_tau + integral(phi, anchor, x) - y; };
    const double target = 1e-15 * std::max(1.0, std::abs(y));
    if (std::abs(f_lo) <= target) return lo;
    if (std::abs(f_hi) <= target) return hi;

    double x = lo + (hi - lo) * (-f_lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    double best_x = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
    double best_f = std::min(std::abs(f_lo), std::abs(f_hi));
    for (int iter = 0; iter < 300; ++iter) {
        const double fx = F(x);
        if (std::abs(fx) < best_f) {
            best_f = std::abs(fx);
            best_x = x;
        }
        if (std::abs(fx) <= target) return x;
        if (fx < 0.0)
            lo = x;
        else
            hi = x;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) break;
        double next = x - fx * phi(x);
        if (!(next > lo && next < hi)) {
            next = (lo > 0.0 && hi / lo > 4.0) ? std::sqrt(lo) * std::sqrt(hi) : 0.5 * (lo + hi);
        }
        x = next;
    }
    if (best_f > 1e-10 * std::max(1.0, std::abs(y)))
        throw NonconvergenceError("occupation-time inversion stalled at y = " + fmt(y));
    return best_x;
}

// Downward exponential bracketing from base for y < 0.
double invert_below(const RealFunc& phi, double y, double base) {
    const Interval& dom = phi.domain();
    const double scale = std::max(1.0, std::abs(base));
    double hi = base;
    double tau_hi = 0.0;
    for (int j = 0; j < 1100; ++j) {
        double lo = std::isfinite(dom.lo) ? dom.lo + (base - dom.lo) * std::ldexp(1.0, -(j + 1))
                                          : base - scale * std::ldexp(1.0, j);
        if (!dom.contains(lo) || lo >= hi) break;
        const double tau_lo = tau_hi - integral(phi, lo, hi);
        if (tau_lo <= y) return refine(phi, lo, tau_lo, y, lo, hi, tau_lo - y, tau_hi - y);
        hi = lo;
        tau_hi = tau_lo;
    }
    throw RangeError("no point below the base reaches occupation time " + fmt(y));
}

}  // namespace

const std::vector<std::string>& flow_families() {
    static const std::vector<std::string> names{"constant", "power", "log", "linear", "linear_plus_root"};
    return names;
}

FlowFunc make_function(const std::string& family, const std::vector<double>& params) {
    auto need = [&](std::size_t n) {
        if (params.size() != n)
            throw BadParamError("family '" + family + "' takes " + std::to_string(n) + " parameter(s), got " +
                                std::to_string(params.size()));
    };
    FlowFunc out;
    out.family = family;
    if (family == "constant") {
        need(1);
        const double k = params[0];
        if (!(k > 0.0) || !std::isfinite(k)) throw BadParamError("constant phi needs k > 0");
        out.func = RealFunc([k](double) { return k; }, Interval::real_line(), "constant(" + fmt(k) + ")");
        out.declared_rho = 0.0;
    } else if (family == "power") {
        need(1);
        const double a = params[0];
        if (!(a > 0.0 && a < 1.0)) throw BadParamError("power phi needs 0 < alpha < 1, got " + fmt(a));
        out.func = RealFunc([a](double x) { return std::pow(x, a); }, Interval::open_above(0.0),
                            "power(" + fmt(a) + ")");
        out.declared_rho = 0.0;
    } else if (family == "log") {
        need(0);
        out.func = RealFunc([](double x) { return std::log(x); }, Interval::open_above(1.0), "log");
        out.declared_rho = 0.0;
        out.default_base = std::exp(1.0);
    } else if (family == "linear") {
        need(1);
        const double r = params[0];
        if (!(r > 0.0) || !std::isfinite(r)) throw BadParamError("linear phi needs rho > 0");
        out.func = RealFunc([r](double x) { return r * x; }, Interval::open_above(0.0), "linear(" + fmt(r) + ")");
        out.declared_rho = r;
    } else if (family == "linear_plus_root") {
        need(1);
        const double r = params[0];
        if (!(r >= 0.0) || !std::isfinite(r)) throw BadParamError("linear_plus_root needs rho >= 0");
        out.func = RealFunc([r](double x) { return r * x + std::sqrt(x); }, Interval::open_above(0.0),
                            "linear_plus_root(" + fmt(r) + ")");
        out.declared_rho = r;
    } else {
        throw UnknownFamilyError("unknown function family '" + family + "'");
    }
    return out;
}

FlowFunc make_function(const RealFunc& phi, std::optional<double> declared_rho) {
    if (declared_rho && !(*declared_rho >= 0.0)) throw BadParamError("declared rho must be non-negative");
    FlowFunc out;
    out.func = phi;
    out.declared_rho = declared_rho;
    out.family = "expression";
    const Interval& d = phi.domain();
    if (!d.contains(out.default_base)) {
        if (std::isfinite(d.lo) && d.contains(d.lo + 1.0))
            out.default_base = d.lo + 1.0;
    }
    return out;
}

double eta_x(const FlowFunc& phi, double x, double t) {
    const double px = phi(x);
    if (!(px > 0.0)) throw DomainError("phi(" + fmt(x) + ") must be positive");
    if (t == 0.0) return 1.0;
    return phi(x + t * px) / px;
}

LocalContext local_context(const FlowFunc& phi, double x) {
    return LocalContext(phi.func, x, phi.rho());
}

double tau_phi(const FlowFunc& phi, double x, double base) {
    return tau_numeric(phi.func, x, base, kFlowQuad);
}

double tau_phi(const FlowFunc& phi, double x) {
    return tau_phi(phi, x, phi.default_base);
}

double tau_phi_inverse(const FlowFunc& phi, double y, double base, double upper_bracket) {
    if (!std::isfinite(y)) throw RangeError("occupation time must be finite");
    phi(base);
    if (y == 0.0) return base;
    if (y < 0.0) return invert_below(phi.func, y, base);
    const double scale = std::max(1.0, std::abs(base));
    double lo = base;
    double tau_lo = 0.0;
    for (int j = 0; j < 200; ++j) {
        double hi = base + scale * std::ldexp(1.0, j);
        bool last = false;
        if (hi >= upper_bracket) {
            hi = upper_bracket;
            last = true;
        }
        if (hi <= lo) break;
        const double tau_hi = tau_lo + integral(phi.func, lo, hi);
        if (tau_hi >= y) return refine(phi.func, lo, tau_lo, y, lo, hi, tau_lo - y, tau_hi - y);
        lo = hi;
        tau_lo = tau_hi;
        if (last) break;
    }
    throw RangeError("occupation time " + fmt(y) + " not reached below the upper bracket " + fmt(upper_bracket));
}

struct TimeChange::Impl {
    FlowFunc phi;
    double base = 1.0;
    std::vector<double> xs;
    std::vector<double> taus;
};

TimeChange::TimeChange(FlowFunc phi, double base, double upper_bracket) {
    auto impl = std::make_shared<Impl>();
    impl->phi = std::move(phi);
    impl->base = base;
    const RealFunc& f = impl->phi.func;
    f(base);
    if (!(upper_bracket > base)) throw BadParamError("upper bracket must exceed the base point");

    const double dmin = 1e-6 * std::max(1.0, std::abs(base));
    const double dmax = upper_bracket - base;
    impl->xs.push_back(base);
    impl->taus.push_back(0.0);
    const double lmin = std::log(dmin);
    const double lmax = std::log(std::max(dmax, 2.0 * dmin));
    for (int k = 1; k < kKnots; ++k) {
        const double d = std::exp(lmin + (lmax - lmin) * (k - 1) / (kKnots - 2));
        const double x = base + d;
        if (x <= impl->xs.back()) continue;
        try {
            const double t = impl->taus.back() + integral(f, impl->xs.back(), x);
            impl->xs.push_back(x);
            impl->taus.push_back(t);
        } catch (const Error&) {
            if (impl->xs.size() < 2) throw;
            break;
        }
    }
    impl_ = std::move(impl);
}

double TimeChange::tau_at(double x) const {
    const Impl& m = *impl_;
    if (x >= m.base && x <= m.xs.back()) {
        auto it = std::upper_bound(m.xs.begin(), m.xs.end(), x);
        const std::size_t k = static_cast<std::size_t>(it - m.xs.begin()) - 1;
        return m.taus[k] + integral(m.phi.func, m.xs[k], x);
    }
    return tau_phi(m.phi, x, m.base);
}

double TimeChange::tau_inv_at(double y) const {
    const Impl& m = *impl_;
    if (!std::isfinite(y)) throw RangeError("occupation time must be finite");
    if (y < 0.0) return invert_below(m.phi.func, y, m.base);
    if (y > m.taus.back())
        throw RangeError("occupation time " + fmt(y) + " beyond the tabulated range " + fmt(m.taus.back()));
    auto it = std::upper_bound(m.taus.begin(), m.taus.end(), y);
    std::size_t k = static_cast<std::size_t>(it - m.taus.begin());
    if (k == m.taus.size()) return m.xs.back();
    --k;
    return refine(m.phi.func, m.xs[k], m.taus[k], y, m.xs[k], m.xs[k + 1], m.taus[k] - y, m.taus[k + 1] - y);
}

double TimeChange::g_at(double y) const {
    return impl_->phi(tau_inv_at(y));
}

RealFunc TimeChange::tau() const {
    auto self = *this;
    return RealFunc([self](double x) { return self.tau_at(x); }, impl_->phi.func.domain(), "tau");
}

RealFunc TimeChange::tau_inv() const {
    auto self = *this;
    return RealFunc([self](double y) { return self.tau_inv_at(y); }, Interval::real_line(), "tau_inv");
}

RealFunc TimeChange::g() const {
    auto self = *this;
    return RealFunc([self](double y) { return self.g_at(y); }, Interval::real_line(), "g");
}

double TimeChange::base() const { return impl_->base; }
const FlowFunc& TimeChange::phi() const { return impl_->phi; }
std::size_t TimeChange::knot_count() const { return impl_->xs.size(); }

TimeChangeResult time_change(const RealFunc& U, const FlowFunc& phi, double base) {
    TimeChange tc(phi, base);
    RealFunc V([tc, U](double y) { return U(tc.tau_inv_at(y)); }, Interval::real_line(), "V");
    return {tc, V};
}

double prop1_residual(const FlowFunc& phi, double x, double s, double /*base*/) {
    if (!phi.declared_rho) throw BadParamError("prop1_residual needs a declared rho for phi");
    const PopaParams p(*phi.declared_rho);
    if (!p.in_G_plus(s)) throw DomainError("s = " + fmt(s) + " is not right of the Popa origin");
    const double px = phi(x);
    // The base cancels in the difference, so integrate over [x, x + s phi(x)] directly.
    const double increment = integral(phi.func, x, x + s * px);
    KernelSpec spec{KernelKind::tau_eta, p.rho(), 0.0, 1.0};
    return increment - eval_kernel(spec, s);
}

}  // namespace beurlab
