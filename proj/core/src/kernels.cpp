#include "beurlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "beurlab/errors.hpp"

namespace beurlab {

const char* kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::eta: return "eta";
        case KernelKind::H_gamma: return "H_gamma";
        case KernelKind::K_rho_gamma: return "K_rho_gamma";
        case KernelKind::tau_eta: return "tau_eta";
        case KernelKind::flow_rate_f: return "flow_rate_f";
        case KernelKind::exp_g: return "exp_g";
    }
    return "unknown";
}

KernelKind parse_kernel_kind(const std::string& name) {
    for (auto k : {KernelKind::eta, KernelKind::H_gamma, KernelKind::K_rho_gamma, KernelKind::tau_eta,
                   KernelKind::flow_rate_f, KernelKind::exp_g})
        if (name == kernel_kind_name(k)) return k;
    throw UnknownFamilyError("unknown kernel kind '" + name + "'");
}

double h_gamma(double gamma, double x) {
    if (std::abs(gamma) < kGammaSwitch) {
        const double z = gamma * x;
        return x * (1.0 + z / 2.0 + z * z / 6.0);
    }
    return std::expm1(gamma * x) / gamma;
}

double k_rho_gamma(double rho, double gamma, double x) {
    if (rho == 0.0) return x;
    const double log_eta = std::log1p(rho * x);
    if (std::abs(gamma) < kGammaSwitch) {
        const double z = gamma * log_eta;
        return log_eta / rho * (1.0 + z / 2.0 + z * z / 6.0);
    }
    return std::expm1(gamma * log_eta) / (rho * gamma);
}

Interval kernel_domain(const KernelSpec& spec) {
    if (spec.kind == KernelKind::H_gamma || spec.rho == 0.0) return Interval::real_line();
    return Interval::open_above(-1.0 / spec.rho);
}

double eval_kernel(const KernelSpec& spec, double x) {
    if (!(spec.rho >= 0.0)) throw BadParamError("kernel index rho must be non-negative");
    if (!kernel_domain(spec).contains(x)) {
        std::ostringstream os;
        os.precision(17);
        os << kernel_kind_name(spec.kind) << " with rho = " << spec.rho << " undefined at x = " << x;
        throw DomainError(os.str());
    }
    const double rho = spec.rho;
    const double gamma = spec.gamma;
    double v = 0.0;
    switch (spec.kind) {
        case KernelKind::eta: v = 1.0 + rho * x; break;
        case KernelKind::H_gamma: v = h_gamma(gamma, x); break;
        case KernelKind::K_rho_gamma: v = k_rho_gamma(rho, gamma, x); break;
        case KernelKind::tau_eta: v = rho == 0.0 ? x : std::log1p(rho * x) / rho; break;
        case KernelKind::flow_rate_f:
            v = rho == 0.0 ? std::exp(-gamma * x) : std::exp((1.0 - gamma) * std::log1p(rho * x));
            break;
        case KernelKind::exp_g:
            v = rho == 0.0 ? std::exp(gamma * x) : std::exp(gamma * std::log1p(rho * x));
            break;
    }
    return spec.c * v;
}

RealFunc kernel_function(const KernelSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    os << kernel_kind_name(spec.kind) << "(rho=" << spec.rho << ", gamma=" << spec.gamma << ", c=" << spec.c
       << ")";
    return RealFunc([spec](double x) { return eval_kernel(spec, x); }, kernel_domain(spec), os.str());
}

double tau_numeric(const RealFunc& f, double x, double base, const QuadratureOptions& opts) {
    if (x == base) return 0.0;
    const double lo = std::min(x, base);
    const double hi = std::max(x, base);
    auto checked = [&f](double w) {
        const double v = f(w);
        if (!(v > 0.0)) {
            std::ostringstream os;
            os.precision(17);
            os << "integrand 1/f singular: f(" << w << ") = " << v;
            throw SingularIntegrandError(os.str());
        }
        return 1.0 / v;
    };
    checked(lo);
    checked(hi);
    double value = 0.0;
    if (lo > 0.0 && hi / lo > 4.0)
        value = integrate_log(checked, lo, hi, opts).value;
    else
        value = integrate(checked, lo, hi, opts).value;
    return x > base ? value : -value;
}

const char* equation_name(EquationId eq) {
    switch (eq) {
        case EquationId::GS: return "GS";
        case EquationId::BFE: return "BFE";
        case EquationId::GFE: return "GFE";
        case EquationId::GBE_P: return "GBE_P";
        case EquationId::GBE_GROUP: return "GBE_GROUP";
        case EquationId::CBE: return "CBE";
        case EquationId::GFI: return "GFI";
    }
    return "unknown";
}

namespace {

const RealFunc& role(const FunctionRoles& funcs, const std::string& name, EquationId eq) {
    auto it = funcs.find(name);
    if (it == funcs.end() || !it->second.valid())
        throw MissingRoleError(std::string(equation_name(eq)) + " needs role '" + name + "'");
    return it->second;
}

}  // namespace

std::pair<double, double> fe_sides(EquationId eq, const FunctionRoles& funcs, double u, double v) {
    switch (eq) {
        case EquationId::GS: {
            const auto& h = role(funcs, "h", eq);
            return {h(u + v * h(u)), h(u) * h(v)};
        }
        case EquationId::BFE: {
            const auto& e = role(funcs, "eta", eq);
            return {e(u + v * e(u)), e(u) * e(v)};
        }
        case EquationId::GFE:
        case EquationId::GFI: {
            const auto& K = role(funcs, "K", eq);
            const auto& g = role(funcs, "g", eq);
            return {K(u + v), g(u) * K(v) + K(u)};
        }
        case EquationId::GBE_P: {
            const auto& K = role(funcs, "K", eq);
            const auto& kappa = role(funcs, "kappa", eq);
            const auto& h = role(funcs, "h", eq);
            const auto& g = role(funcs, "g", eq);
            return {K(v + u * h(v)), K(v) + kappa(u) * g(v)};
        }
        case EquationId::GBE_GROUP: {
            const auto& K = role(funcs, "K", eq);
            const auto& h = role(funcs, "h", eq);
            const auto& g = role(funcs, "g", eq);
            return {K(v + u * h(v)), K(v) + K(u) * g(v)};
        }
        case EquationId::CBE: {
            const auto& f = role(funcs, "f", eq);
            const auto& h = role(funcs, "h", eq);
            return {f(v + u * h(v)), f(u) * f(v)};
        }
    }
    throw BadParamError("unknown equation tag");
}

double fe_residual(EquationId eq, const FunctionRoles& funcs, double u, double v) {
    if (eq != EquationId::GFI) {
        auto [lhs, rhs] = fe_sides(eq, funcs, u, v);
        return lhs - rhs;
    }
    const auto& K = role(funcs, "K", eq);
    const auto& g = role(funcs, "g", eq);
    const double lhs = K(u + v);
    const double scaled_term = g(u) * K(v);
    const double shift = K(u);
    const double excess = lhs - (scaled_term + shift);
    // Rounding follows the individual terms, which may cancel on the right.
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() *
                         (1.0 + std::abs(lhs) + std::abs(scaled_term) + std::abs(shift));
    return excess > noise ? excess : 0.0;
}

KernelSpec solve_gbe_kernel(const KernelSpec& h, const KernelSpec& g, double c) {
    if (h.kind != KernelKind::eta || h.c != 1.0)
        throw UnsupportedPairError("h must be eta_rho with unit scale");
    if (g.kind != KernelKind::exp_g || g.c != 1.0)
        throw UnsupportedPairError("g must be e^{gamma x} (rho = 0) or eta_rho^gamma (rho > 0) with unit scale");
    if (g.rho != h.rho) throw UnsupportedPairError("h and g must share the index rho");
    KernelSpec out;
    out.kind = h.rho == 0.0 ? KernelKind::H_gamma : KernelKind::K_rho_gamma;
    out.rho = h.rho;
    out.gamma = g.gamma;
    out.c = c;
    return out;
}

}  // namespace beurlab
