#include "beurlab/beck.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "beurlab/errors.hpp"
#include "beurlab/popa.hpp"
#include "beurlab/quadrature.hpp"

namespace beurlab {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

double integral(const RealFunc& f, double a, double b, const QuadratureOptions& opts) {
    if (a == b) return 0.0;
    auto fn = [&](double t) { return f(t); };
    try {
        if (a > 0.0 && b > 0.0 && std::max(a, b) / std::min(a, b) > 4.0) return integrate_log(fn, a, b, opts).value;
        return integrate(fn, a, b, opts).value;
    } catch (const NonconvergenceError& e) {
        throw IntegrationError(e.what());
    }
}

QuadratureOptions tight() {
    QuadratureOptions o;
    o.rel_tol = 1e-12;
    return o;
}

}  // namespace

BeckChain beck_sequence(const FlowFunc& phi, double x0, double u, int n) {
    if (!(u > 0.0)) throw BadParamError("Beck step must be positive");
    if (n < 0) throw BadParamError("chain length must be non-negative");
    if (!phi.func.domain().contains(x0)) throw DomainError("x0 = " + fmt(x0) + " outside the domain of phi");
    BeckChain c;
    c.phi = phi;
    c.x0 = x0;
    c.step = u;
    c.values.reserve(static_cast<std::size_t>(n) + 1);
    c.values.push_back(x0);
    for (int k = 0; k < n; ++k) {
        const double x = c.values.back();
        c.values.push_back(x + u * phi(x));
    }
    c.growth = x0 == 0.0 ? (c.values.back() == 0.0 ? 1.0 : kInf) : c.values.back() / x0;
    c.divergent = c.growth > kDivergenceRatio;
    return c;
}

std::vector<double> gp_sequence(const FlowFunc& phi, double u, int n) {
    if (n < 0) throw BadParamError("sequence length must be non-negative");
    const double q = phi(u);
    std::vector<double> out{u};
    for (int k = 0; k < n; ++k) out.push_back(u + out.back() * q);
    return out;
}

Prop11Bounds::Prop11Bounds(double rho, double a, double epsilon) : rho_(rho), a_(a), epsilon_(epsilon) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw BadParamError("rho must be positive");
    if (!(a > 1.0) || !std::isfinite(a)) throw BadParamError("a must exceed 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw BadParamError("epsilon must lie in (0, 1)");
    const PopaParams p(rho);
    eta_a_ = eta(p, a);
    delta_ = epsilon * rho * a / eta_a_;
    const double lo = eta(p, a * (1.0 - epsilon));
    const double hi = eta(p, a * (1.0 + epsilon));
    C_minus_ = std::log(lo / ((rho + 2.0) * (1.0 - epsilon)));
    C_plus_ = std::log(hi / (rho * (1.0 + epsilon)));
    C_plus_safe_ = std::log(hi / std::min(1.0, rho * (1.0 + epsilon)));
    if (!(C_minus_ > 0.0))
        throw BadParamError("C_minus = " + fmt(C_minus_) + " is not positive for rho = " + fmt(rho) +
                            ", a = " + fmt(a) + ", epsilon = " + fmt(epsilon));
}

double Prop11Bounds::lower(int m) const {
    const double base = 1.0 + rho_ * a_ * (1.0 - epsilon_);
    return std::pow(base, m) / (1.0 - epsilon_) - epsilon_ / (1.0 - epsilon_);
}

double Prop11Bounds::upper(int m) const {
    const double base = 1.0 + rho_ * a_ * (1.0 + epsilon_);
    return std::pow(base, m) / (1.0 + epsilon_) + epsilon_ / (1.0 + epsilon_);
}

Prop11Bounds prop11_bounds(double rho, double a, double epsilon) {
    return Prop11Bounds(rho, a, epsilon);
}

std::vector<SandwichRow> prop11_sandwich(const Prop11Bounds& b, const FlowFunc& phi, double x, int m_max) {
    if (m_max < 1) throw BadParamError("m_max must be at least 1");
    const LocalContext ctx(phi.func, x, b.rho());
    const PopaParams p(b.rho());
    std::vector<SandwichRow> rows;
    double iterate = 0.0;
    for (int m = 1; m <= m_max; ++m) {
        iterate = circ_local(ctx, iterate, b.a());
        SandwichRow r;
        r.m = m;
        r.iterate = iterate;
        r.value = eta(p, iterate);
        r.root_ratio = std::pow(ctx.eta_x(iterate), 1.0 / m) / b.eta_a();
        r.lower = b.lower(m);
        r.upper = b.upper(m);
        // Rounding-level slack only: the bounds are tight at m = 1.
        const double slack = 1e-12 * std::max({1.0, std::abs(r.lower), std::abs(r.upper)});
        r.inside = r.lower - slack <= r.value && r.value <= r.upper + slack;
        rows.push_back(r);
    }
    return rows;
}

std::vector<LogSandwichRow> prop11_log_sandwich(const Prop11Bounds& b, const FlowFunc& phi, double x,
                                                const std::vector<double>& u_grid) {
    if (u_grid.empty()) return {};
    const LocalContext ctx(phi.func, x, b.rho());
    const double u_max = *std::max_element(u_grid.begin(), u_grid.end());
    std::vector<double> powers{b.a()};  // powers[k] = a^{k+1}
    while (powers.back() <= u_max) {
        if (powers.size() > 100000) throw NonconvergenceError("iterates of a do not reach the u-grid");
        const double next = circ_local(ctx, powers.back(), b.a());
        if (!(next > powers.back())) throw DomainError("iterates of a stopped increasing");
        powers.push_back(next);
    }
    std::vector<LogSandwichRow> rows;
    for (double u : u_grid) {
        if (u < b.a()) throw BadParamError("u-grid must start at a");
        LogSandwichRow r;
        r.u = u;
        r.m = static_cast<int>(std::upper_bound(powers.begin(), powers.end(), u) - powers.begin());
        r.lower = r.m * b.C_minus();
        r.log_u = std::log(u);
        r.upper = (r.m + 1) * b.C_plus();
        r.holds = r.lower <= r.log_u && r.log_u <= r.upper;
        rows.push_back(r);
    }
    return rows;
}

double solve_recurrence(double b, double r, double v1, int n) {
    if (n < 1) throw BadParamError("n must be at least 1");
    if (b == 0.0) throw BadParamError("b must be non-zero");
    if (std::abs(b * r - 1.0) < 1e-12) throw ResonanceError("b r = 1: the recurrence is resonant");
    if (n == 1) return v1;
    const double k = b * r - 1.0;
    return std::pow(r, n) / k + std::pow(b, 1 - n) * (v1 - r / k);
}

double iterate_recurrence(double b, double r, double v1, int n) {
    if (n < 1) throw BadParamError("n must be at least 1");
    if (b == 0.0) throw BadParamError("b must be non-zero");
    double v = v1;
    double rn = r;
    for (int k = 1; k < n; ++k) {
        v = (v + rn) / b;
        rn *= r;
    }
    return v;
}

Theorem10Report theorem10_check(const RealFunc& h, const FlowFunc& phi, double a0, const std::vector<double>& x_grid,
                                const std::vector<double>& u_grid) {
    if (x_grid.empty() || u_grid.empty()) throw BadParamError("empty grid");
    const double floor = std::max(a0, 1.0);
    for (double u : u_grid)
        if (!(u > floor)) throw BadParamError("u-grid must lie above max(a0, 1)");
    Theorem10Report rep;
    rep.C_hat = -kInf;
    for (double x : x_grid) {
        const double p = phi(x);
        const double hx = h(x);
        double best = -kInf;
        for (double u : u_grid) {
            Theorem10Row r;
            r.x = x;
            r.u = u;
            r.increment = h(x + u * p) - hx;
            r.ratio = r.increment / std::log(u);
            best = std::max(best, r.ratio);
            rep.rows.push_back(r);
        }
        rep.per_x.push_back(best);
        rep.C_hat = std::max(rep.C_hat, best);
    }
    const std::size_t n = rep.per_x.size();
    bool finite = std::isfinite(rep.C_hat);
    if (n >= 2) {
        const double last = rep.per_x[n - 1];
        const double prev = rep.per_x[n - 2];
        rep.bounded = finite && std::abs(last - prev) <= 0.05 * std::max(std::abs(last), std::abs(prev));
    } else {
        rep.bounded = finite;
    }
    if (phi.rho() > 0.0) {
        try {
            rep.reference_C = 1.0 / Prop11Bounds(phi.rho(), std::max(a0, 2.0), 0.5).C_minus();
        } catch (const BadParamError&) {
        }
    }
    return rep;
}

double LinearPlusIntegral::operator()(double x) const {
    return b + c * x + integral(e, 1.0, x, tight());
}

ForwardRepresentation represent_forward(const LinearPlusIntegral& F, const FlowFunc& phi,
                                        const std::vector<double>& x_grid, const std::vector<double>& u_grid,
                                        double tol) {
    if (x_grid.empty() || u_grid.empty()) throw BadParamError("empty grid");
    ForwardRepresentation out;
    const double x_last = *std::max_element(x_grid.begin(), x_grid.end());
    for (double x : x_grid) {
        const double p = phi(x);
        for (double u : u_grid) {
            const double step = u * p;
            RepresentationRow r;
            r.x = x;
            r.u = u;
            r.ratio = (F.c * step + integral(F.e, x, x + step, tight())) / step;
            if (x == x_last) out.max_deviation_last = std::max(out.max_deviation_last, std::abs(r.ratio - F.c));
            out.rows.push_back(r);
        }
    }
    out.passed = out.max_deviation_last <= tol;
    return out;
}

ReverseRepresentation represent_reverse(const RealFunc& F, const FlowFunc& phi, std::optional<double> c, double X,
                                        const std::vector<double>& x_grid, double u0, ReconstructionMode mode) {
    if (x_grid.empty()) throw BadParamError("empty grid");
    if (!(u0 > 0.0)) throw BadParamError("u0 must be positive");
    std::vector<double> xs = x_grid;
    std::sort(xs.begin(), xs.end());
    if (xs.front() < X) throw BadParamError("grid points must not lie below X");

    ReverseRepresentation out;
    out.X = X;
    out.u0 = u0;
    if (c) {
        out.c = *c;
    } else {
        const double xl = xs.back();
        const double p = phi(xl);
        out.c = (F(xl + p) - F(xl)) / p;
        out.c_fitted = true;
        if (!std::isfinite(out.c)) throw FitError("difference ratio at x = " + fmt(xl) + " is not finite");
    }
    const double cc = out.c;
    auto e_hat = [&](double t) {
        const double p = phi(t);
        return (F(t + u0 * p) - F(t)) / (u0 * p) - cc;
    };
    const double FX = F(X);

    std::vector<double> F_hat(xs.size());
    if (mode == ReconstructionMode::differencing) {
        // e_hat carries cancellation noise of order eps F / (u0 phi), so the
        // absolute target is set against the size of F itself.
        QuadratureOptions opts;
        opts.rel_tol = 1e-9;
        const RealFunc ef(e_hat, phi.func.domain(), "e_hat");
        double acc = 0.0;
        double at = X;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            opts.abs_floor = 1e-9 * std::max(1.0, std::abs(F(xs[i])));
            acc += integral(ef, at, xs[i], opts);
            at = xs[i];
            F_hat[i] = FX + cc * (xs[i] - X) + acc;
        }
    } else {
        // Trapezoid sums of e_hat along the chain x_{k+1} = x_k + u0 phi(x_k).
        double node = X;
        double e_node = e_hat(node);
        double acc = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            for (;;) {
                const double next = node + u0 * phi(node);
                if (next > xs[i]) break;
                const double e_next = e_hat(next);
                acc += 0.5 * (e_node + e_next) * (next - node);
                node = next;
                e_node = e_next;
            }
            F_hat[i] = FX + cc * (xs[i] - X) + acc + e_node * (xs[i] - node);
        }
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ReconstructionRow r;
        r.x = xs[i];
        r.e_hat = e_hat(xs[i]);
        r.F = F(xs[i]);
        r.F_hat = F_hat[i];
        r.rel_error = std::abs(r.F_hat - r.F) / (r.F != 0.0 ? std::abs(r.F) : 1.0);
        out.max_rel_error = std::max(out.max_rel_error, r.rel_error);
        out.rows.push_back(r);
    }
    return out;
}

RieszResult riesz_mean(const RealFunc& U, const FlowFunc& phi, double x, double base) {
    if (!(x > base)) throw BadParamError("x must exceed base");
    const double px = phi(x);
    phi(base);
    const bool geometric = base > 0.0;
    QuadratureOptions opts;
    opts.rel_tol = 1e-12;

    auto node = [&](int i, int n) {
        if (i == n) return x;
        const double f = static_cast<double>(i) / n;
        return geometric ? base * std::pow(x / base, f) : base + (x - base) * f;
    };
    // lambda(y) / lambda(x) at the partition nodes.
    auto scaled_lambda = [&](int n) {
        std::vector<double> lam(static_cast<std::size_t>(n) + 1);
        double tau_rel = 0.0;
        lam[n] = 1.0;
        for (int i = n - 1; i >= 0; --i) {
            const double a = node(i, n);
            const double b = node(i + 1, n);
            tau_rel -= integrate([&](double w) { return 1.0 / phi(w); }, a, b, opts).value;
            lam[i] = phi(a) / px * std::exp(tau_rel);
        }
        return lam;
    };
    auto midpoint_sum = [&](int n, double& lambda0) {
        const auto lam = scaled_lambda(n);
        lambda0 = lam[0];
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double a = node(i, n);
            const double b = node(i + 1, n);
            const double mid = geometric ? std::sqrt(a * b) : 0.5 * (a + b);
            s += U(mid) * (lam[i + 1] - lam[i]);
        }
        return s;
    };

    RieszResult res;
    double lambda0 = 0.0;
    double coarse = midpoint_sum(64, lambda0);
    double previous = kInf;
    bool settled = false;
    double value = coarse;
    for (int n = 128; n <= (1 << 16); n *= 2) {
        const double fine = midpoint_sum(n, lambda0);
        value = fine + (fine - coarse) / 3.0;
        if (std::abs(value - previous) <= 1e-8 * std::max(1.0, std::abs(value))) {
            settled = true;
            break;
        }
        previous = value;
        coarse = fine;
    }
    if (!settled) throw NonconvergenceError("Riesz mean sums did not settle at x = " + fmt(x));
    res.mean = value;
    res.lambda_ratio = lambda0;
    res.normalized_mean = value / (1.0 - lambda0);
    res.moving_average = (U(x + px) - U(x)) / px;
    return res;
}

}  // namespace beurlab
