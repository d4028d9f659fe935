#include "beurlab/popa.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "beurlab/errors.hpp"

namespace beurlab {

PopaParams::PopaParams(double rho) : rho_(rho), rho_star_(-kInf) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
        std::ostringstream os;
        os << "Popa index must be a finite non-negative real, got " << rho;
        throw BadParamError(os.str());
    }
    if (rho > 0.0) rho_star_ = -1.0 / rho;
}

bool PopaParams::near_origin(double u) const {
    return rho_ > 0.0 && std::abs(u - rho_star_) < kOriginGuard;
}

double residual_scale(double lhs, double rhs) {
    return std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

double circ(const PopaParams& p, double a, double b) {
    return a + b * (1.0 + p.rho() * a);
}

double inv(const PopaParams& p, double u) {
    if (p.near_origin(u)) {
        std::ostringstream os;
        os.precision(17);
        os << "inverse undefined at the Popa origin " << p.rho_star() << " (u = " << u << ")";
        throw PopaOriginError(os.str());
    }
    return -u / (1.0 + p.rho() * u);
}

double eta(const PopaParams& p, double x) {
    return 1.0 + p.rho() * x;
}

double eta_star(const PopaParams& p, double x) {
    if (p.rho() == 0.0) return std::exp(x);
    return 1.0 + p.rho() * x;
}

double reflect(const PopaParams& p, double u) {
    if (p.rho() == 0.0) throw UndefinedForRhoZero("reflection needs rho > 0");
    return -u + 2.0 * p.rho_star();
}

LocalContext::LocalContext(RealFunc phi_, double x_, double rho_)
    : phi(std::move(phi_)), x(x_), rho(rho_), phi_x_(phi(x_)) {
    if (!(phi_x_ > 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "localisation needs phi(x) > 0; phi(" << x_ << ") = " << phi_x_;
        throw DomainError(os.str());
    }
}

double LocalContext::eta_x(double s) const {
    if (s == 0.0) return 1.0;
    return phi(shift(s)) / phi_x_;
}

double circ_local(const LocalContext& ctx, double s, double t) {
    return s + t * ctx.eta_x(s);
}

double iterate_local(const LocalContext& ctx, double a, int n) {
    if (n < 0) throw BadParamError("iterate count must be non-negative");
    double v = 0.0;
    for (int k = 0; k < n; ++k) v = circ_local(ctx, v, a);
    return v;
}

double inv_local(const LocalContext& ctx, double b) {
    const double e = ctx.eta_x(b);
    if (e == 0.0) throw PopaOriginError("localised inverse undefined where eta_x vanishes");
    return -b / e;
}

void ResidualReport::record(const std::string& identity, double lhs, double rhs,
                            const std::vector<double>& sample) {
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const ResidualEntry& e) { return e.identity == identity; });
    if (it == entries.end()) {
        ResidualEntry fresh;
        fresh.identity = identity;
        entries.push_back(std::move(fresh));
        it = entries.end() - 1;
    }
    const double abs_res = std::abs(lhs - rhs);
    const double scaled = abs_res / residual_scale(lhs, rhs);
    ++it->samples;
    it->max_abs = std::max(it->max_abs, abs_res);
    if (it->samples == 1 || scaled > it->max_scaled || std::isnan(scaled)) {
        it->max_scaled = std::isnan(scaled) ? kInf : scaled;
        it->worst_lhs = lhs;
        it->worst_rhs = rhs;
        it->worst_sample = sample;
    }
}

void ResidualReport::merge(const ResidualReport& other) {
    for (const auto& e : other.entries) {
        auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const ResidualEntry& mine) { return mine.identity == e.identity; });
        if (it == entries.end()) {
            entries.push_back(e);
            continue;
        }
        it->samples += e.samples;
        it->max_abs = std::max(it->max_abs, e.max_abs);
        if (e.max_scaled > it->max_scaled) {
            it->max_scaled = e.max_scaled;
            it->worst_lhs = e.worst_lhs;
            it->worst_rhs = e.worst_rhs;
            it->worst_sample = e.worst_sample;
        }
    }
}

const ResidualEntry* ResidualReport::find(const std::string& identity) const {
    for (const auto& e : entries)
        if (e.identity == identity) return &e;
    return nullptr;
}

double ResidualReport::max_scaled() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.max_scaled);
    return m;
}

ResidualReport check_prop2(const LocalContext& ctx, double a, double b, int m) {
    if (m < 1) throw BadParamError("check_prop2 needs m >= 1");
    ResidualReport report;
    const std::vector<double> sample{ctx.x, a, b, static_cast<double>(m)};
    const double x = ctx.x;
    const double phx = ctx.phi_x();
    const PopaParams limit(ctx.rho);

    // (i) a o a^{-1} = 0
    report.record("i_inverse", circ_local(ctx, a, inv_local(ctx, a)), 0.0, sample);

    const double y = ctx.shift(b);
    const LocalContext at_y = ctx.at(y);
    const double phy = at_y.phi_x();

    // (ii) x o (b o_x a) = y o a
    report.record("ii_translation", x + circ_local(ctx, b, a) * phx, y + a * phy, sample);

    // (iii) x o (b o_eta a) = y o [a eta(b) / eta_x(b)]
    const double eb = eta(limit, b);
    report.record("iii_change_of_operation", x + circ(limit, b, a) * phx, y + a * eb / ctx.eta_x(b) * phy,
                  sample);

    // (iv) x = y o b^{-1}
    report.record("iv_inverse_translation", x, y + inv_local(ctx, b) * phy, sample);

    // (v) eta_x(a^m) = prod_{k<m} eta_{y_k}(a)
    double product = 1.0;
    double power = 0.0;
    for (int k = 0; k < m; ++k) {
        product *= ctx.at(ctx.shift(power)).eta_x(a);
        power = circ_local(ctx, power, a);
    }
    report.record("v_product_law", ctx.eta_x(power), product, sample);
    return report;
}

}  // namespace beurlab
