#include "beurlab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "beurlab/errors.hpp"
#include "beurlab/kernels.hpp"

namespace beurlab {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double noise_floor(double v) {
    return 1e-14 * std::max(1.0, std::abs(v));
}

// Aitken's delta-squared step on three consecutive terms, used only when the
// differences contract geometrically; otherwise the newest term is returned.
double aitken(double a, double b, double c) {
    const double d1 = b - a;
    const double d2 = c - b;
    if (std::abs(d2) <= noise_floor(c) || d1 == 0.0) return c;
    const double r = d2 / d1;
    if (!(std::abs(r) < 0.9)) return c;
    const double correction = d2 * r / (1.0 - r);
    if (std::abs(correction) > 10.0 * std::abs(d2)) return c;
    return c + correction;
}

struct Line {
    double intercept;
    double slope;
    double rms;
};

Line fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n == 1) return {ys[0], 0.0, 0.0};
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    const double intercept = my - slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss += r * r;
    }
    return {intercept, slope, std::sqrt(ss / n)};
}

std::vector<double> window_points(double t, double delta, int n, WindowSide side) {
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        if (side == WindowSide::right)
            s[j] = t + delta * j / n;
        else
            s[j] = t - delta + 2.0 * delta * (j + 0.5) / n;
    }
    return s;
}

}  // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        case Verdict::undecided: return "undecided";
    }
    return "undecided";
}

std::vector<double> GridSpec::x_values() const {
    std::vector<double> xs;
    for (int k = 0; k < count; ++k) xs.push_back(x0 * std::pow(ratio, k));
    return xs;
}

void GridSpec::validate(double rho_star) const {
    if (!(x0 > 0.0) || !std::isfinite(x0)) throw BadParamError("grid x0 must be positive");
    if (!(ratio > 1.0)) throw BadParamError("grid ratio must exceed 1");
    if (count < 1) throw BadParamError("grid count must be positive");
    if (!std::isfinite(x0 * std::pow(ratio, count - 1))) throw BadParamError("grid end point overflows");
    for (double t : t_grid)
        if (!(t > rho_star)) throw BadParamError("grid t = " + fmt(t) + " is not right of rho* = " + fmt(rho_star));
    for (std::size_t i = 0; i < delta_grid.size(); ++i) {
        if (!(delta_grid[i] > 0.0)) throw BadParamError("delta grid entries must be positive");
        if (i && !(delta_grid[i] < delta_grid[i - 1])) throw BadParamError("delta grid must be strictly decreasing");
    }
    if (window_samples < 1 || sub_grid < 1) throw BadParamError("window sample counts must be positive");
    if (!(tol > 0.0)) throw BadParamError("grid tolerance must be positive");
}

double delta_ratio(const RealFunc& F, const FlowFunc& phi, const RealFunc& psi, double x, double t) {
    const double q = psi(x);
    if (q == 0.0) throw DivideByZero("psi(" + fmt(x) + ") = 0");
    if (t == 0.0) return 0.0;
    const double px = phi(x);
    return (F(x + t * px) - F(x)) / q;
}

LimitEstimate extrapolate(std::vector<std::pair<double, double>> samples, double tol) {
    LimitEstimate out;
    out.samples = std::move(samples);
    const std::size_t n = out.samples.size();
    if (n == 0) return out;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = out.samples[i].second;
    std::vector<double> e(v);
    for (std::size_t k = 2; k < n; ++k) e[k] = aitken(v[k - 2], v[k - 1], v[k]);
    out.value = e[n - 1];
    if (n == 1) return out;
    if (n >= 4)
        out.error_proxy = std::abs(e[n - 1] - e[n - 2]);
    else
        out.error_proxy = std::abs(v[n - 1] - v[n - 2]);
    if (!std::isfinite(out.error_proxy)) out.error_proxy = kInf;

    bool shrinking = false;
    if (n >= 4) {
        shrinking = true;
        for (std::size_t k = n - 2; k < n; ++k) {
            const double prev = std::abs(v[k - 1] - v[k - 2]);
            const double cur = std::abs(v[k] - v[k - 1]);
            if (cur > prev + noise_floor(v[k])) shrinking = false;
        }
    } else {
        shrinking = true;
        for (std::size_t k = 1; k < n; ++k)
            if (std::abs(v[k] - v[k - 1]) > noise_floor(v[k])) shrinking = false;
    }
    out.converged = shrinking && out.error_proxy <= tol && std::isfinite(out.value);
    return out;
}

LimitEstimate estimate_limit(const RealFunc& F, const FlowFunc& phi, const RealFunc& psi, double t,
                             const GridSpec& grid, LimitMode mode) {
    grid.validate(-kInf);
    if (phi.declared_rho && !PopaParams(*phi.declared_rho).in_G_plus(t))
        throw DomainError("t = " + fmt(t) + " is not right of the Popa origin");
    std::vector<std::pair<double, double>> samples;
    for (double x : grid.x_values()) {
        double value = 0.0;
        if (mode == LimitMode::lim) {
            value = delta_ratio(F, phi, psi, x, t);
        } else {
            value = mode == LimitMode::limsup ? -kInf : kInf;
            for (int j = 0; j < grid.window_samples; ++j) {
                const double xj = x * std::pow(grid.ratio, static_cast<double>(j) / grid.window_samples);
                const double r = delta_ratio(F, phi, psi, xj, t);
                value = mode == LimitMode::limsup ? std::max(value, r) : std::min(value, r);
            }
        }
        samples.emplace_back(x, value);
    }
    return extrapolate(std::move(samples), grid.tol);
}

WindowEstimate window_limit(const RealFunc& F, const FlowFunc& phi, const RealFunc& psi, double t,
                            const GridSpec& grid, WindowSide side, Extremum ext) {
    grid.validate(-kInf);
    if (grid.delta_grid.empty()) throw BadParamError("window estimates need a delta grid");
    const double rho_star = phi.declared_rho ? PopaParams(*phi.declared_rho).rho_star() : -kInf;
    if (!(t > rho_star)) throw DomainError("t = " + fmt(t) + " is not right of the Popa origin");

    WindowEstimate out;
    const bool sup = ext == Extremum::sup;
    for (double delta : grid.delta_grid) {
        std::vector<double> s_points;
        for (double s : window_points(t, delta, grid.sub_grid, side))
            if (s > rho_star) s_points.push_back(s);
        std::vector<std::pair<double, double>> samples;
        for (double x : grid.x_values()) {
            double best = sup ? -kInf : kInf;
            for (int j = 0; j < grid.window_samples; ++j) {
                const double xj = x * std::pow(grid.ratio, static_cast<double>(j) / grid.window_samples);
                for (double s : s_points) {
                    const double r = delta_ratio(F, phi, psi, xj, s);
                    best = sup ? std::max(best, r) : std::min(best, r);
                }
            }
            samples.emplace_back(x, best);
        }
        out.per_delta.emplace_back(delta, extrapolate(std::move(samples), grid.tol));
    }

    // Linear trend in delta through the (up to) three smallest windows.
    const std::size_t n = out.per_delta.size();
    const std::size_t first = n > 3 ? n - 3 : 0;
    std::vector<double> ds;
    std::vector<double> vs;
    double proxy = 0.0;
    bool converged = true;
    for (std::size_t i = first; i < n; ++i) {
        ds.push_back(out.per_delta[i].first);
        vs.push_back(out.per_delta[i].second.value);
        proxy = std::max(proxy, out.per_delta[i].second.error_proxy);
        converged = converged && out.per_delta[i].second.converged;
    }
    const Line line = fit_line(ds, vs);
    out.limit.value = line.intercept;
    out.limit.error_proxy = proxy + line.rms;
    out.limit.converged = converged && std::isfinite(line.intercept);
    for (std::size_t i = 0; i < n; ++i) out.limit.samples.emplace_back(out.per_delta[i].first, out.per_delta[i].second.value);
    return out;
}

WindowEstimate window_sup_limit(const RealFunc& h, const FlowFunc& phi, const RealFunc& psi, double t,
                                const GridSpec& grid) {
    return window_limit(h, phi, psi, t, grid, WindowSide::right, Extremum::sup);
}

UniformityReport uniformity_report(const RealFunc& F, const FlowFunc& phi, const RealFunc& psi, double t,
                                   const GridSpec& grid, double tol) {
    UniformityReport r;
    r.upper = window_limit(F, phi, psi, t, grid, WindowSide::symmetric, Extremum::sup).limit;
    r.lower = window_limit(F, phi, psi, t, grid, WindowSide::symmetric, Extremum::inf).limit;
    r.pointwise = estimate_limit(F, phi, psi, t, grid, LimitMode::lim);
    if (!(r.upper.converged && r.lower.converged && r.pointwise.converged)) {
        r.uniform_verdict = Verdict::undecided;
    } else {
        const bool agree = std::abs(r.upper.value - r.pointwise.value) <= tol &&
                           std::abs(r.lower.value - r.pointwise.value) <= tol;
        r.uniform_verdict = agree ? Verdict::yes : Verdict::no;
    }
    return r;
}

MembershipReport membership_report(const RealFunc& F, const FlowFunc& phi, const RealFunc& psi, double t,
                                   const GridSpec& grid, double tol) {
    MembershipReport m;
    m.t = t;
    m.values = uniformity_report(F, phi, psi, t, grid, tol);
    const auto& pw = m.values.pointwise;
    if (pw.converged) {
        m.in_A_phi = Verdict::yes;
    } else {
        const LimitEstimate hi = estimate_limit(F, phi, psi, t, grid, LimitMode::limsup);
        const LimitEstimate lo = estimate_limit(F, phi, psi, t, grid, LimitMode::liminf);
        if (hi.converged && lo.converged && hi.value - lo.value > tol + hi.error_proxy + lo.error_proxy)
            m.in_A_phi = Verdict::no;
    }
    m.in_A_u = m.values.uniform_verdict;
    if (m.in_A_u == Verdict::yes && m.in_A_phi != Verdict::yes) m.in_A_u = Verdict::undecided;
    m.dagger = window_sup_limit(F, phi, psi, t, grid);
    m.in_A_dagger = (m.dagger.limit.converged && std::isfinite(m.dagger.limit.value)) ? Verdict::yes : Verdict::undecided;
    return m;
}

HeibergSenetaReport heiberg_seneta(const RealFunc& h, const FlowFunc& phi, const GridSpec& grid,
                                   std::vector<double> u_grid, double tol) {
    if (u_grid.empty()) throw BadParamError("Heiberg-Seneta check needs a u-grid");
    std::sort(u_grid.begin(), u_grid.end(), std::greater<>());
    if (!(u_grid.back() > 0.0)) throw BadParamError("u-grid radii must be positive");
    const double rho_star = phi.declared_rho ? PopaParams(*phi.declared_rho).rho_star() : -kInf;
    const RealFunc one = RealFunc::constant(1.0);

    HeibergSenetaReport r;
    r.u_grid = u_grid;
    double proxy = 0.0;
    bool converged = true;
    for (double u : u_grid) {
        const auto right = window_sup_limit(h, phi, one, u, grid).limit;
        double combined = right.value;
        double left_value = std::numeric_limits<double>::quiet_NaN();
        proxy = std::max(proxy, right.error_proxy);
        converged = converged && right.converged;
        if (-u > rho_star) {
            const auto left = window_sup_limit(h, phi, one, -u, grid).limit;
            left_value = left.value;
            combined = std::max(combined, left.value);
            proxy = std::max(proxy, left.error_proxy);
            converged = converged && left.converged;
        }
        r.upper_right.push_back(right.value);
        r.upper_left.push_back(left_value);
        r.combined.push_back(combined);
    }
    const std::size_t n = u_grid.size();
    const std::size_t first = n > 3 ? n - 3 : 0;
    std::vector<double> us(u_grid.begin() + first, u_grid.end());
    std::vector<double> cs(r.combined.begin() + first, r.combined.end());
    const Line line = fit_line(us, cs);
    r.margin = line.intercept;
    if (converged && r.margin <= tol)
        r.holds = Verdict::yes;
    else if (r.margin - proxy - line.rms > tol)
        r.holds = Verdict::no;
    else
        r.holds = Verdict::undecided;
    return r;
}

BoundednessScan boundedness_scan(const RealFunc& h, const FlowFunc& phi, const RealFunc& psi, double a, double b,
                                 int points, const GridSpec& grid) {
    if (points < 2 || !(b > a)) throw BadParamError("boundedness scan needs a < b and at least two points");
    BoundednessScan out;
    out.finite = true;
    out.max_value = -kInf;
    for (int i = 0; i < points; ++i) {
        const double t = a + (b - a) * i / (points - 1);
        auto w = window_sup_limit(h, phi, psi, t, grid);
        const double v = w.limit.value;
        if (!std::isfinite(v) || !w.limit.converged) out.finite = false;
        if (v > out.max_value) {
            out.max_value = v;
            out.argmax = t;
        }
        out.rows.emplace_back(t, std::move(w));
    }
    return out;
}

double hom_residual(const std::function<double(double)>& K, const PopaParams& p, double u, double v) {
    if (!p.in_G_plus(u) || !p.in_G_plus(v)) throw DomainError("hom_residual arguments must lie right of rho*");
    return K(circ(p, u, v)) - K(u) - K(v);
}

RealFunc sampled_function(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) throw BadParamError("a sampled function needs at least two samples");
    std::sort(samples.begin(), samples.end());
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i].first == samples[i - 1].first) throw BadParamError("sample abscissae must be distinct");
    const Interval dom = Interval::closed(samples.front().first, samples.back().first);
    return RealFunc(
        [samples](double t) {
            auto it = std::lower_bound(samples.begin(), samples.end(), std::make_pair(t, -kInf));
            if (it == samples.begin()) return it->second;
            if (it == samples.end()) return samples.back().second;
            if (it->first == t) return it->second;
            const auto& [t1, v1] = *it;
            const auto& [t0, v0] = *(it - 1);
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        },
        dom, "sampled");
}

const char* fit_model_name(FitModel m) {
    switch (m) {
        case FitModel::c_log_eta: return "c_log_eta";
        case FitModel::c_H_gamma: return "c_H_gamma";
        case FitModel::c_linear: return "c_linear";
        case FitModel::theorem8_rho_pos: return "theorem8_rho_pos";
    }
    return "unknown";
}

FitModel parse_fit_model(const std::string& name) {
    for (auto m : {FitModel::c_log_eta, FitModel::c_H_gamma, FitModel::c_linear, FitModel::theorem8_rho_pos})
        if (name == fit_model_name(m)) return m;
    throw BadParamError("unknown fit model '" + name + "'");
}

namespace {

struct ScaleFit {
    double c;
    double rss;
};

// Least-squares c for y ~ c * basis(t).
ScaleFit fit_scale(const std::vector<std::pair<double, double>>& s, const std::function<double(double)>& basis) {
    double sxx = 0.0;
    double sxy = 0.0;
    std::vector<double> b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        b[i] = basis(s[i].first);
        sxx += b[i] * b[i];
        sxy += b[i] * s[i].second;
    }
    if (!(sxx > 1e-300) || !std::isfinite(sxx)) throw DegenerateFitError("design column vanishes or overflows");
    const double c = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double r = s[i].second - c * b[i];
        rss += r * r;
    }
    return {c, rss};
}

// Minimises a one-dimensional objective over gamma: coarse scan, then Brent.
double minimise_gamma(const std::function<double(double)>& objective, double lo, double hi, int scan) {
    double best_g = lo;
    double best_v = kInf;
    std::vector<double> values(static_cast<std::size_t>(scan) + 1);
    for (int i = 0; i <= scan; ++i) {
        const double g = lo + (hi - lo) * i / scan;
        double v = kInf;
        try {
            v = objective(g);
        } catch (const Error&) {
        }
        if (!std::isfinite(v)) v = kInf;
        values[i] = v;
        if (v < best_v) {
            best_v = v;
            best_g = g;
        }
    }
    if (!std::isfinite(best_v)) throw DegenerateFitError("objective undefined over the whole gamma range");
    const double step = (hi - lo) / scan;
    auto safe = [&](double g) {
        try {
            const double v = objective(g);
            return std::isfinite(v) ? v : std::numeric_limits<double>::max();
        } catch (const Error&) {
            return std::numeric_limits<double>::max();
        }
    };
    auto r = boost::math::tools::brent_find_minima(safe, best_g - step, best_g + step,
                                                   std::numeric_limits<double>::digits);
    return r.second <= best_v ? r.first : best_g;
}

}  // namespace

FitResult fit_indices(const std::vector<std::pair<double, double>>& samples, const PopaParams& p, FitModel model) {
    if (samples.size() < 3) throw DegenerateFitError("at least three samples are needed");
    std::vector<double> ts;
    for (const auto& [t, v] : samples) {
        if (!std::isfinite(t) || !std::isfinite(v)) throw DegenerateFitError("samples must be finite");
        if (!p.in_G_plus(t)) throw DegenerateFitError("sample t = " + fmt(t) + " is not right of rho*");
        ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    if (std::adjacent_find(ts.begin(), ts.end()) != ts.end()) throw DegenerateFitError("sample t values must be distinct");

    FitResult out;
    out.model = model;
    out.samples = static_cast<int>(samples.size());
    const double rho = p.rho();
    const double n = static_cast<double>(samples.size());
    switch (model) {
        case FitModel::c_log_eta: {
            auto f = fit_scale(samples, [rho](double t) { return std::log1p(rho * t); });
            out.c = f.c;
            out.rms = std::sqrt(f.rss / n);
            break;
        }
        case FitModel::c_linear: {
            auto f = fit_scale(samples, [](double t) { return t; });
            out.c = f.c;
            out.rms = std::sqrt(f.rss / n);
            break;
        }
        case FitModel::c_H_gamma: {
            auto objective = [&](double g) {
                return fit_scale(samples, [g](double t) { return h_gamma(g, t); }).rss;
            };
            out.gamma = minimise_gamma(objective, -20.0, 20.0, 800);
            auto f = fit_scale(samples, [g = out.gamma](double t) { return h_gamma(g, t); });
            out.c = f.c;
            out.rms = std::sqrt(f.rss / n);
            break;
        }
        case FitModel::theorem8_rho_pos: {
            if (!(rho > 0.0)) throw DegenerateFitError("theorem8_rho_pos needs rho > 0");
            auto rss = [&](double g) {
                double ss = 0.0;
                for (const auto& [t, v] : samples) {
                    const double r = v - k_rho_gamma(rho, g + 1.0, t);
                    ss += r * r;
                }
                return ss;
            };
            out.gamma = minimise_gamma(rss, -20.0, 20.0, 800);
            out.c = 1.0;
            out.rms = std::sqrt(rss(out.gamma) / n);
            break;
        }
    }
    return out;
}

RhoFit fit_rho(const FlowFunc& phi, const GridSpec& grid, bool strict) {
    std::vector<double> ts;
    for (double t : grid.t_grid)
        if (t > 0.0) ts.push_back(t);
    if (ts.empty()) throw BadParamError("fit_rho needs positive t values");
    auto xs = grid.x_values();
    if (xs.size() < 2) throw BadParamError("fit_rho needs at least two grid points");
    auto slope = [&](double x) {
        double stt = 0.0;
        double ste = 0.0;
        for (double t : ts) {
            stt += t * t;
            ste += t * (eta_x(phi, x, t) - 1.0);
        }
        return ste / stt;
    };
    RhoFit out;
    out.rho = slope(xs.back());
    out.rho_second = slope(xs[xs.size() - 2]);
    out.error_proxy = std::abs(out.rho - out.rho_second);
    const double scale = std::max(std::abs(out.rho), std::abs(out.rho_second));
    out.non_se_warning = out.error_proxy > 0.1 * scale && out.error_proxy > 1e-12;
    if (strict && out.non_se_warning)
        throw NonSEWarning("eta-index estimates " + fmt(out.rho_second) + " and " + fmt(out.rho) + " differ by more than 10%");
    return out;
}

}  // namespace beurlab
