#include "beurlab/tauberian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "beurlab/errors.hpp"
#include "beurlab/parallel.hpp"
#include "beurlab/quadrature.hpp"

namespace beurlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSupportSamples = 8192;
constexpr int kMaxStieltjesCells = 1 << 22;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

ConvolutionKernel compact_kernel(RealFunc::Fn fn, double lo, double hi, std::string name) {
    ConvolutionKernel k;
    k.func = RealFunc(std::move(fn), Interval::real_line(), name);
    k.compact = true;
    k.support_lo = lo;
    k.support_hi = hi;
    k.name = std::move(name);
    return k;
}

// Support split at interior breakpoints, ascending and deduplicated.
std::vector<double> split_points(const ConvolutionKernel& K, std::pair<double, double> sup) {
    std::vector<double> pts{sup.first};
    for (double b : K.breakpoints)
        if (b > sup.first && b < sup.second) pts.push_back(b);
    pts.push_back(sup.second);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

QuadratureResult integrate_checked(const std::function<double(double)>& f, const std::vector<double>& pts,
                                   double abs_floor = 1e-15) {
    if (pts.size() < 2 || pts.front() == pts.back()) return {};
    QuadratureOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_floor = abs_floor;
    try {
        return integrate(f, pts, opts);
    } catch (const NonconvergenceError& e) {
        throw IntegrationError(e.what());
    }
}

std::complex<double> transform_on(const ConvolutionKernel& K, const std::vector<double>& pts, double xi) {
    // Transforms vanish at the points of interest, where a relative target is
    // meaningless; 1e-13 sits far below any Wiener threshold in use.
    constexpr double kTransformFloor = 1e-13;
    const double w = 2.0 * kPi * xi;
    const double re =
        integrate_checked([&](double t) { return K.func(t) * std::cos(w * t); }, pts, kTransformFloor).value;
    const double im =
        integrate_checked([&](double t) { return K.func(t) * std::sin(w * t); }, pts, kTransformFloor).value;
    return {re, -im};
}

}  // namespace

std::pair<double, double> ConvolutionKernel::significant_support() const {
    if (compact) return {support_lo, support_hi};
    // support_lo/support_hi bound the search box for rapid-decay kernels.
    const double step = (support_hi - support_lo) / kSupportSamples;
    std::vector<double> values(kSupportSamples + 1);
    double peak = 0.0;
    for (int i = 0; i <= kSupportSamples; ++i) {
        values[i] = std::abs(func(support_lo + i * step));
        peak = std::max(peak, values[i]);
    }
    if (peak == 0.0) return {0.0, 0.0};
    const double cut = 1e-12 * peak;
    int first = 0;
    while (values[first] <= cut) ++first;
    int last = kSupportSamples;
    while (values[last] <= cut) --last;
    return {support_lo + std::max(0, first - 1) * step, support_lo + std::min(kSupportSamples, last + 1) * step};
}

ConvolutionKernel gaussian_kernel() {
    ConvolutionKernel k;
    k.func = RealFunc([](double t) { return std::exp(-kPi * t * t); }, Interval::real_line(), "gaussian");
    k.compact = false;
    k.support_lo = -64.0;
    k.support_hi = 64.0;
    k.transform = [](double xi) { return std::complex<double>(std::exp(-kPi * xi * xi), 0.0); };
    k.name = "gaussian";
    return k;
}

ConvolutionKernel box_kernel(double lo, double hi) {
    if (!(lo < hi)) throw BadParamError("box kernel needs lo < hi");
    return compact_kernel([lo, hi](double t) { return (t >= lo && t <= hi) ? 1.0 : 0.0; }, lo, hi, "box");
}

ConvolutionKernel triangle_kernel() {
    auto k = compact_kernel([](double t) { return std::max(0.0, 1.0 - std::abs(t)); }, -1.0, 1.0, "triangle");
    k.breakpoints = {0.0};
    return k;
}

ConvolutionKernel indicator_kernel(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw BadParamError("indicator kernel needs t > 0");
    return compact_kernel([t](double s) { return (s >= 0.0 && s <= t) ? 1.0 / t : 0.0; }, 0.0, t, "indicator");
}

ConvolutionKernel zero_kernel() {
    auto k = compact_kernel([](double) { return 0.0; }, -0.5, 0.5, "zero");
    k.transform = [](double) { return std::complex<double>(0.0, 0.0); };
    return k;
}

ConvolutionKernel kernel_from_function(const RealFunc& f, double lo, double hi, std::string name) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw BadParamError("kernel support must be a finite interval");
    return compact_kernel(
        [f, lo, hi](double t) { return (t >= lo && t <= hi) ? f(t) : 0.0; }, lo, hi, std::move(name));
}

ConvolutionKernel combine(double a, const ConvolutionKernel& F, double b, const ConvolutionKernel& G) {
    ConvolutionKernel k;
    RealFunc f = F.func;
    RealFunc g = G.func;
    k.name = fmt(a) + "*" + F.name + "+" + fmt(b) + "*" + G.name;
    k.func = RealFunc([a, b, f, g](double t) { return a * f(t) + b * g(t); }, Interval::real_line(), k.name);
    k.compact = F.compact && G.compact;
    k.support_lo = std::min(F.support_lo, G.support_lo);
    k.support_hi = std::max(F.support_hi, G.support_hi);
    if (F.transform && G.transform) {
        auto tf = F.transform;
        auto tg = G.transform;
        k.transform = [a, b, tf, tg](double xi) { return a * tf(xi) + b * tg(xi); };
    }
    k.integrable = F.integrable && G.integrable;
    k.breakpoints = F.breakpoints;
    k.breakpoints.insert(k.breakpoints.end(), G.breakpoints.begin(), G.breakpoints.end());
    for (double e : {F.support_lo, F.support_hi, G.support_lo, G.support_hi})
        if (e > k.support_lo && e < k.support_hi) k.breakpoints.push_back(e);
    return k;
}

double kernel_integral(const ConvolutionKernel& K) {
    const auto pts = split_points(K, K.significant_support());
    return integrate_checked([&](double t) { return K.func(t); }, pts).value;
}

std::complex<double> numeric_transform(const ConvolutionKernel& K, double xi) {
    return transform_on(K, split_points(K, K.significant_support()), xi);
}

double convolve(const ConvolutionKernel& F, const RealFunc& H, const FlowFunc& phi, double x) {
    const double p = phi(x);
    const auto [lo, hi] = F.significant_support();
    if (lo == hi) return 0.0;
    // F(-t) lives on t in [-hi, -lo].
    for (double t : {-hi, -lo}) {
        const double u = x + t * p;
        if (!H.domain().contains(u))
            throw DomainError("convolution leaves the domain " + H.domain().to_string() + " at u = " + fmt(u));
    }
    auto pts = split_points(F, {lo, hi});
    for (double& v : pts) v = -v;
    std::reverse(pts.begin(), pts.end());
    return integrate_checked([&](double t) { return F.func(-t) * H(x + t * p); }, pts).value;
}

double convolve_stieltjes(const ConvolutionKernel& F, const RealFunc& U, const FlowFunc& phi, double x, double mesh) {
    if (!(mesh > 0.0)) throw BadParamError("mesh must be positive");
    const double p = phi(x);
    const auto [lo, hi] = F.significant_support();
    if (lo == hi) return 0.0;
    auto pts = split_points(F, {lo, hi});
    for (double& v : pts) v = -v;
    std::reverse(pts.begin(), pts.end());

    std::vector<int> cells;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        cells.push_back(std::max(1, static_cast<int>(std::ceil((pts[i + 1] - pts[i]) / mesh))));

    auto midpoint_sum = [&](int factor) {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const int n = cells[i] * factor;
            const double h = (pts[i + 1] - pts[i]) / n;
            double u_prev = U(x + pts[i] * p);
            for (int j = 0; j < n; ++j) {
                const double t1 = (j + 1 == n) ? pts[i + 1] : pts[i] + (j + 1) * h;
                const double u_next = U(x + t1 * p);
                s += F.func(-(pts[i] + (j + 0.5) * h)) * (u_next - u_prev);
                u_prev = u_next;
            }
        }
        return s / p;
    };

    int total = 0;
    for (int c : cells) total += c;
    double coarse = midpoint_sum(1);
    double previous = kInf;
    for (int factor = 2; static_cast<long long>(total) * factor <= kMaxStieltjesCells; factor *= 2) {
        const double fine = midpoint_sum(factor);
        const double extrapolated = fine + (fine - coarse) / 3.0;
        if (std::abs(extrapolated - previous) <= 1e-8 * std::max(1.0, std::abs(extrapolated))) return extrapolated;
        previous = extrapolated;
        coarse = fine;
    }
    throw NonconvergenceError("Stieltjes sums did not settle at x = " + fmt(x) + "; integrator may not be of bounded variation at this scale");
}

WienerVerdict wiener_check(const ConvolutionKernel& K, double xi_max, int n_points, double threshold) {
    if (!(xi_max > 0.0) || n_points < 2 || !(threshold > 0.0)) throw BadParamError("bad Wiener grid");
    WienerVerdict v;
    v.closed_form = static_cast<bool>(K.transform);
    std::vector<double> pts;
    if (!v.closed_form) pts = split_points(K, K.significant_support());
    const auto n = static_cast<std::size_t>(n_points);
    const auto mags = parallel_map(n, [&](std::size_t i) {
        const double xi = -xi_max + 2.0 * xi_max * static_cast<double>(i) / static_cast<double>(n - 1);
        if (v.closed_form) return std::abs(K.transform(xi));
        if (pts.size() < 2 || pts.front() == pts.back()) return 0.0;
        return std::abs(transform_on(K, pts, xi));
    });
    v.min_abs = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = -xi_max + 2.0 * xi_max * static_cast<double>(i) / static_cast<double>(n - 1);
        if (mags[i] < v.min_abs) {
            v.min_abs = mags[i];
            v.argmin_xi = xi;
        }
        if (mags[i] <= threshold) {
            const bool better = !v.first_failure_xi || std::abs(xi) < std::abs(*v.first_failure_xi) ||
                                (std::abs(xi) == std::abs(*v.first_failure_xi) && xi > *v.first_failure_xi);
            if (better) v.first_failure_xi = xi;
        }
    }
    v.passed = v.min_abs > threshold;
    v.caveat = "transform checked on " + std::to_string(n_points) + " points of [-" + fmt(xi_max) + ", " +
               fmt(xi_max) + "]; a grid check cannot certify nonvanishing on the whole line";
    return v;
}

ClassMNorm class_m_norm(const RealFunc& f, int n_max, int y_points, int x_points) {
    if (n_max < 0 || y_points < 1 || x_points < 2) throw BadParamError("bad class-M grid");
    ClassMNorm out;
    double peak_term = 0.0;
    for (int j = 0; j < y_points; ++j) {
        const double y = static_cast<double>(j) / y_points;
        double sum = 0.0;
        double tail = 0.0;
        for (int n = -n_max; n <= n_max; ++n) {
            double cell = 0.0;
            for (int i = 0; i < x_points; ++i) {
                const double xv = static_cast<double>(i) / (x_points - 1);
                cell = std::max(cell, std::abs(f(xv + y + n)));
            }
            sum += cell;
            peak_term = std::max(peak_term, cell);
            if (std::abs(n) == n_max) tail = std::max(tail, cell);
        }
        out.value = std::max(out.value, sum);
        out.tail = std::max(out.tail, tail);
    }
    if (out.tail > 0.0 && out.tail >= 0.1 * peak_term) {
        out.infinite = true;
        out.value = kInf;
    }
    return out;
}

BVReport bv_sup_estimate(const RealFunc& U, const FlowFunc& phi, double delta, const std::vector<double>& x_grid,
                         const std::vector<double>& y_grid, double mesh) {
    if (!(delta > 0.0) || !(mesh > 0.0)) throw BadParamError("delta and mesh must be positive");
    BVReport r;
    r.delta = delta;
    r.mesh = mesh;
    r.x_grid = x_grid;
    r.y_grid = y_grid;
    const int cells = std::max(1, static_cast<int>(std::ceil(delta / mesh)));
    r.per_x_max = parallel_map(x_grid.size(), [&](std::size_t k) {
        const double x = x_grid[k];
        const double p = phi(x);
        double best = 0.0;
        for (double y : y_grid) {
            double tv = 0.0;
            double prev = U(x + y * p);
            for (int i = 1; i <= cells; ++i) {
                const double next = U(x + (y + delta * i / cells) * p);
                tv += std::abs(next - prev);
                prev = next;
            }
            best = std::max(best, tv / p);
        }
        return best;
    });
    for (double m : r.per_x_max) r.M_estimate = std::max(r.M_estimate, m);
    if (r.per_x_max.size() >= 2) {
        bool increasing = true;
        for (std::size_t i = 1; i < r.per_x_max.size(); ++i)
            increasing = increasing && r.per_x_max[i] > r.per_x_max[i - 1];
        const double first = r.per_x_max.front();
        r.unbounded_trend = increasing && first > 0.0 && r.per_x_max.back() / first > 2.0;
    }
    return r;
}

TauberianResult tauberian_experiment(const ConvolutionKernel& K, const ConvolutionKernel& G, const TauberianData& data,
                                     const FlowFunc& phi, double c_expected, const TauberianOptions& opts) {
    if (data.H.has_value() == data.U.has_value()) throw BadParamError("exactly one of H or U must be supplied");
    if (opts.x_grid.empty()) throw BadParamError("empty x-grid");
    if (!(opts.tol > 0.0)) throw BadParamError("tolerance must be positive");

    TauberianResult res;
    res.wiener = wiener_check(K, opts.wiener_xi_max, opts.wiener_points, opts.wiener_threshold);
    if (!res.wiener.passed) {
        std::string where = res.wiener.first_failure_xi ? fmt(*res.wiener.first_failure_xi) : fmt(res.wiener.argmin_xi);
        throw WienerCheckFailure("kernel " + K.name + " transform falls to " + fmt(res.wiener.min_abs) +
                                 " at xi = " + where);
    }

    if (data.U) {
        res.bv = bv_sup_estimate(*data.U, phi, 1.0, opts.x_grid, {0.0, 0.5, 1.0}, opts.mesh);
        if (res.bv->unbounded_trend)
            throw HypothesisFailure("variation of U over unit windows grows along the x-grid");
    }

    auto table = [&](const ConvolutionKernel& kernel) {
        const double target = c_expected * kernel_integral(kernel);
        return parallel_map(opts.x_grid.size(), [&](std::size_t i) {
            const double x = opts.x_grid[i];
            const double v =
                data.H ? convolve(kernel, *data.H, phi, x) : convolve_stieltjes(kernel, *data.U, phi, x, opts.mesh);
            return ConvergenceRow{x, v, target};
        });
    };

    res.hypothesis = table(K);
    res.hypothesis_error = std::abs(res.hypothesis.back().value - res.hypothesis.back().target);
    if (res.hypothesis_error > opts.tol)
        throw HypothesisFailure("hypothesis table ends " + fmt(res.hypothesis_error) + " away from its limit");

    res.conclusion = table(G);
    res.conclusion_error = std::abs(res.conclusion.back().value - res.conclusion.back().target);
    res.passed = res.conclusion_error <= opts.tol;
    return res;
}

MovingAverageResult moving_average_equivalence(const RealFunc& U, const FlowFunc& phi,
                                               const std::vector<double>& x_grid,
                                               const std::vector<double>& t_values, double mesh) {
    if (x_grid.empty() || t_values.empty()) throw BadParamError("empty grid");
    MovingAverageResult out;
    for (double x : x_grid) {
        const double p = phi(x);
        for (double t : t_values) {
            MovingAverageRow row;
            row.x = x;
            row.t = t;
            row.difference_ratio = (U(x + t * p) - U(x)) / (t * p);
            row.indicator_convolution = convolve_stieltjes(indicator_kernel(t), U, phi, x, mesh);
            out.rows.push_back(row);
        }
    }
    double sum = 0.0;
    for (const auto& r : out.rows) sum += r.difference_ratio + r.indicator_convolution;
    out.c_estimate = sum / (2.0 * out.rows.size());
    for (const auto& r : out.rows)
        out.max_deviation = std::max({out.max_deviation, std::abs(r.difference_ratio - out.c_estimate),
                                      std::abs(r.indicator_convolution - out.c_estimate)});
    return out;
}

}  // namespace beurlab
