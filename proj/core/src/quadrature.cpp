#include "beurlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "beurlab/errors.hpp"

namespace beurlab {

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
    double a;
    double b;
    double value;
    double error;
    int depth;
    bool roundoff_limited;

    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment rule15(const std::function<double(double)>& f, double a, double b, int depth) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double gauss = fc * kWg[3];
    double kronrod = fc * kWgk[7];
    double resabs = std::abs(kronrod);
    double fv1[7];
    double fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double sum = fv1[j] + fv2[j];
        kronrod += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * kronrod;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

    const double len = std::abs(half);
    const double value = kronrod * half;
    resabs *= len;
    resasc *= len;
    double err = std::abs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double roundoff = 50.0 * kEps * resabs;
    bool limited = false;
    if (roundoff >= err) {
        err = roundoff;
        limited = true;
    }
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os.precision(17);
        os << "non-finite integrand on [" << a << ", " << b << "]";
        throw IntegrationError(os.str());
    }
    return {a, b, value, err, depth, limited};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
    QuadratureResult out;
    if (a == b) return out;
    if (!std::isfinite(a) || !std::isfinite(b)) throw IntegrationError("integration limits must be finite");
    if (b < a) {
        auto r = integrate(f, b, a, opts);
        r.value = -r.value;
        return r;
    }

    // Max-heap on error, kept in a vector so exact sums can be recomputed.
    std::vector<Segment> active;
    std::vector<Segment> settled;
    double total = 0.0;
    double total_err = 0.0;

    auto push = [&](const Segment& s) {
        total += s.value;
        total_err += s.error;
        out.evaluations += 15;
        if (s.roundoff_limited || s.depth >= opts.max_depth) {
            settled.push_back(s);
        } else {
            active.push_back(s);
            std::push_heap(active.begin(), active.end());
        }
    };
    auto resum = [&] {
        total = 0.0;
        total_err = 0.0;
        for (const auto* group : {&settled, &active})
            for (const auto& s : *group) {
                total += s.value;
                total_err += s.error;
            }
    };
    auto target = [&](double v) { return std::max(opts.abs_floor, opts.rel_tol * std::abs(v)); };

    push(rule15(f, a, b, 0));
    int intervals = 1;
    while (!active.empty()) {
        if (total_err <= target(total)) {
            // The running sums drift; confirm before stopping.
            resum();
            if (total_err <= target(total)) break;
        }
        if (intervals >= opts.max_intervals) break;
        std::pop_heap(active.begin(), active.end());
        Segment worst = active.back();
        active.pop_back();
        total -= worst.value;
        total_err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            worst.roundoff_limited = true;
            push(worst);
            continue;
        }
        push(rule15(f, worst.a, mid, worst.depth + 1));
        push(rule15(f, mid, worst.b, worst.depth + 1));
        ++intervals;
    }

    resum();
    const double value = total;
    const double err = total_err;
    const bool roundoff_only = active.empty();
    out.value = value;
    out.error = err;

    if (err > target(value)) {
        bool all_roundoff = roundoff_only && std::all_of(settled.begin(), settled.end(), [](const Segment& s) {
                                return s.roundoff_limited;
                            });
        if (!all_roundoff) {
            std::ostringstream os;
            os.precision(6);
            os << "quadrature on [" << a << ", " << b << "] stalled with error estimate " << err
               << " above target " << target(value);
            throw NonconvergenceError(os.str());
        }
    }
    return out;
}

QuadratureResult integrate(const std::function<double(double)>& f, const std::vector<double>& points,
                           const QuadratureOptions& opts) {
    QuadratureResult out;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        auto r = integrate(f, points[i], points[i + 1], opts);
        out.value += r.value;
        out.error += r.error;
        out.evaluations += r.evaluations;
    }
    return out;
}

QuadratureResult integrate_log(const std::function<double(double)>& f, double a, double b,
                               const QuadratureOptions& opts) {
    if (!(a > 0.0) || !(b > 0.0)) throw IntegrationError("log-variable quadrature needs positive limits");
    auto g = [&f](double s) {
        const double w = std::exp(s);
        return f(w) * w;
    };
    return integrate(g, std::log(a), std::log(b), opts);
}

}  // namespace beurlab
