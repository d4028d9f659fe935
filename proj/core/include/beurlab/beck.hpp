#pragma once

#include <optional>
#include <vector>

#include "beurlab/flows.hpp"
#include "beurlab/real_func.hpp"

namespace beurlab {

/// x_{n+1} = x_n + step * phi(x_n).
struct BeckChain {
    FlowFunc phi;
    double x0 = 0.0;
    double step = 0.0;
    std::vector<double> values;
    double growth = 1.0;  ///< values.back() / values.front(), inf when x0 = 0
    bool divergent = false;
};

inline constexpr double kDivergenceRatio = 1e6;

BeckChain beck_sequence(const FlowFunc& phi, double x0, double u, int n);

/// u_0 = u, u_{k+1} = u + u_k phi(u); n + 1 values.
std::vector<double> gp_sequence(const FlowFunc& phi, double u, int n);

class Prop11Bounds {
public:
    /// Throws BadParamError unless a > 1, 0 < epsilon < 1, rho > 0 and
    /// C_minus > 0.
    Prop11Bounds(double rho, double a, double epsilon);

    double rho() const { return rho_; }
    double a() const { return a_; }
    double epsilon() const { return epsilon_; }
    double eta_a() const { return eta_a_; }
    double delta() const { return delta_; }
    double C_minus() const { return C_minus_; }
    double C_plus() const { return C_plus_; }
    /// log[eta(a(1+eps)) / min(1, rho(1+eps))]; always large enough for the
    /// log-sandwich upper side.
    double C_plus_safe() const { return C_plus_safe_; }

    double lower(int m) const;
    double upper(int m) const;

private:
    double rho_, a_, epsilon_, eta_a_, delta_, C_minus_, C_plus_, C_plus_safe_;
};

Prop11Bounds prop11_bounds(double rho, double a, double epsilon);

struct SandwichRow {
    int m = 0;
    double iterate = 0.0;  ///< a^m under the operation localised at x
    double value = 0.0;    ///< eta_rho(iterate)
    double root_ratio = 0.0;  ///< eta_x(iterate)^{1/m} / eta_rho(a)
    double lower = 0.0;
    double upper = 0.0;
    bool inside = false;
};

/// Bounds (ii) for m = 1..m_max at the point x.
std::vector<SandwichRow> prop11_sandwich(const Prop11Bounds& b, const FlowFunc& phi, double x, int m_max);

struct LogSandwichRow {
    double u = 0.0;
    int m = 0;  ///< a^m <= u < a^{m+1}
    double lower = 0.0;  ///< m C_-
    double log_u = 0.0;
    double upper = 0.0;  ///< (m+1) C_+
    bool holds = false;
};

/// Bound (iv) on a u-grid; every u must be >= a.
std::vector<LogSandwichRow> prop11_log_sandwich(const Prop11Bounds& b, const FlowFunc& phi, double x,
                                                const std::vector<double>& u_grid);

/// Closed form of b v_{n+1} - v_n = r^n with v_1 given.
double solve_recurrence(double b, double r, double v1, int n);
/// The same value by direct iteration.
double iterate_recurrence(double b, double r, double v1, int n);

struct Theorem10Row {
    double x = 0.0;
    double u = 0.0;
    double increment = 0.0;
    double ratio = 0.0;  ///< increment / log u
};

struct Theorem10Report {
    double C_hat = 0.0;
    std::vector<double> per_x;  ///< max ratio at each grid x
    bool bounded = false;
    std::optional<double> reference_C;  ///< 1/C_- for rho > 0
    std::vector<Theorem10Row> rows;
};

/// Empirical constant of h(x + u phi(x)) - h(x) <= C log u; bounded when the
/// per-x maxima change by at most 5% over the last grid step.
Theorem10Report theorem10_check(const RealFunc& h, const FlowFunc& phi, double a0, const std::vector<double>& x_grid,
                                const std::vector<double>& u_grid);

/// F(x) = b + c x + int_1^x e.
struct LinearPlusIntegral {
    double b = 0.0;
    double c = 0.0;
    RealFunc e;

    double operator()(double x) const;
};

struct RepresentationRow {
    double x = 0.0;
    double u = 0.0;
    double ratio = 0.0;  ///< (F(x o u) - F(x)) / (u phi(x))
};

struct ForwardRepresentation {
    std::vector<RepresentationRow> rows;
    double max_deviation_last = 0.0;  ///< max |ratio - c| at the largest x
    bool passed = false;
};

ForwardRepresentation represent_forward(const LinearPlusIntegral& F, const FlowFunc& phi,
                                        const std::vector<double>& x_grid, const std::vector<double>& u_grid,
                                        double tol = 0.01);

enum class ReconstructionMode { differencing, beck_chain };

struct ReconstructionRow {
    double x = 0.0;
    double e_hat = 0.0;
    double F = 0.0;
    double F_hat = 0.0;
    double rel_error = 0.0;
};

struct ReverseRepresentation {
    double c = 0.0;
    bool c_fitted = false;
    double X = 0.0;
    double u0 = 0.0;
    std::vector<ReconstructionRow> rows;
    double max_rel_error = 0.0;
};

/// e_hat(x) = (F(x o u0) - F(x)) / (u0 phi(x)) - c and
/// F_hat(x) = F(X) + c (x - X) + int_X^x e_hat. When c is absent it is taken
/// from the difference ratio at the largest grid point. Grid points must be
/// >= X.
ReverseRepresentation represent_reverse(const RealFunc& F, const FlowFunc& phi, std::optional<double> c, double X,
                                        const std::vector<double>& x_grid, double u0 = 0.01,
                                        ReconstructionMode mode = ReconstructionMode::differencing);

struct RieszResult {
    double mean = 0.0;             ///< (1/lambda(x)) int_base^x U dlambda
    double normalized_mean = 0.0;  ///< the same integral over lambda(x) - lambda(base)
    double lambda_ratio = 0.0;     ///< lambda(base) / lambda(x)
    double moving_average = 0.0;   ///< (U(x + phi(x)) - U(x)) / phi(x)
};

/// Mean of U against lambda = phi exp(tau_phi), by Stieltjes midpoint sums
/// with Richardson halving.
RieszResult riesz_mean(const RealFunc& U, const FlowFunc& phi, double x, double base);

}  // namespace beurlab
