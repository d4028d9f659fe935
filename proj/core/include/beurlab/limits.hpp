#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "beurlab/flows.hpp"
#include "beurlab/popa.hpp"
#include "beurlab/real_func.hpp"

namespace beurlab {

/// Discretisation of "x -> infinity" (a geometric x-grid) and "delta -> 0".
struct GridSpec {
    double x0 = 100.0;
    double ratio = 10.0;
    int count = 5;
    std::vector<double> t_grid{0.5, 1.0, 2.0};
    std::vector<double> delta_grid{0.5, 0.25, 0.1, 0.05, 0.02};
    int window_samples = 64;  ///< x-samples per ratio-window for limsup/liminf
    int sub_grid = 33;        ///< s-samples per delta-window
    double tol = 1e-6;        ///< convergence tolerance on the error proxy

    std::vector<double> x_values() const;
    /// Throws BadParamError when the grid is malformed or some t <= rho_star.
    void validate(double rho_star = -kInf) const;
};

struct LimitEstimate {
    double value = 0.0;
    double error_proxy = kInf;
    bool converged = false;
    std::vector<std::pair<double, double>> samples;  ///< (x, value)
};

enum class LimitMode { lim, limsup, liminf };
enum class Verdict { yes, no, undecided };

const char* verdict_name(Verdict v);

/// (F(x + t phi(x)) - F(x)) / psi(x).
double delta_ratio(const RealFunc& F, const FlowFunc& phi, const RealFunc& psi, double x, double t);

/// Accelerated limit of a sequence sampled along a geometric x-grid.
LimitEstimate extrapolate(std::vector<std::pair<double, double>> samples, double tol);

LimitEstimate estimate_limit(const RealFunc& F, const FlowFunc& phi, const RealFunc& psi, double t,
                             const GridSpec& grid, LimitMode mode = LimitMode::lim);

enum class WindowSide { right, symmetric };
enum class Extremum { sup, inf };

struct WindowEstimate {
    LimitEstimate limit;  ///< delta -> 0 extrapolation
    std::vector<std::pair<double, LimitEstimate>> per_delta;
};

/// lim_{delta->0} limsup_x sup_{s in window} delta_ratio(F, phi, psi, x, s).
WindowEstimate window_limit(const RealFunc& F, const FlowFunc& phi, const RealFunc& psi, double t,
                            const GridSpec& grid, WindowSide side, Extremum ext);

/// One-sided windowed sup-limit over [t, t + delta).
WindowEstimate window_sup_limit(const RealFunc& h, const FlowFunc& phi, const RealFunc& psi, double t,
                                const GridSpec& grid);

struct UniformityReport {
    LimitEstimate upper;
    LimitEstimate lower;
    LimitEstimate pointwise;
    Verdict uniform_verdict = Verdict::undecided;
};

UniformityReport uniformity_report(const RealFunc& F, const FlowFunc& phi, const RealFunc& psi, double t,
                                   const GridSpec& grid, double tol = 0.01);

struct MembershipReport {
    double t = 0.0;
    Verdict in_A_phi = Verdict::undecided;
    Verdict in_A_u = Verdict::undecided;
    Verdict in_A_dagger = Verdict::undecided;
    UniformityReport values;
    WindowEstimate dagger;
};

MembershipReport membership_report(const RealFunc& F, const FlowFunc& phi, const RealFunc& psi, double t,
                                   const GridSpec& grid, double tol = 0.01);

struct HeibergSenetaReport {
    Verdict holds = Verdict::undecided;
    double margin = 0.0;  ///< u -> 0 extrapolation of max(H(u), H(-u))
    std::vector<double> u_grid;
    std::vector<double> upper_right;  ///< H(u)
    std::vector<double> upper_left;   ///< H(-u), NaN where -u <= rho*
    std::vector<double> combined;
};

HeibergSenetaReport heiberg_seneta(const RealFunc& h, const FlowFunc& phi, const GridSpec& grid,
                                   std::vector<double> u_grid = {0.5, 0.25, 0.1, 0.05, 0.02}, double tol = 0.01);

struct BoundednessScan {
    bool finite = false;
    double max_value = 0.0;
    double argmax = 0.0;
    std::vector<std::pair<double, WindowEstimate>> rows;
};

/// Windowed sup-limits over an evenly spaced t-grid on [a, b].
BoundednessScan boundedness_scan(const RealFunc& h, const FlowFunc& phi, const RealFunc& psi, double a, double b,
                                 int points, const GridSpec& grid);

/// K(u o v) - K(u) - K(v).
double hom_residual(const std::function<double(double)>& K, const PopaParams& p, double u, double v);

/// Piecewise-linear interpolant through (t, value) samples, defined on
/// [t_min, t_max].
RealFunc sampled_function(std::vector<std::pair<double, double>> samples);

enum class FitModel { c_log_eta, c_H_gamma, c_linear, theorem8_rho_pos };

const char* fit_model_name(FitModel m);
FitModel parse_fit_model(const std::string& name);

struct FitResult {
    FitModel model = FitModel::c_linear;
    double c = 1.0;
    double gamma = 0.0;
    double rms = 0.0;
    int samples = 0;
};

FitResult fit_indices(const std::vector<std::pair<double, double>>& samples, const PopaParams& p, FitModel model);

struct RhoFit {
    double rho = 0.0;
    double error_proxy = 0.0;
    double rho_second = 0.0;  ///< estimate at the second-largest grid x
    bool non_se_warning = false;
};

/// Slope of eta_x(t) - 1 against t at the two largest grid points; with
/// strict = true a disagreement beyond 10% throws NonSEWarning.
RhoFit fit_rho(const FlowFunc& phi, const GridSpec& grid, bool strict = false);

}  // namespace beurlab
