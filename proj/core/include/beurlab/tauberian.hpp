#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beurlab/flows.hpp"
#include "beurlab/limits.hpp"
#include "beurlab/real_func.hpp"

namespace beurlab {

/// An integrable kernel. With compact = false the support is taken as the
/// range where |func| exceeds 1e-12 of its peak ("rapid decay").
struct ConvolutionKernel {
    RealFunc func;
    bool compact = true;
    double support_lo = 0.0;
    double support_hi = 0.0;
    /// Closed-form transform int K(t) e^{-2 pi i xi t} dt when known.
    std::function<std::complex<double>(double)> transform;
    bool integrable = true;
    std::string name;

    /// Interval carrying the mass of the kernel.
    std::pair<double, double> significant_support() const;
    /// Points inside the support where the kernel may jump or kink.
    std::vector<double> breakpoints;
};

ConvolutionKernel gaussian_kernel();                  ///< e^{-pi t^2}
ConvolutionKernel box_kernel(double lo = -0.5, double hi = 0.5);  ///< indicator of [lo, hi]
ConvolutionKernel triangle_kernel();                  ///< (1 - |t|)_+
ConvolutionKernel indicator_kernel(double t);         ///< t^{-1} 1_{[0,t]}
ConvolutionKernel zero_kernel();
ConvolutionKernel kernel_from_function(const RealFunc& f, double lo, double hi, std::string name = "custom");
/// a F + b G.
ConvolutionKernel combine(double a, const ConvolutionKernel& F, double b, const ConvolutionKernel& G);

double kernel_integral(const ConvolutionKernel& K);
std::complex<double> numeric_transform(const ConvolutionKernel& K, double xi);

/// int F(-t) H(x + t phi(x)) dt.
double convolve(const ConvolutionKernel& F, const RealFunc& H, const FlowFunc& phi, double x);

/// int F((x - u)/phi(x)) dU(u) / phi(x), by midpoint Stieltjes sums with
/// Richardson halving.
double convolve_stieltjes(const ConvolutionKernel& F, const RealFunc& U, const FlowFunc& phi, double x, double mesh);

struct WienerVerdict {
    bool passed = false;
    double min_abs = 0.0;
    double argmin_xi = 0.0;
    std::optional<double> first_failure_xi;  ///< smallest |xi| below threshold
    bool closed_form = false;
    std::string caveat;
};

WienerVerdict wiener_check(const ConvolutionKernel& K, double xi_max = 32.0, int n_points = 4097,
                           double threshold = 1e-6);

struct ClassMNorm {
    double value = 0.0;
    double tail = 0.0;
    bool infinite = false;
};

ClassMNorm class_m_norm(const RealFunc& f, int n_max, int y_points = 33, int x_points = 33);

struct BVReport {
    double delta = 0.0;
    double M_estimate = 0.0;
    std::vector<double> x_grid;
    std::vector<double> y_grid;
    double mesh = 0.0;
    std::vector<double> per_x_max;  ///< max over y at each x
    bool unbounded_trend = false;
};

BVReport bv_sup_estimate(const RealFunc& U, const FlowFunc& phi, double delta, const std::vector<double>& x_grid,
                         const std::vector<double>& y_grid, double mesh);

struct TauberianData {
    std::optional<RealFunc> H;  ///< Lebesgue branch
    std::optional<RealFunc> U;  ///< Stieltjes branch
};

struct ConvergenceRow {
    double x = 0.0;
    double value = 0.0;
    double target = 0.0;
};

struct TauberianResult {
    WienerVerdict wiener;
    std::vector<ConvergenceRow> hypothesis;
    std::vector<ConvergenceRow> conclusion;
    double hypothesis_error = 0.0;  ///< at the last grid point
    double conclusion_error = 0.0;
    bool passed = false;
    std::optional<BVReport> bv;
};

struct TauberianOptions {
    std::vector<double> x_grid{1e2, 1e3, 1e4};
    double tol = 0.01;
    double mesh = 0.01;
    double wiener_xi_max = 32.0;
    int wiener_points = 4097;
    double wiener_threshold = 1e-6;
};

/// Checks K *_phi H -> c int K along the grid and then G *_phi H -> c int G.
/// Throws WienerCheckFailure when K fails the transform check and
/// HypothesisFailure when the hypothesis table misses its target.
TauberianResult tauberian_experiment(const ConvolutionKernel& K, const ConvolutionKernel& G, const TauberianData& data,
                                     const FlowFunc& phi, double c_expected, const TauberianOptions& opts = {});

struct MovingAverageRow {
    double x = 0.0;
    double t = 0.0;
    double difference_ratio = 0.0;  ///< (U(x o t) - U(x)) / (t phi(x))
    double indicator_convolution = 0.0;
};

struct MovingAverageResult {
    std::vector<MovingAverageRow> rows;
    double c_estimate = 0.0;
    double max_deviation = 0.0;  ///< from c_estimate over all rows
};

/// Difference ratios and indicator-kernel convolutions of a non-decreasing
/// U at two step sizes; both estimate the same constant when U has a linear
/// moving average.
MovingAverageResult moving_average_equivalence(const RealFunc& U, const FlowFunc& phi,
                                               const std::vector<double>& x_grid,
                                               const std::vector<double>& t_values, double mesh = 0.01);

}  // namespace beurlab
