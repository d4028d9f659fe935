#pragma once

#include <map>
#include <string>
#include <utility>

#include "beurlab/quadrature.hpp"
#include "beurlab/real_func.hpp"

namespace beurlab {

enum class KernelKind { eta, H_gamma, K_rho_gamma, tau_eta, flow_rate_f, exp_g };

struct KernelSpec {
    KernelKind kind = KernelKind::eta;
    double rho = 0.0;
    double gamma = 0.0;
    double c = 1.0;
};

const char* kernel_kind_name(KernelKind kind);
KernelKind parse_kernel_kind(const std::string& name);

/// Below this |gamma| the gamma-families switch to their series branch.
inline constexpr double kGammaSwitch = 1e-7;

/// (e^{gamma x} - 1)/gamma, with H_0(x) = x.
double h_gamma(double gamma, double x);
/// ((1 + rho x)^gamma - 1)/(rho gamma); log(1 + rho x)/rho at gamma = 0 and
/// x at rho = 0.
double k_rho_gamma(double rho, double gamma, double x);

double eval_kernel(const KernelSpec& spec, double x);
Interval kernel_domain(const KernelSpec& spec);
RealFunc kernel_function(const KernelSpec& spec);

/// Integral of dw/f(w) from base to x.
double tau_numeric(const RealFunc& f, double x, double base, const QuadratureOptions& opts = {});

enum class EquationId { GS, BFE, GFE, GBE_P, GBE_GROUP, CBE, GFI };

const char* equation_name(EquationId eq);

/// Function roles by name: "K", "kappa", "h", "g", "f", "eta".
/// GFE and GFI read the weight e^{gamma u} from role "g"; GBE_GROUP uses
/// roles K, h, g with the group operation on the right induced by g.
using FunctionRoles = std::map<std::string, RealFunc>;

/// Left and right sides of the equation at (u, v).
std::pair<double, double> fe_sides(EquationId eq, const FunctionRoles& funcs, double u, double v);

/// lhs - rhs, or for GFI the slack max(0, lhs - rhs) where differences at
/// rounding level count as zero.
double fe_residual(EquationId eq, const FunctionRoles& funcs, double u, double v);

/// Solution kernel of the Pexiderized Goldie-Beurling equation for
/// h = eta_rho and g = e^{gamma .} (rho = 0) or eta_rho^gamma (rho > 0).
KernelSpec solve_gbe_kernel(const KernelSpec& h, const KernelSpec& g, double c);

}  // namespace beurlab
