#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "beurlab/popa.hpp"
#include "beurlab/real_func.hpp"

namespace beurlab {

/// An auxiliary function phi > 0 together with its claimed eta-index.
struct FlowFunc {
    RealFunc func;
    std::optional<double> declared_rho;
    std::string family;
    double default_base = 1.0;

    double operator()(double x) const { return func(x); }
    double domain_min() const { return func.domain().lo; }
    /// rho of the limit eta, 0 when nothing is declared.
    double rho() const { return declared_rho.value_or(0.0); }
};

/// Registry families: constant [k], power [alpha], log [], linear [rho],
/// linear_plus_root [rho]. Throws UnknownFamilyError / BadParamError.
FlowFunc make_function(const std::string& family, const std::vector<double>& params);

/// phi defined by an expression in x; no declared index unless one is given.
FlowFunc make_function(const RealFunc& phi, std::optional<double> declared_rho = std::nullopt);

/// Names accepted by make_function.
const std::vector<std::string>& flow_families();

double eta_x(const FlowFunc& phi, double x, double t);
LocalContext local_context(const FlowFunc& phi, double x);

double tau_phi(const FlowFunc& phi, double x, double base);
double tau_phi(const FlowFunc& phi, double x);

inline constexpr double kDefaultUpperBracket = 1e18;

/// x with tau_phi(x) = y, by exponential bracketing then safeguarded Newton.
double tau_phi_inverse(const FlowFunc& phi, double y, double base,
                       double upper_bracket = kDefaultUpperBracket);

/// Occupation time from a base point together with its inverse and
/// g = phi o tau^{-1}. A table of tau at 1024 knots seeds the inversions.
class TimeChange {
public:
    TimeChange(FlowFunc phi, double base, double upper_bracket = kDefaultUpperBracket);

    double tau_at(double x) const;
    double tau_inv_at(double y) const;
    double g_at(double y) const;

    RealFunc tau() const;
    RealFunc tau_inv() const;
    RealFunc g() const;

    double base() const;
    const FlowFunc& phi() const;
    std::size_t knot_count() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

struct TimeChangeResult {
    TimeChange change;
    RealFunc V;  ///< U o tau^{-1}
};

TimeChangeResult time_change(const RealFunc& U, const FlowFunc& phi, double base);

/// [tau(x + s phi(x)) - tau(x)] - tau_eta(s) with eta's index taken from
/// phi's declared rho.
double prop1_residual(const FlowFunc& phi, double x, double s, double base);

}  // namespace beurlab
