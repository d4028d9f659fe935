#pragma once

#include <string>
#include <vector>

#include "beurlab/real_func.hpp"

namespace beurlab {

/// Index rho >= 0 of a Popa circle group and its origin rho* (-1/rho, or
/// -inf when rho = 0).
class PopaParams {
public:
    explicit PopaParams(double rho = 0.0);

    double rho() const { return rho_; }
    double rho_star() const { return rho_star_; }
    bool in_G_plus(double u) const { return u > rho_star_; }
    /// True when u is within the near-origin guard band around rho*.
    bool near_origin(double u) const;

private:
    double rho_;
    double rho_star_;
};

inline constexpr double kOriginGuard = 1e-13;

/// Scale used by every residual comparison: max(1, |lhs|, |rhs|).
double residual_scale(double lhs, double rhs);

double circ(const PopaParams& p, double a, double b);
double inv(const PopaParams& p, double u);
/// 1 + rho x (the Golab-Schinzel solution eta_rho).
double eta(const PopaParams& p, double x);
/// 1 + rho x for rho > 0 and e^x for rho = 0.
double eta_star(const PopaParams& p, double x);
double reflect(const PopaParams& p, double u);

/// Localisation of phi at the point x.
struct LocalContext {
    RealFunc phi;
    double x = 1.0;
    double rho = 0.0;  ///< index of the limit eta used by identity (iii)

    LocalContext(RealFunc phi_, double x_, double rho_ = 0.0);

    double phi_x() const { return phi_x_; }
    /// phi(x + s phi(x)) / phi(x).
    double eta_x(double s) const;
    /// x + s phi(x).
    double shift(double s) const { return x + s * phi_x_; }
    LocalContext at(double y) const { return LocalContext(phi, y, rho); }

private:
    double phi_x_;
};

double circ_local(const LocalContext& ctx, double s, double t);
/// a^n under the localised operation, evaluated by the recurrence
/// a^{n+1} = a^n o a with a^0 = 0.
double iterate_local(const LocalContext& ctx, double a, int n);
/// Inverse of b under the localised operation: -b / eta_x(b).
double inv_local(const LocalContext& ctx, double b);

struct ResidualEntry {
    std::string identity;
    int samples = 0;
    double max_abs = 0.0;
    double max_scaled = 0.0;
    double worst_lhs = 0.0;
    double worst_rhs = 0.0;
    std::vector<double> worst_sample;
};

struct ResidualReport {
    std::vector<ResidualEntry> entries;

    void record(const std::string& identity, double lhs, double rhs, const std::vector<double>& sample);
    void merge(const ResidualReport& other);
    const ResidualEntry* find(const std::string& identity) const;
    double max_scaled() const;
};

/// Residuals of the localised-arithmetic identities at (a, b, m); the sample
/// vector attached to each entry is {x, a, b, m}.
ResidualReport check_prop2(const LocalContext& ctx, double a, double b, int m);

}  // namespace beurlab
