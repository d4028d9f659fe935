#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "beurlab/flows.hpp"
#include "beurlab/limits.hpp"
#include "beurlab/real_func.hpp"
#include "beurlab/tauberian.hpp"

namespace beurlab {

/// Flat key = value experiment description. Accessors throw ConfigError on
/// malformed values; defaults apply to absent keys.
class ExperimentConfig {
public:
    std::string command;

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    const std::map<std::string, std::string>& values() const { return values_; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::optional<double> get_optional_double(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    /// Comma-separated reals.
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
    /// Positive real; throws ConfigError otherwise.
    double get_tolerance(const std::string& key, double fallback) const;
    std::uint64_t seed() const;

    /// Every key whose value is a plain number, for binding expression
    /// parameters such as rho and gamma.
    std::map<std::string, double> numeric_params() const;

    /// "family" or "family:p1,p2" from the flow registry, otherwise an
    /// expression in x. Expressions take a declared index from <key>_rho
    /// and a lower domain bound from <key>_domain_min.
    FlowFunc get_flow(const std::string& key, const std::string& fallback) const;
    /// Expression in x, with domain (<key>_domain_min, inf) when given.
    RealFunc get_function(const std::string& key, const std::string& fallback) const;
    std::optional<RealFunc> get_optional_function(const std::string& key) const;
    /// gaussian, box[:lo,hi], triangle, indicator:t, zero, or an expression
    /// supported on <key>_support = "lo,hi".
    ConvolutionKernel get_kernel(const std::string& key, const std::string& fallback) const;
    /// GridSpec fields: x0, ratio, count, t_grid, delta_grid, window_samples,
    /// sub_grid, grid_tol.
    GridSpec get_grid() const;

private:
    std::map<std::string, std::string> values_;
};

/// Parses '#' comments, blank lines and "key = value" lines. A "command" key
/// sets the command.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace beurlab
