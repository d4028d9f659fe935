#pragma once

// Seeded generators shared by the property tests. They use their own
// splitmix64 stream so test inputs do not depend on the library's RNG.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

namespace testgen {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bool coin() { return (next() & 1U) != 0; }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

private:
    std::uint64_t state_;
};

/// Element of the Popa group of index rho, away from the origin rho*.
inline double group_element(Gen& g, double rho) {
    if (rho == 0.0) return g.uniform(-3.0, 3.0);
    const double w = std::exp(g.uniform(-2.0, 2.0));
    return ((g.coin() ? -w : w) - 1.0) / rho;
}

/// Element of the positive half-group (eta_rho(u) > 0).
inline double positive_element(Gen& g, double rho) {
    if (rho == 0.0) return g.uniform(-2.0, 2.0);
    return (std::exp(g.uniform(-1.5, 1.5)) - 1.0) / rho;
}

/// Random expression source together with a hand-built evaluator, for the
/// reference-agreement and round-trip properties. Parameters rho = 0.5 and
/// gamma = 0.75 are assumed bound.
struct GeneratedExpr {
    std::string source;
    std::function<double(double)> eval;
};

GeneratedExpr random_expression(Gen& g, int depth);

}  // namespace testgen
