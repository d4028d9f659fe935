#include "beurlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "beurlab/errors.hpp"
#include "beurlab/exprlang.hpp"

namespace beurlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_double(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) return std::nullopt;
    const char* begin = s.data();
    if (*begin == '+') ++begin;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) {
        auto v = to_double(part);
        if (!v) throw ConfigError("key '" + key + "': '" + part + "' is not a number");
        out.push_back(*v);
    }
    return out;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    const std::string k = trim(key);
    if (k.empty()) throw ConfigError("empty key");
    if (k == "command")
        command = trim(value);
    else
        values_[k] = trim(value);
}

bool ExperimentConfig::has(const std::string& key) const {
    return values_.count(key) > 0;
}

std::string ExperimentConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
    auto v = get_optional_double(key);
    return v ? *v : fallback;
}

std::optional<double> ExperimentConfig::get_optional_double(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    auto v = to_double(it->second);
    if (!v) throw ConfigError("key '" + key + "': '" + it->second + "' is not a number");
    return v;
}

long long ExperimentConfig::get_int(const std::string& key, long long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& s = it->second;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("key '" + key + "': '" + s + "' is not an integer");
    return v;
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ConfigError("key '" + key + "': '" + it->second + "' is not a boolean");
}

std::vector<double> ExperimentConfig::get_list(const std::string& key, const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_list(key, it->second);
}

double ExperimentConfig::get_tolerance(const std::string& key, double fallback) const {
    const double v = get_double(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("key '" + key + "': tolerance must be positive");
    return v;
}

std::uint64_t ExperimentConfig::seed() const {
    const long long s = get_int("seed", 1);
    if (s < 0) throw ConfigError("seed must be non-negative");
    return static_cast<std::uint64_t>(s);
}

std::map<std::string, double> ExperimentConfig::numeric_params() const {
    std::map<std::string, double> out;
    for (const auto& [k, v] : values_)
        if (auto d = to_double(v)) out[k] = *d;
    return out;
}

RealFunc ExperimentConfig::get_function(const std::string& key, const std::string& fallback) const {
    const std::string src = get_string(key, fallback);
    Interval dom = Interval::real_line();
    if (auto lo = get_optional_double(key + "_domain_min")) dom = Interval::open_above(*lo);
    try {
        return Expression(src, numeric_params()).to_func(dom);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

std::optional<RealFunc> ExperimentConfig::get_optional_function(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_function(key, "");
}

FlowFunc ExperimentConfig::get_flow(const std::string& key, const std::string& fallback) const {
    const std::string spec = get_string(key, fallback);
    const auto colon = spec.find(':');
    const std::string head = trim(spec.substr(0, colon));
    const auto& families = flow_families();
    try {
        if (std::find(families.begin(), families.end(), head) != families.end()) {
            std::vector<double> params;
            if (colon != std::string::npos) params = parse_list(key, spec.substr(colon + 1));
            return make_function(head, params);
        }
        RealFunc f = get_function(key, fallback);
        return make_function(f, get_optional_double(key + "_rho"));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

ConvolutionKernel ExperimentConfig::get_kernel(const std::string& key, const std::string& fallback) const {
    const std::string spec = get_string(key, fallback);
    const auto colon = spec.find(':');
    const std::string head = trim(spec.substr(0, colon));
    std::vector<double> params;
    const bool named = head == "gaussian" || head == "box" || head == "triangle" || head == "indicator" ||
                       head == "zero";
    try {
        if (named && colon != std::string::npos) params = parse_list(key, spec.substr(colon + 1));
        auto need = [&](std::size_t lo, std::size_t hi) {
            if (params.size() < lo || params.size() > hi)
                throw ConfigError("key '" + key + "': wrong number of kernel parameters");
        };
        if (head == "gaussian") {
            need(0, 0);
            return gaussian_kernel();
        }
        if (head == "box") {
            if (params.empty()) return box_kernel();
            need(2, 2);
            return box_kernel(params[0], params[1]);
        }
        if (head == "triangle") {
            need(0, 0);
            return triangle_kernel();
        }
        if (head == "indicator") {
            need(1, 1);
            return indicator_kernel(params[0]);
        }
        if (head == "zero") {
            need(0, 0);
            return zero_kernel();
        }
        const auto support = get_list(key + "_support", {-1.0, 1.0});
        if (support.size() != 2) throw ConfigError("key '" + key + "_support' needs two values");
        return kernel_from_function(get_function(key, fallback), support[0], support[1], spec);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

GridSpec ExperimentConfig::get_grid() const {
    GridSpec g;
    g.x0 = get_double("x0", g.x0);
    g.ratio = get_double("ratio", g.ratio);
    g.count = static_cast<int>(get_int("count", g.count));
    g.t_grid = get_list("t_grid", g.t_grid);
    g.delta_grid = get_list("delta_grid", g.delta_grid);
    g.window_samples = static_cast<int>(get_int("window_samples", g.window_samples));
    g.sub_grid = static_cast<int>(get_int("sub_grid", g.sub_grid));
    g.tol = get_tolerance("grid_tol", g.tol);
    try {
        g.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    return g;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int number = 0;
    while (std::getline(is, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
        cfg.set(key, line.substr(eq + 1));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace beurlab
