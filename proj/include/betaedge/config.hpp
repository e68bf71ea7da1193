#pragma once

#include "betaedge/scaling.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace betaedge {

// Raised for malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// beta as a function of n
struct BetaSchedule {
    enum class Kind { zero, nlog2, nlog, inv, power, fixed };
    Kind kind = Kind::zero;
    double c = 1.0;

    double at(double n) const {
        switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::nlog2: return c / (n * std::log(n) * std::log(n));
        case Kind::nlog: return c / (n * std::log(n));
        case Kind::inv: return c / n;
        case Kind::power: return std::pow(n, -c);
        case Kind::fixed: return c;
        }
        return 0.0;
    }

    std::string to_string() const {
        switch (kind) {
        case Kind::zero: return "zero";
        case Kind::nlog2: return "nlog2:" + format_double(c);
        case Kind::nlog: return "nlog:" + format_double(c);
        case Kind::inv: return "inv:" + format_double(c);
        case Kind::power: return "power:" + format_double(c);
        case Kind::fixed: return "fixed:" + format_double(c);
        }
        return "";
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

inline double parse_real(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        if (s == "inf" || s == "+inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        throw ConfigError(what + ": cannot parse '" + s + "' as a number");
    }
}

inline std::uint64_t parse_uint(const std::string& s, const std::string& what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError(what + ": expected a nonnegative integer, got '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw ConfigError(what + ": integer out of range '" + s + "'");
    }
}

// accepts 100000 and 1e5 style integers
inline std::uint64_t parse_count(const std::string& s, const std::string& what) {
    if (s.find_first_not_of("0123456789") == std::string::npos) return parse_uint(s, what);
    double v = parse_real(s, what);
    if (!(v >= 0) || v != std::floor(v) || v > 9e15) throw ConfigError(what + ": expected an integer, got '" + s + "'");
    return static_cast<std::uint64_t>(v);
}

} // namespace detail

inline BetaSchedule parse_beta_schedule(const std::string& text) {
    auto parts = detail::split(text, ':');
    if (parts.empty() || parts.size() > 2) throw ConfigError("beta-schedule: expected name[:c], got '" + text + "'");
    const std::string& name = parts[0];
    BetaSchedule b;
    if (name == "zero") b.kind = BetaSchedule::Kind::zero;
    else if (name == "nlog2") b.kind = BetaSchedule::Kind::nlog2;
    else if (name == "nlog") b.kind = BetaSchedule::Kind::nlog;
    else if (name == "inv") b.kind = BetaSchedule::Kind::inv;
    else if (name == "power") b.kind = BetaSchedule::Kind::power;
    else if (name == "fixed") b.kind = BetaSchedule::Kind::fixed;
    else throw ConfigError("beta-schedule: unknown name '" + name + "' (zero, nlog2, nlog, inv, power, fixed)");
    if (parts.size() == 2) b.c = detail::parse_real(parts[1], "beta-schedule");
    else if (b.kind == BetaSchedule::Kind::power || b.kind == BetaSchedule::Kind::fixed)
        throw ConfigError("beta-schedule: '" + name + "' needs a parameter");
    if (b.kind == BetaSchedule::Kind::zero) b.c = 0.0;
    if (!std::isfinite(b.c) || b.c < 0) throw ConfigError("beta-schedule: parameter must be finite and >= 0");
    return b;
}

inline DeltaSchedule parse_delta(const std::string& text) {
    auto parts = detail::split(text, ':');
    if (parts.size() != 2) throw ConfigError("delta: expected const:x | powlog:p | stretched:eps, got '" + text + "'");
    double v = detail::parse_real(parts[1], "delta");
    try {
        if (parts[0] == "const") return DeltaSchedule::constant(v);
        if (parts[0] == "powlog") return DeltaSchedule::power_log(v);
        if (parts[0] == "stretched") return DeltaSchedule::stretched(v);
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("delta: ") + e.what());
    }
    throw ConfigError("delta: unknown schedule '" + parts[0] + "'");
}

inline Interval parse_window(const std::string& text) {
    auto parts = detail::split(text, ',');
    if (parts.size() != 2) throw ConfigError("window: expected lo,hi, got '" + text + "'");
    Interval w{detail::parse_real(parts[0], "window"), detail::parse_real(parts[1], "window")};
    if (!(w.lo < w.hi) || std::isinf(w.lo)) throw ConfigError("window: need finite lo < hi");
    return w;
}

struct ExperimentConfig {
    std::string command;
    std::uint64_t seed = 1;
    std::uint64_t replicas = 1000;
    std::vector<std::uint64_t> n_list;
    std::vector<BetaSchedule> beta_schedules;
    double alpha = 1.0;
    DeltaSchedule delta = DeltaSchedule::constant(1.0);
    std::optional<Interval> window;
    std::optional<Interval> control_window;
    std::uint64_t k_top = 100;
    std::string null_model = "limit";  // limit | finite_n
    std::string intensity = "auto";    // auto | homogeneous | inhomogeneous
    std::uint64_t samples = 500;
    std::uint64_t jensen_samples = 50;
    std::vector<double> x_points{0.0};
    double bound_K = 1.0;
    std::vector<std::uint64_t> bound_k{1, 2, 3};
    double significance = 0.01;
    double spacing_ks = 0.05;
    double gumbel_ks = 0.05;
    bool emit_svg = false;
    unsigned threads = 0;
    std::string out = ".";
    std::vector<std::string> inputs; // figure

    // Canonical text of everything that influences results; threads and the
    // output directory are excluded.
    std::string canonical() const {
        std::ostringstream o;
        auto list = [](const auto& v, auto f) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + f(v[i]);
            return s;
        };
        auto u = [](std::uint64_t v) { return std::to_string(v); };
        auto d = [](double v) { return format_double(v); };
        o << "command=" << command << "\n";
        o << "seed=" << seed << "\n";
        o << "replicas=" << replicas << "\n";
        o << "n=" << list(n_list, u) << "\n";
        o << "beta_schedule=" << list(beta_schedules, [](const BetaSchedule& b) { return b.to_string(); }) << "\n";
        o << "alpha=" << d(alpha) << "\n";
        o << "delta=" << delta.to_string() << "\n";
        o << "window=" << (window ? d(window->lo) + "," + d(window->hi) : "default") << "\n";
        o << "control_window=" << (control_window ? d(control_window->lo) + "," + d(control_window->hi) : "none") << "\n";
        o << "k_top=" << k_top << "\n";
        o << "null=" << null_model << "\n";
        o << "intensity=" << intensity << "\n";
        o << "samples=" << samples << "\n";
        o << "jensen_samples=" << jensen_samples << "\n";
        o << "x=" << list(x_points, d) << "\n";
        o << "bound_K=" << d(bound_K) << "\n";
        o << "bound_k=" << list(bound_k, u) << "\n";
        o << "significance=" << d(significance) << "\n";
        o << "spacing_ks=" << d(spacing_ks) << "\n";
        o << "gumbel_ks=" << d(gumbel_ks) << "\n";
        o << "emit_svg=" << (emit_svg ? "true" : "false") << "\n";
        return o.str();
    }
};

// Flat key = value file; '#' starts a comment. Keys use dashes or underscores.
inline std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        for (auto& ch : key)
            if (ch == '-') ch = '_';
        std::string value = detail::trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        kv[key] = value;
    }
    return kv;
}

// Applies one key; unknown keys are errors.
inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
    using namespace detail;
    if (key == "seed") c.seed = parse_uint(value, key);
    else if (key == "replicas") c.replicas = parse_count(value, key);
    else if (key == "n") {
        c.n_list.clear();
        for (auto& s : split(value, ','))
            if (!s.empty()) c.n_list.push_back(parse_count(s, key));
        if (c.n_list.empty()) throw ConfigError("n: empty list");
    } else if (key == "beta_schedule") {
        c.beta_schedules.clear();
        for (auto& s : split(value, ','))
            if (!s.empty()) c.beta_schedules.push_back(parse_beta_schedule(s));
        if (c.beta_schedules.empty()) throw ConfigError("beta-schedule: empty list");
    } else if (key == "alpha") {
        c.alpha = parse_real(value, key);
        if (!(c.alpha > 0) || !std::isfinite(c.alpha)) throw ConfigError("alpha must be > 0");
    } else if (key == "delta") c.delta = parse_delta(value);
    else if (key == "window") c.window = parse_window(value);
    else if (key == "control_window") c.control_window = parse_window(value);
    else if (key == "k_top") c.k_top = parse_count(value, key);
    else if (key == "null") {
        if (value != "limit" && value != "finite_n") throw ConfigError("null: expected limit or finite_n");
        c.null_model = value;
    } else if (key == "intensity") {
        if (value != "auto" && value != "homogeneous" && value != "inhomogeneous")
            throw ConfigError("intensity: expected auto, homogeneous or inhomogeneous");
        c.intensity = value;
    } else if (key == "samples") c.samples = parse_count(value, key);
    else if (key == "jensen_samples") c.jensen_samples = parse_count(value, key);
    else if (key == "x") {
        c.x_points.clear();
        for (auto& s : split(value, ',')) c.x_points.push_back(parse_real(s, key));
    } else if (key == "bound_K") c.bound_K = parse_real(value, key);
    else if (key == "bound_k") {
        c.bound_k.clear();
        for (auto& s : split(value, ',')) c.bound_k.push_back(parse_count(s, key));
    } else if (key == "significance") c.significance = parse_real(value, key);
    else if (key == "spacing_ks") c.spacing_ks = parse_real(value, key);
    else if (key == "gumbel_ks") c.gumbel_ks = parse_real(value, key);
    else if (key == "emit_svg") {
        if (value == "true" || value == "1") c.emit_svg = true;
        else if (value == "false" || value == "0") c.emit_svg = false;
        else throw ConfigError("emit_svg: expected true or false");
    } else if (key == "threads") c.threads = static_cast<unsigned>(parse_uint(value, key));
    else if (key == "out") c.out = value;
    else if (key == "inputs") {
        c.inputs.clear();
        for (auto& s : split(value, ','))
            if (!s.empty()) c.inputs.push_back(s);
    } else throw ConfigError("unknown configuration key '" + key + "'");
}

// Command defaults, then invariants.
inline void finalize_config(ExperimentConfig& c) {
    if (c.n_list.empty()) {
        if (c.command == "lemmas") c.n_list = {100, 1000, 10000, 100000};
        else if (c.command == "correlation") c.n_list = {200, 1000, 5000};
        else c.n_list = {1000};
    }
    if (c.beta_schedules.empty()) {
        if (c.command == "lemmas") c.beta_schedules = {parse_beta_schedule("zero"), parse_beta_schedule("nlog2:1"), parse_beta_schedule("nlog:0.5")};
        else c.beta_schedules = {parse_beta_schedule("nlog2:1")};
    }
    if (c.replicas < 1) throw ConfigError("replicas must be >= 1");
    if (c.k_top < 1) throw ConfigError("k_top must be >= 1");
    for (std::size_t i = 0; i < c.n_list.size(); ++i) {
        if (c.n_list[i] < 3) throw ConfigError("n must be >= 3 (scaling needs log log n > 0)");
        if (i && c.n_list[i] <= c.n_list[i - 1]) throw ConfigError("n list must be strictly ascending");
    }
    if (c.samples < 100) throw ConfigError("samples must be >= 100");
    if (c.jensen_samples < 2) throw ConfigError("jensen_samples must be >= 2");
    if (c.x_points.empty()) throw ConfigError("x must list at least one point");
    if (!(c.bound_K > 0)) throw ConfigError("bound_K must be > 0");
    if (!(c.significance > 0 && c.significance < 1)) throw ConfigError("significance must lie in (0, 1)");
    if (!(c.spacing_ks > 0 && c.gumbel_ks > 0)) throw ConfigError("KS thresholds must be > 0");
}

} // namespace betaedge
