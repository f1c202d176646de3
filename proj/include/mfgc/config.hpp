#pragma once

// Flat "key = value" run configuration with '#' comments. Unknown and duplicate
// keys are rejected.

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "mfgc/core.hpp"

namespace mfgc {

/// Malformed configuration text. Exit code 1, like ValidationError.
class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

enum class OutputFormat : std::uint8_t { Csv, Structured };

enum class SweepAxis : std::uint8_t { B, F, QSoc, QInf, Lambda };

inline constexpr const char* to_string(SweepAxis a) noexcept
{
    switch (a) {
    case SweepAxis::B: return "b";
    case SweepAxis::F: return "f";
    case SweepAxis::QSoc: return "q_soc";
    case SweepAxis::QInf: return "q_inf";
    case SweepAxis::Lambda: return "lambda";
    }
    return "?";
}

inline double& axis_field(ModelParams& p, SweepAxis a) noexcept
{
    switch (a) {
    case SweepAxis::B: return p.b;
    case SweepAxis::F: return p.f;
    case SweepAxis::QSoc: return p.q_soc;
    case SweepAxis::QInf: return p.q_inf;
    case SweepAxis::Lambda: break;
    }
    return p.lambda;
}

struct SweepGrid {
    SweepAxis axis = SweepAxis::B;
    double from = 0.0;
    double to = 0.0;
    int points = 1;

    /// Evenly spaced grid; a single point sits at `from`.
    [[nodiscard]] double at(int i) const noexcept
    {
        if (points == 1) return from;
        return from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
};

struct RunConfig {
    ModelParams params;
    double dt = 0.01;
    double t_end = 50.0;
    std::int64_t N = 1000;
    std::uint64_t seed = 42;
    int replications = 20;
    PopulationState x0 = PopulationState::make(0.0, 1.0, 0.0);
    StrategyProfile strategy = kCorrupt;
    std::optional<SweepGrid> sweep;
    OutputFormat format = OutputFormat::Csv;
    std::string out; ///< empty: standard output
};

namespace detail {

inline std::string_view trim(std::string_view s) noexcept
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawEntry {
    std::string value;
    int line;
};

[[noreturn]] inline void config_fail(int line, std::string_view key, const std::string& what)
{
    throw ConfigError("line " + std::to_string(line) + ", key " + std::string(key) + ": " + what);
}

inline double parse_real(const RawEntry& e, std::string_view key)
{
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) config_fail(e.line, key, "expected a real number, got '" + e.value + "'");
    return v;
}

inline std::int64_t parse_integer(const RawEntry& e, std::string_view key)
{
    std::int64_t v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) config_fail(e.line, key, "expected an integer, got '" + e.value + "'");
    return v;
}

inline bool parse_control(const RawEntry& e, std::string_view key)
{
    if (e.value == "0") return false;
    if (e.value == "1") return true;
    config_fail(e.line, key, "control must be 0 or 1");
}

} // namespace detail

inline const std::set<std::string, std::less<>>& known_config_keys()
{
    static const std::set<std::string, std::less<>> keys{
        "lambda", "r", "b", "f", "q_soc", "q_inf", "w_R", "w_H", "w_C", "delta",
        "dt", "t_end", "N", "seed", "replications", "x0_R", "x0_H", "x0_C", "u_H", "u_C",
        "sweep_axis", "sweep_from", "sweep_to", "sweep_points", "format", "out"};
    return keys;
}

inline OutputFormat parse_format(std::string_view s)
{
    if (s == "csv") return OutputFormat::Csv;
    if (s == "structured") return OutputFormat::Structured;
    throw ConfigError("format must be csv or structured, got '" + std::string(s) + "'");
}

/// Parses and validates a run configuration. The nine model coefficients are
/// required; everything else has a default.
inline RunConfig parse_config(std::string_view text)
{
    std::map<std::string, detail::RawEntry, std::less<>> raw;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (!known_config_keys().contains(key)) detail::config_fail(line_no, key, "unknown key");
        if (value.empty()) detail::config_fail(line_no, key, "empty value");
        if (raw.contains(key)) detail::config_fail(line_no, key, "duplicate key");
        raw.emplace(std::string(key), detail::RawEntry{std::string(value), line_no});
    }

    RunConfig cfg;
    auto real = [&](const char* key, double& dst, bool required) {
        const auto it = raw.find(key);
        if (it == raw.end()) {
            if (required) throw ConfigError(std::string("missing required key ") + key);
            return;
        }
        dst = detail::parse_real(it->second, key);
    };
    ModelParams& p = cfg.params;
    real("lambda", p.lambda, true);
    real("r", p.r, true);
    real("b", p.b, true);
    real("f", p.f, true);
    real("q_soc", p.q_soc, true);
    real("q_inf", p.q_inf, true);
    real("w_R", p.w_R, true);
    real("w_H", p.w_H, true);
    real("w_C", p.w_C, true);
    if (raw.contains("delta")) {
        double d = 0.0;
        real("delta", d, true);
        p.delta = d;
    }
    validate_params(p);

    real("dt", cfg.dt, false);
    real("t_end", cfg.t_end, false);
    if (const auto it = raw.find("N"); it != raw.end()) cfg.N = detail::parse_integer(it->second, "N");
    if (const auto it = raw.find("seed"); it != raw.end()) {
        const auto s = detail::parse_integer(it->second, "seed");
        if (s < 0) detail::config_fail(it->second.line, "seed", "must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (const auto it = raw.find("replications"); it != raw.end()) {
        cfg.replications = static_cast<int>(detail::parse_integer(it->second, "replications"));
    }
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ValidationError("dt > 0 violated");
    if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) throw ValidationError("t_end > 0 violated");
    if (cfg.N < 1) throw ValidationError("N ≥ 1 violated");
    if (cfg.replications < 1) throw ValidationError("replications must be ≥ 1");

    const bool any_x0 = raw.contains("x0_R") || raw.contains("x0_H") || raw.contains("x0_C");
    if (any_x0) {
        double xr = 0.0;
        double xh = 0.0;
        double xc = 0.0;
        real("x0_R", xr, true);
        real("x0_H", xh, true);
        real("x0_C", xc, true);
        cfg.x0 = PopulationState::make(xr, xh, xc);
    }
    if (const auto it = raw.find("u_H"); it != raw.end()) cfg.strategy.u_H = detail::parse_control(it->second, "u_H");
    if (const auto it = raw.find("u_C"); it != raw.end()) cfg.strategy.u_C = detail::parse_control(it->second, "u_C");

    if (const auto it = raw.find("sweep_axis"); it != raw.end()) {
        SweepGrid g;
        const std::string& a = it->second.value;
        if (a == "b") g.axis = SweepAxis::B;
        else if (a == "f") g.axis = SweepAxis::F;
        else if (a == "q_soc") g.axis = SweepAxis::QSoc;
        else if (a == "q_inf") g.axis = SweepAxis::QInf;
        else if (a == "lambda") g.axis = SweepAxis::Lambda;
        else detail::config_fail(it->second.line, "sweep_axis", "must be one of b, f, q_soc, q_inf, lambda");
        real("sweep_from", g.from, true);
        real("sweep_to", g.to, true);
        if (const auto pt = raw.find("sweep_points"); pt != raw.end()) {
            g.points = static_cast<int>(detail::parse_integer(pt->second, "sweep_points"));
        } else {
            throw ConfigError("missing required key sweep_points");
        }
        if (!std::isfinite(g.from) || !std::isfinite(g.to)) throw ValidationError("sweep bounds must be finite");
        if (g.points < 1) throw ValidationError("sweep_points ≥ 1 violated");
        cfg.sweep = g;
    } else if (raw.contains("sweep_from") || raw.contains("sweep_to") || raw.contains("sweep_points")) {
        throw ConfigError("sweep grid given without sweep_axis");
    }

    if (const auto it = raw.find("format"); it != raw.end()) cfg.format = parse_format(it->second.value);
    if (const auto it = raw.find("out"); it != raw.end()) cfg.out = it->second.value;
    return cfg;
}

} // namespace mfgc
