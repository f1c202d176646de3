#pragma once

// Report generators behind the command-line subcommands. Every command writes
// to a caller-supplied stream and is deterministic given its configuration.

#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfgc/config.hpp"
#include "mfgc/core.hpp"
#include "mfgc/dynamics.hpp"
#include "mfgc/equilibria.hpp"
#include "mfgc/hjb.hpp"
#include "mfgc/stability.hpp"

namespace mfgc {

/// 17 significant digits; infinities as "+inf" / "-inf".
inline std::string format_real(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline nlohmann::json json_real(double v)
{
    if (std::isfinite(v)) return v;
    return format_real(v);
}

/// Verbal regime prediction from the threshold alone.
inline std::string regime_text(const ExtendedThreshold& xbar)
{
    const double x = xbar.value;
    if (xbar.indifferent_everywhere) return "indifferent everywhere (corruption and honesty pay equally)";
    if (x > 1.0 + kTieTolerance) return "unique corrupt equilibrium";
    if (x >= 1.0 - kTieTolerance) return "threshold tie at x_H = 1 (honest boundary indifferent)";
    if (x >= 0.0) return "honest boundary equilibrium present";
    return "honest boundary equilibrium present, corrupt behavior impossible";
}

inline void cmd_classify(const RunConfig& cfg, std::ostream& os)
{
    const ExtendedThreshold xbar = classifier_xbar(cfg.params);
    std::optional<ExtendedThreshold> discounted;
    if (cfg.params.delta) discounted = classifier_xbar_discounted(cfg.params, *cfg.params.delta);

    if (cfg.format == OutputFormat::Structured) {
        nlohmann::json j;
        j["x_bar"] = json_real(xbar.value);
        j["regime"] = regime_text(xbar);
        j["indifferent_everywhere"] = xbar.indifferent_everywhere;
        if (discounted) {
            j["delta"] = *cfg.params.delta;
            j["x_bar_discounted"] = json_real(discounted->value);
        }
        os << j.dump(2) << '\n';
        return;
    }
    os << "x_bar = " << format_real(xbar.value) << ", regime: " << regime_text(xbar) << '\n';
    if (discounted) {
        os << "x_bar(delta=" << format_real(*cfg.params.delta) << ") = " << format_real(discounted->value) << '\n';
    }
    if (xbar.indifferent_everywhere) {
        os << "warning: q_soc = 0 and the threshold bracket vanishes; every state is a tie\n";
    }
}

struct ClassifiedEquilibrium {
    EquilibriumReport report;
    StabilityVerdict verdict;
};

inline std::vector<ClassifiedEquilibrium> classified_equilibria(const ModelParams& p)
{
    std::vector<ClassifiedEquilibrium> out;
    for (auto& e : enumerate_equilibria(p)) {
        auto v = classify_equilibrium(p, e);
        out.push_back({std::move(e), v});
    }
    return out;
}

inline constexpr const char* kEquilibriaHeader =
    "provenance,behavior,x_R,x_H,x_C,u_H,u_C,stability,method,eig_re_1,eig_re_2,residual";

/// Equilibrium table (or structured document) plus an optional human summary.
inline void cmd_equilibria(const RunConfig& cfg, std::ostream& os, std::ostream* summary = nullptr)
{
    const auto rows = classified_equilibria(cfg.params);
    const ExtendedThreshold xbar = classifier_xbar(cfg.params);

    if (summary) {
        *summary << rows.size() << " stationary equilibri" << (rows.size() == 1 ? "um" : "a") << ", x_bar = "
                 << format_real(xbar.value) << '\n';
        for (const auto& [e, v] : rows) {
            *summary << "  " << to_string(e.provenance) << ": x = (" << format_real(e.state.R()) << ", "
                     << format_real(e.state.H()) << ", " << format_real(e.state.C()) << "), "
                     << to_string(e.behavior) << ", " << to_string(v.classification) << " ("
                     << to_string(v.method) << ")\n";
            for (const auto& w : e.diagnostics.warnings) *summary << "    warning: " << w << '\n';
        }
    }

    if (cfg.format == OutputFormat::Structured) {
        nlohmann::json doc;
        doc["x_bar"] = json_real(xbar.value);
        doc["equilibria"] = nlohmann::json::array();
        for (const auto& [e, v] : rows) {
            nlohmann::json flags = nlohmann::json::object();
            if (v.theorem_flags.corrupt_band) flags["corrupt_band"] = *v.theorem_flags.corrupt_band;
            if (v.theorem_flags.boundary_stable) flags["boundary_stable"] = *v.theorem_flags.boundary_stable;
            if (v.theorem_flags.interior_coefficients) {
                flags["interior_coefficients"] = *v.theorem_flags.interior_coefficients;
            }
            doc["equilibria"].push_back({
                {"provenance", to_string(e.provenance)},
                {"behavior", to_string(e.behavior)},
                {"state", {{"x_R", e.state.R()}, {"x_H", e.state.H()}, {"x_C", e.state.C()}}},
                {"strategy", {{"u_H", static_cast<int>(e.strategy.u_H)}, {"u_C", static_cast<int>(e.strategy.u_C)}}},
                {"stability",
                 {{"classification", to_string(v.classification)},
                  {"method", to_string(v.method)},
                  {"eigen_real_parts", {v.eigen_real_parts[0], v.eigen_real_parts[1]}},
                  {"theorem_flags", flags}}},
                {"diagnostics",
                 {{"q_value", e.diagnostics.q_value},
                  {"x_bar", json_real(e.diagnostics.x_bar.value)},
                  {"interior_condition", e.diagnostics.interior_condition},
                  {"corrupt_admissible", e.diagnostics.corrupt_admissible},
                  {"residual", e.diagnostics.residual},
                  {"warnings", e.diagnostics.warnings}}},
            });
        }
        os << doc.dump(2) << '\n';
        return;
    }

    os << kEquilibriaHeader << '\n';
    for (const auto& [e, v] : rows) {
        os << to_string(e.provenance) << ',' << to_string(e.behavior) << ',' << format_real(e.state.R()) << ','
           << format_real(e.state.H()) << ',' << format_real(e.state.C()) << ',' << int(e.strategy.u_H) << ','
           << int(e.strategy.u_C) << ',' << to_string(v.classification) << ',' << to_string(v.method) << ','
           << format_real(v.eigen_real_parts[0]) << ',' << format_real(v.eigen_real_parts[1]) << ','
           << format_real(e.diagnostics.residual) << '\n';
    }
}

inline constexpr const char* kTrajectoryHeader = "t,x_R,x_H,x_C";

/// ODE trajectory from cfg.x0 under cfg.strategy.
inline void cmd_simulate(const RunConfig& cfg, std::ostream& os)
{
    const Trajectory tr = integrate_ode(cfg.params, cfg.x0, cfg.strategy, cfg.t_end, cfg.dt);
    if (cfg.format == OutputFormat::Structured) {
        nlohmann::json j;
        j["method"] = tr.method;
        j["dt"] = tr.dt;
        j["strategy"] = {{"u_H", int(tr.strategy.u_H)}, {"u_C", int(tr.strategy.u_C)}};
        j["samples"] = nlohmann::json::array();
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            j["samples"].push_back(
                {{"t", tr.times[i]}, {"x_R", tr.states[i].R()}, {"x_H", tr.states[i].H()}, {"x_C", tr.states[i].C()}});
        }
        os << j.dump(2) << '\n';
        return;
    }
    os << kTrajectoryHeader << '\n';
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        os << format_real(tr.times[i]) << ',' << format_real(tr.states[i].R()) << ',' << format_real(tr.states[i].H())
           << ',' << format_real(tr.states[i].C()) << '\n';
    }
}

inline constexpr const char* kEventsHeader = "t,transition,n_R,n_H,n_C";

/// Event table of replication 0 and the replication-averaged distance to the ODE.
inline void cmd_ctmc(const RunConfig& cfg, std::ostream& os)
{
    const PopulationCounts n0 = round_counts(cfg.N, cfg.x0);
    // replication 0 uses the same derived stream as in lln_convergence
    const EventPath path = detail::simulate_population(cfg.params, n0, cfg.strategy, cfg.t_end,
                                                       CounterRng(cfg.seed).split(0));
    const double dist =
        lln_convergence(cfg.params, cfg.N, cfg.x0, cfg.strategy, cfg.t_end, cfg.replications, cfg.seed, cfg.dt);

    if (cfg.format == OutputFormat::Structured) {
        nlohmann::json j;
        j["N"] = cfg.N;
        j["seed"] = cfg.seed;
        j["initial"] = {{"n_R", n0.n_R}, {"n_H", n0.n_H}, {"n_C", n0.n_C}};
        j["events"] = nlohmann::json::array();
        for (const auto& e : path.events) {
            j["events"].push_back({{"t", e.t},
                                   {"transition", to_string(e.kind)},
                                   {"n_R", e.after.n_R},
                                   {"n_H", e.after.n_H},
                                   {"n_C", e.after.n_C}});
        }
        j["replications"] = cfg.replications;
        j["lln_distance"] = dist;
        os << j.dump(2) << '\n';
        return;
    }
    os << kEventsHeader << '\n';
    os << "0,init," << n0.n_R << ',' << n0.n_H << ',' << n0.n_C << '\n';
    for (const auto& e : path.events) {
        os << format_real(e.t) << ',' << to_string(e.kind) << ',' << e.after.n_R << ',' << e.after.n_H << ','
           << e.after.n_C << '\n';
    }
    os << "# lln_distance = " << format_real(dist) << " (N = " << cfg.N << ", replications = " << cfg.replications
       << ")\n";
}

inline constexpr const char* kSweepHeader =
    "param_value,x_bar,provenance,x_R,x_H,x_C,behavior,stability,residual,error";

struct SweepPoint {
    double value = 0.0;
    ExtendedThreshold x_bar;
    std::vector<ClassifiedEquilibrium> equilibria;
    std::string error;
};

inline std::vector<SweepPoint> run_sweep(const ModelParams& base, const SweepGrid& grid)
{
    std::vector<std::future<SweepPoint>> jobs;
    jobs.reserve(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        jobs.push_back(std::async(std::launch::async, [&base, &grid, i] {
            SweepPoint pt;
            pt.value = grid.at(i);
            ModelParams p = base;
            axis_field(p, grid.axis) = pt.value;
            try {
                validate_params(p);
                pt.x_bar = classifier_xbar(p);
                pt.equilibria = classified_equilibria(p);
            } catch (const std::exception& ex) {
                pt.error = ex.what();
                pt.equilibria.clear();
            }
            return pt;
        }));
    }
    std::vector<SweepPoint> out;
    out.reserve(jobs.size());
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

/// One row per grid point per equilibrium, ordered by grid then x_H. Failed
/// points keep a row with the message in the error column.
inline void cmd_sweep(const RunConfig& cfg, std::ostream& os)
{
    if (!cfg.sweep) throw ConfigError("sweep requires sweep_axis, sweep_from, sweep_to and sweep_points");
    const auto points = run_sweep(cfg.params, *cfg.sweep);

    if (cfg.format == OutputFormat::Structured) {
        nlohmann::json doc;
        doc["axis"] = to_string(cfg.sweep->axis);
        doc["points"] = nlohmann::json::array();
        for (const auto& pt : points) {
            nlohmann::json jp;
            jp["param_value"] = pt.value;
            if (!pt.error.empty()) {
                jp["error"] = pt.error;
            } else {
                jp["x_bar"] = json_real(pt.x_bar.value);
                jp["equilibria"] = nlohmann::json::array();
                for (const auto& [e, v] : pt.equilibria) {
                    jp["equilibria"].push_back({{"provenance", to_string(e.provenance)},
                                                {"x_R", e.state.R()},
                                                {"x_H", e.state.H()},
                                                {"x_C", e.state.C()},
                                                {"behavior", to_string(e.behavior)},
                                                {"stability", to_string(v.classification)},
                                                {"residual", e.diagnostics.residual}});
                }
            }
            doc["points"].push_back(jp);
        }
        os << doc.dump(2) << '\n';
        return;
    }

    os << kSweepHeader << '\n';
    for (const auto& pt : points) {
        if (!pt.error.empty()) {
            std::string msg = pt.error;
            for (char& c : msg) {
                if (c == ',' || c == '\n') c = ';';
            }
            os << format_real(pt.value) << ",,,,,,,,," << msg << '\n';
            continue;
        }
        for (const auto& [e, v] : pt.equilibria) {
            os << format_real(pt.value) << ',' << format_real(pt.x_bar.value) << ',' << to_string(e.provenance) << ','
               << format_real(e.state.R()) << ',' << format_real(e.state.H()) << ',' << format_real(e.state.C())
               << ',' << to_string(e.behavior) << ',' << to_string(v.classification) << ','
               << format_real(e.diagnostics.residual) << ",\n";
        }
    }
}

} // namespace mfgc
