#pragma once

// Time-domain validation: RK4 integration of the mean-field drift, exact-event
// simulation of the finite-N chain and of a tagged agent, the law-of-large-numbers
// distance and the deviation-gain estimate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <numeric>
#include <string>
#include <vector>

#include "mfgc/core.hpp"
#include "mfgc/equilibria.hpp"
#include "mfgc/rng.hpp"

namespace mfgc {

struct Trajectory {
    std::vector<double> times;
    std::vector<PopulationState> states;
    StrategyProfile strategy;
    double dt = 0.0;
    std::string method = "rk4";

    [[nodiscard]] double horizon() const noexcept { return times.empty() ? 0.0 : times.back(); }
    [[nodiscard]] const PopulationState& final_state() const { return states.back(); }
};

/// Largest admissible fixed step for integrate_ode.
inline double max_stable_step(const ModelParams& p) noexcept { return 0.1 / p.rate_scale(); }

/// Number of whole steps of size dt in [0, t_end].
inline std::size_t step_count(double t_end, double dt) noexcept
{
    return static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
}

/// Classical fixed-step RK4 on the mean-field drift. Samples at t = k dt for
/// k = 0..floor(t_end/dt); each state is renormalized onto the simplex.
inline Trajectory integrate_ode(const ModelParams& p, const PopulationState& x0, const StrategyProfile& s,
                                double t_end, double dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt > 0 violated");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end ≥ 0 violated");
    if (dt > max_stable_step(p)) {
        throw NumericalGuardError("dt exceeds the step guard 0.1/(λ+r+b+q_soc+q_inf) = " +
                                  std::to_string(max_stable_step(p)));
    }
    const std::size_t n = step_count(t_end, dt);

    Trajectory tr;
    tr.strategy = s;
    tr.dt = dt;
    tr.times.reserve(n + 1);
    tr.states.reserve(n + 1);
    tr.times.push_back(0.0);
    tr.states.push_back(x0);

    using Vec = std::array<double, 3>;
    auto field = [&](const Vec& y) {
        // the drift is polynomial, so evaluate it directly on the raw stage values
        const double det = (p.b + p.q_soc * y[1]) * y[2];
        const double rec = p.r * y[0];
        const double sw = p.lambda * (y[1] * s.uH() - y[2] * s.uC());
        const double inf = p.q_inf * y[1] * y[2];
        return Vec{det - rec, rec - sw - inf, -det + sw + inf};
    };
    auto axpy = [](const Vec& y, double h, const Vec& k) { return Vec{y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]}; };

    Vec y = x0.components();
    for (std::size_t k = 1; k <= n; ++k) {
        const Vec k1 = field(y);
        const Vec k2 = field(axpy(y, 0.5 * dt, k1));
        const Vec k3 = field(axpy(y, 0.5 * dt, k2));
        const Vec k4 = field(axpy(y, dt, k3));
        for (std::size_t i = 0; i < 3; ++i) {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        const PopulationState next = PopulationState::renormalized(y[0], y[1], y[2]);
        y = next.components();
        tr.times.push_back(static_cast<double>(k) * dt);
        tr.states.push_back(next);
    }
    return tr;
}

/// Background held at `x` on [0, horizon].
inline Trajectory constant_background(const PopulationState& x, double horizon)
{
    Trajectory tr;
    tr.times = {0.0};
    tr.states = {x};
    if (horizon > 0.0) {
        tr.times.push_back(horizon);
        tr.states.push_back(x);
    }
    tr.method = "constant";
    return tr;
}

enum class PopulationEvent : std::uint8_t { CtoR, RtoH, HtoC, CtoH };

inline constexpr const char* to_string(PopulationEvent e) noexcept
{
    switch (e) {
    case PopulationEvent::CtoR: return "C->R";
    case PopulationEvent::RtoH: return "R->H";
    case PopulationEvent::HtoC: return "H->C";
    case PopulationEvent::CtoH: return "C->H";
    }
    return "?";
}

struct Event {
    double t = 0.0;
    PopulationEvent kind = PopulationEvent::CtoR;
    PopulationCounts after;
};

struct EventPath {
    PopulationCounts initial;
    std::vector<Event> events;
    std::uint64_t seed = 0;
    std::int64_t N = 0;
    double t_end = 0.0;

    /// Counts at time t (right-continuous).
    [[nodiscard]] PopulationCounts at(double t) const
    {
        auto it = std::upper_bound(events.begin(), events.end(), t,
                                   [](double v, const Event& e) { return v < e.t; });
        return it == events.begin() ? initial : std::prev(it)->after;
    }

    /// Fraction path sampled at sorted times.
    [[nodiscard]] std::vector<PopulationState> sample(const std::vector<double>& times) const
    {
        std::vector<PopulationState> out;
        out.reserve(times.size());
        std::size_t k = 0;
        PopulationCounts cur = initial;
        for (double t : times) {
            while (k < events.size() && events[k].t <= t) cur = events[k++].after;
            out.push_back(cur.fractions());
        }
        return out;
    }
};

namespace detail {

inline EventPath simulate_population(const ModelParams& p, const PopulationCounts& n0, const StrategyProfile& s,
                                     double t_end, CounterRng rng)
{
    EventPath path;
    path.initial = PopulationCounts::make(n0.n_R, n0.n_H, n0.n_C);
    path.N = n0.total();
    path.t_end = t_end;

    static constexpr std::array<PopulationEvent, 4> kinds{PopulationEvent::CtoR, PopulationEvent::RtoH,
                                                          PopulationEvent::HtoC, PopulationEvent::CtoH};
    PopulationCounts n = path.initial;
    double t = 0.0;
    for (;;) {
        const auto table = population_rates(p, n, s);
        const double total = table.total();
        if (!(total > 0.0)) break;
        const double tau = rng.exponential(total);
        if (t + tau > t_end) break;
        t += tau;
        const double pick = rng.uniform() * total;
        // falls back to the last positive entry if rounding leaves pick >= acc
        std::size_t k = 0;
        double acc = 0.0;
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (table.entries()[i].rate == 0.0) continue;
            acc += table.entries()[i].rate;
            k = i;
            if (pick < acc) break;
        }
        const Transition& tr = table.entries()[k];
        --n[tr.from];
        ++n[tr.to];
        path.events.push_back({t, kinds[k], n});
    }
    return path;
}

} // namespace detail

/// Exact-event simulation of the N-agent chain up to t_end, or until no
/// transition has positive rate.
inline EventPath simulate_population(const ModelParams& p, const PopulationCounts& n0, const StrategyProfile& s,
                                     double t_end, std::uint64_t seed)
{
    if (!(t_end >= 0.0)) throw ValidationError("t_end ≥ 0 violated");
    auto path = detail::simulate_population(p, n0, s, t_end, CounterRng(seed));
    path.seed = seed;
    return path;
}

struct AgentJump {
    double t = 0.0;
    State state = State::H;
};

/// Piecewise-constant path of one agent; jumps.front() is the start at t = 0.
struct AgentPath {
    std::vector<AgentJump> jumps;
    double horizon = 0.0;

    /// Time spent in each state over [0, horizon], indexed by State.
    [[nodiscard]] std::array<double, 3> occupation_times() const
    {
        std::array<double, 3> occ{};
        for (std::size_t k = 0; k < jumps.size(); ++k) {
            const double until = k + 1 < jumps.size() ? jumps[k + 1].t : horizon;
            occ[index_of(jumps[k].state)] += until - jumps[k].t;
        }
        return occ;
    }
};

namespace detail {

inline AgentPath simulate_tagged_agent(const ModelParams& p, const Trajectory& background, const StrategyProfile& u,
                                       State start, CounterRng& rng)
{
    AgentPath path;
    path.horizon = background.horizon();
    path.jumps.push_back({0.0, start});
    State cur = start;
    double t = 0.0;
    for (std::size_t k = 0; k + 1 < background.times.size(); ++k) {
        const double seg_end = background.times[k + 1];
        const auto table = individual_rates(p, background.states[k], u);
        for (;;) {
            const double out = table.exit_rate(cur);
            if (!(out > 0.0)) break;
            const double tau = rng.exponential(out);
            if (t + tau >= seg_end) break; // memoryless: restart the clock in the next segment
            t += tau;
            const double pick = rng.uniform() * out;
            double acc = 0.0;
            State next = cur;
            for (const auto& e : table) {
                if (e.from != cur || e.rate == 0.0) continue;
                acc += e.rate;
                next = e.to;
                if (pick < acc) break;
            }
            cur = next;
            path.jumps.push_back({t, cur});
        }
        t = seg_end;
    }
    return path;
}

} // namespace detail

/// One agent playing `u` against `background`; rates are held at the background
/// sample that opens each interval.
inline AgentPath simulate_tagged_agent(const ModelParams& p, const Trajectory& background, const StrategyProfile& u,
                                       std::uint64_t seed, State start = State::H)
{
    if (background.times.empty()) throw ValidationError("background trajectory is empty");
    CounterRng rng(seed);
    return detail::simulate_tagged_agent(p, background, u, start, rng);
}

/// Sup-norm distance between the replication-averaged empirical fraction path of
/// the N-agent chain and the ODE path, both sampled on the ODE grid.
inline double lln_convergence(const ModelParams& p, std::int64_t N, const PopulationState& x0,
                              const StrategyProfile& s, double t_end, int replications, std::uint64_t seed,
                              double dt = 0.01)
{
    if (replications < 1) throw ValidationError("replications must be ≥ 1");
    if (N < 1) throw ValidationError("population size N must be at least 1");
    const Trajectory ode = integrate_ode(p, x0, s, t_end, dt);
    const PopulationCounts n0 = round_counts(N, x0);
    const CounterRng root(seed);

    std::vector<std::future<std::vector<PopulationState>>> jobs;
    jobs.reserve(static_cast<std::size_t>(replications));
    for (int rep = 0; rep < replications; ++rep) {
        jobs.push_back(std::async(std::launch::async, [&, rep] {
            return detail::simulate_population(p, n0, s, t_end, root.split(static_cast<std::uint64_t>(rep)))
                .sample(ode.times);
        }));
    }
    std::vector<std::array<double, 3>> mean(ode.times.size(), {0.0, 0.0, 0.0});
    for (auto& job : jobs) {
        const auto samples = job.get();
        for (std::size_t i = 0; i < samples.size(); ++i) {
            for (std::size_t c = 0; c < 3; ++c) mean[i][c] += samples[i].components()[c];
        }
    }
    double dist = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        for (std::size_t c = 0; c < 3; ++c) {
            dist = std::max(dist, std::abs(mean[i][c] / replications - ode.states[i].components()[c]));
        }
    }
    return dist;
}

/// Flow payoff per unit time in each state while the crowd sits at x; the fine
/// enters as the detection-rate-weighted flow -(b + q_soc x_H) f in C.
inline std::array<double, 3> payoff_flows(const ModelParams& p, const PopulationState& x) noexcept
{
    return {p.w_R, p.w_H, p.w_C - (p.b + p.q_soc * x.H()) * p.f};
}

struct DeviationGainEstimate {
    double baseline_mean = 0.0;
    double deviation_mean = 0.0;
    double gain = 0.0;
    double standard_error = 0.0;
    int replications = 0;
    double horizon = 0.0;
    StrategyProfile baseline_strategy;
    StrategyProfile best_deviation;
};

namespace detail {

struct MeanAndError {
    double mean = 0.0;
    double standard_error = 0.0;
};

inline MeanAndError mean_and_error(const std::vector<double>& v)
{
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

} // namespace detail

/// Accumulated payoff over [0, horizon] of a tagged agent following each strategy
/// profile against the crowd frozen at e.state. Each replication averages a cohort
/// of N independent agents whose start states are drawn from e.state.
/// gain = best alternative profile minus e.strategy.
inline DeviationGainEstimate deviation_gain(const ModelParams& p, const EquilibriumReport& e, double horizon,
                                            std::int64_t N, int replications, std::uint64_t seed)
{
    if (replications < 1) throw ValidationError("replications must be ≥ 1");
    if (N < 1) throw ValidationError("cohort size N must be at least 1");
    if (!(horizon >= 0.0)) throw ValidationError("horizon ≥ 0 violated");

    DeviationGainEstimate est;
    est.replications = replications;
    est.horizon = horizon;
    est.baseline_strategy = e.strategy;
    if (horizon == 0.0) {
        est.best_deviation = e.strategy == kAllProfiles[0] ? kAllProfiles[1] : kAllProfiles[0];
        return est;
    }

    const Trajectory background = constant_background(e.state, horizon);
    const auto flows = payoff_flows(p, e.state);
    const CounterRng root(seed);

    auto run_profile = [&](std::size_t profile_index) {
        const StrategyProfile u = kAllProfiles[profile_index];
        std::vector<double> per_rep(static_cast<std::size_t>(replications));
        for (int rep = 0; rep < replications; ++rep) {
            CounterRng rng = root.split(profile_index).split(static_cast<std::uint64_t>(rep));
            double total = 0.0;
            for (std::int64_t a = 0; a < N; ++a) {
                const double pick = rng.uniform();
                const State start = pick < e.state.R() ? State::R
                                    : pick < e.state.R() + e.state.H() ? State::H
                                                                       : State::C;
                const auto occ = detail::simulate_tagged_agent(p, background, u, start, rng).occupation_times();
                total += occ[0] * flows[0] + occ[1] * flows[1] + occ[2] * flows[2];
            }
            per_rep[static_cast<std::size_t>(rep)] = total / static_cast<double>(N);
        }
        return detail::mean_and_error(per_rep);
    };

    std::vector<std::future<detail::MeanAndError>> jobs;
    for (std::size_t k = 0; k < kAllProfiles.size(); ++k) {
        jobs.push_back(std::async(std::launch::async, run_profile, k));
    }
    std::array<detail::MeanAndError, 4> results{};
    for (std::size_t k = 0; k < kAllProfiles.size(); ++k) results[k] = jobs[k].get();

    std::size_t base = 0;
    for (std::size_t k = 0; k < kAllProfiles.size(); ++k) {
        if (kAllProfiles[k] == e.strategy) base = k;
    }
    std::size_t best = base == 0 ? 1 : 0;
    for (std::size_t k = 0; k < kAllProfiles.size(); ++k) {
        if (k != base && results[k].mean > results[best].mean) best = k;
    }
    est.baseline_mean = results[base].mean;
    est.deviation_mean = results[best].mean;
    est.gain = est.deviation_mean - est.baseline_mean;
    est.standard_error = std::hypot(results[base].standard_error, results[best].standard_error);
    est.best_deviation = kAllProfiles[best];
    return est;
}

} // namespace mfgc
