#pragma once

// Domain types, parameter validation, the mean-field drift and the transition
// rate tables of the three-state corruption model (states R, H, C).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mfgc {

/// Raised when parameters, states or configuration violate their invariants.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical guard trips (step-size limits, singular systems).
class NumericalGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Agent states, always ordered (R, H, C).
enum class State : std::uint8_t { R = 0, H = 1, C = 2 };

inline constexpr std::array<State, 3> kAllStates{State::R, State::H, State::C};

inline constexpr const char* to_string(State s) noexcept
{
    switch (s) {
    case State::R: return "R";
    case State::H: return "H";
    case State::C: return "C";
    }
    return "?";
}

inline constexpr std::size_t index_of(State s) noexcept { return static_cast<std::size_t>(s); }

/// Exogenous coefficients of the game. Rates are per unit time, wages per unit time,
/// the fine in payoff units.
struct ModelParams {
    double lambda = 1.0; ///< rate of executing a switching intent
    double r = 1.0;      ///< recruitment rate R -> H
    double b = 1.0;      ///< principal's detection effort
    double f = 0.0;      ///< fine on detection
    double q_soc = 0.0;  ///< social-norm detection coefficient
    double q_inf = 0.0;  ///< infection coefficient
    double w_R = 0.0;
    double w_H = 1.0;
    double w_C = 10.0;
    std::optional<double> delta; ///< discount rate, used only by discounted operations

    /// Sum of all rate coefficients; bounds the stiffness of the drift.
    [[nodiscard]] double rate_scale() const noexcept { return lambda + r + b + q_soc + q_inf; }
};

/// Returns `p` unchanged if every coefficient assumption holds, otherwise throws
/// ValidationError naming the first violated inequality.
inline ModelParams validate_params(const ModelParams& p)
{
    auto require = [](bool ok, const char* what) {
        if (!ok) {
            throw ValidationError(std::string(what) + " violated");
        }
    };
    const std::array<std::pair<double, const char*>, 9> finite{{{p.lambda, "lambda finite"},
                                                                {p.r, "r finite"},
                                                                {p.b, "b finite"},
                                                                {p.f, "f finite"},
                                                                {p.q_soc, "q_soc finite"},
                                                                {p.q_inf, "q_inf finite"},
                                                                {p.w_R, "w_R finite"},
                                                                {p.w_H, "w_H finite"},
                                                                {p.w_C, "w_C finite"}}};
    for (const auto& [v, name] : finite) {
        require(std::isfinite(v), name);
    }
    require(p.lambda > 0.0, "λ > 0");
    require(p.r > 0.0, "r > 0");
    require(p.b > 0.0, "b > 0");
    require(p.f >= 0.0, "f ≥ 0");
    require(p.q_soc >= 0.0, "q_soc ≥ 0");
    require(p.q_inf >= 0.0, "q_inf ≥ 0");
    require(p.w_C > p.w_H, "w_C > w_H");
    require(p.w_H > p.w_R, "w_H > w_R");
    require(p.w_R >= 0.0, "w_R ≥ 0");
    if (p.delta) {
        require(std::isfinite(*p.delta) && *p.delta > 0.0, "delta > 0");
    }
    return p;
}

/// A point (x_R, x_H, x_C) of the 2-simplex.
class PopulationState {
public:
    static constexpr double kSumTolerance = 1e-9;
    static constexpr double kNegativeTolerance = 1e-12;

    /// Accepts |sum - 1| <= 1e-9 and components >= -1e-12, then clamps into [0, 1].
    static PopulationState make(double x_R, double x_H, double x_C)
    {
        if (!std::isfinite(x_R) || !std::isfinite(x_H) || !std::isfinite(x_C)) {
            throw ValidationError("population state has non-finite component");
        }
        if (x_R < -kNegativeTolerance || x_H < -kNegativeTolerance || x_C < -kNegativeTolerance) {
            throw ValidationError("population state has negative component");
        }
        if (std::abs(x_R + x_H + x_C - 1.0) > kSumTolerance) {
            throw ValidationError("population state does not sum to 1");
        }
        auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
        return PopulationState(clamp01(x_R), clamp01(x_H), clamp01(x_C));
    }

    /// Builds the state from the reduced coordinates, x_R = 1 - x_H - x_C.
    static PopulationState from_reduced(double x_H, double x_C) { return make(1.0 - x_H - x_C, x_H, x_C); }

    /// Projects an arbitrary non-negative-ish triple onto the simplex: negatives are
    /// set to zero and the remainder rescaled to unit mass.
    static PopulationState renormalized(double x_R, double x_H, double x_C)
    {
        x_R = std::max(x_R, 0.0);
        x_H = std::max(x_H, 0.0);
        x_C = std::max(x_C, 0.0);
        const double s = x_R + x_H + x_C;
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw NumericalGuardError("cannot renormalize a degenerate population state");
        }
        return PopulationState(x_R / s, x_H / s, x_C / s);
    }

    [[nodiscard]] double R() const noexcept { return x_[0]; }
    [[nodiscard]] double H() const noexcept { return x_[1]; }
    [[nodiscard]] double C() const noexcept { return x_[2]; }
    [[nodiscard]] double operator[](State s) const noexcept { return x_[index_of(s)]; }
    [[nodiscard]] const std::array<double, 3>& components() const noexcept { return x_; }

    [[nodiscard]] double simplex_defect() const noexcept { return std::abs(x_[0] + x_[1] + x_[2] - 1.0); }

    [[nodiscard]] double distance(const PopulationState& o) const noexcept
    {
        return std::max({std::abs(x_[0] - o.x_[0]), std::abs(x_[1] - o.x_[1]), std::abs(x_[2] - o.x_[2])});
    }

    friend bool operator==(const PopulationState&, const PopulationState&) = default;

private:
    PopulationState(double r, double h, double c) : x_{r, h, c} {}
    std::array<double, 3> x_;
};

/// Agent counts per state for a finite population of size N.
struct PopulationCounts {
    std::int64_t n_R = 0;
    std::int64_t n_H = 0;
    std::int64_t n_C = 0;

    [[nodiscard]] std::int64_t total() const noexcept { return n_R + n_H + n_C; }

    static PopulationCounts make(std::int64_t n_R, std::int64_t n_H, std::int64_t n_C)
    {
        if (n_R < 0 || n_H < 0 || n_C < 0) {
            throw ValidationError("population counts must be non-negative");
        }
        if (n_R + n_H + n_C < 1) {
            throw ValidationError("population size N must be at least 1");
        }
        return {n_R, n_H, n_C};
    }

    [[nodiscard]] std::int64_t& operator[](State s) noexcept
    {
        return s == State::R ? n_R : (s == State::H ? n_H : n_C);
    }
    [[nodiscard]] std::int64_t operator[](State s) const noexcept
    {
        return s == State::R ? n_R : (s == State::H ? n_H : n_C);
    }

    [[nodiscard]] PopulationState fractions() const
    {
        const auto n = static_cast<double>(total());
        return PopulationState::make(static_cast<double>(n_R) / n, static_cast<double>(n_H) / n,
                                     static_cast<double>(n_C) / n);
    }

    friend bool operator==(const PopulationCounts&, const PopulationCounts&) = default;
};

/// Rounds N*x to integer counts by the largest-remainder method; ties go to the
/// earlier state in (R, H, C) order.
inline PopulationCounts round_counts(std::int64_t N, const PopulationState& x)
{
    if (N < 1) {
        throw ValidationError("population size N must be at least 1");
    }
    std::array<std::int64_t, 3> n{};
    std::array<double, 3> rem{};
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double exact = static_cast<double>(N) * x.components()[i];
        n[i] = static_cast<std::int64_t>(std::floor(exact));
        rem[i] = exact - static_cast<double>(n[i]);
        assigned += n[i];
    }
    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t k = 0; assigned < N; ++k, ++assigned) {
        ++n[order[k % 3]];
    }
    while (assigned > N) {
        // only reachable through floating noise on the sum
        --*std::max_element(n.begin(), n.end());
        --assigned;
    }
    return PopulationCounts::make(n[0], n[1], n[2]);
}

/// Binary controls in the two controllable states.
struct StrategyProfile {
    bool u_H = false; ///< 1: an honest agent tries to become corrupt
    bool u_C = false; ///< 1: a corrupt agent tries to become honest

    [[nodiscard]] double uH() const noexcept { return u_H ? 1.0 : 0.0; }
    [[nodiscard]] double uC() const noexcept { return u_C ? 1.0 : 0.0; }

    friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

inline constexpr StrategyProfile kCorrupt{true, false};
inline constexpr StrategyProfile kHonest{false, true};

/// All four profiles in a fixed order: (0,0), (0,1), (1,0), (1,1) as (u_H, u_C).
inline constexpr std::array<StrategyProfile, 4> kAllProfiles{
    StrategyProfile{false, false}, StrategyProfile{false, true}, StrategyProfile{true, false},
    StrategyProfile{true, true}};

enum class Behavior : std::uint8_t { Corrupt, Honest, Indifferent };

inline constexpr const char* to_string(Behavior b) noexcept
{
    switch (b) {
    case Behavior::Corrupt: return "Corrupt";
    case Behavior::Honest: return "Honest";
    case Behavior::Indifferent: return "Indifferent";
    }
    return "?";
}

/// Strategy of a named behavior. Indifferent has no unique profile.
inline StrategyProfile strategy_of(Behavior b)
{
    switch (b) {
    case Behavior::Corrupt: return kCorrupt;
    case Behavior::Honest: return kHonest;
    case Behavior::Indifferent: break;
    }
    throw ValidationError("Indifferent behavior has no unique strategy profile");
}

/// Inverse of strategy_of for the two named profiles.
inline std::optional<Behavior> behavior_of(const StrategyProfile& s) noexcept
{
    if (s == kCorrupt) return Behavior::Corrupt;
    if (s == kHonest) return Behavior::Honest;
    return std::nullopt;
}

struct Transition {
    State from;
    State to;
    double rate;
};

/// At most one entry per ordered pair; rates finite and non-negative.
/// Zero-rate entries may be present or absent.
class TransitionRateTable {
public:
    void add(State from, State to, double rate)
    {
        if (from == to) {
            throw ValidationError("transition must change state");
        }
        if (!std::isfinite(rate) || rate < 0.0) {
            throw ValidationError("transition rate must be finite and non-negative");
        }
        for (const auto& e : entries_) {
            if (e.from == from && e.to == to) {
                throw ValidationError("duplicate transition entry");
            }
        }
        entries_.push_back({from, to, rate});
    }

    [[nodiscard]] double rate(State from, State to) const noexcept
    {
        for (const auto& e : entries_) {
            if (e.from == from && e.to == to) return e.rate;
        }
        return 0.0;
    }

    /// Total rate of leaving `from`.
    [[nodiscard]] double exit_rate(State from) const noexcept
    {
        double s = 0.0;
        for (const auto& e : entries_) {
            if (e.from == from) s += e.rate;
        }
        return s;
    }

    [[nodiscard]] double total() const noexcept
    {
        double s = 0.0;
        for (const auto& e : entries_) s += e.rate;
        return s;
    }

    [[nodiscard]] const std::vector<Transition>& entries() const noexcept { return entries_; }
    [[nodiscard]] auto begin() const noexcept { return entries_.begin(); }
    [[nodiscard]] auto end() const noexcept { return entries_.end(); }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<Transition> entries_;
};

/// Time derivative of (x_R, x_H, x_C).
struct Velocity {
    double R = 0.0;
    double H = 0.0;
    double C = 0.0;

    [[nodiscard]] double max_norm() const noexcept { return std::max({std::abs(R), std::abs(H), std::abs(C)}); }
};

/// Mean-field drift when every agent plays `s`.
inline Velocity kinetic_rhs(const ModelParams& p, const PopulationState& x, const StrategyProfile& s) noexcept
{
    const double detection = (p.b + p.q_soc * x.H()) * x.C();
    const double recruitment = p.r * x.R();
    const double switching = p.lambda * (x.H() * s.uH() - x.C() * s.uC());
    const double infection = p.q_inf * x.H() * x.C();
    return {detection - recruitment, recruitment - switching - infection, -detection + switching + infection};
}

/// Rates of the finite-N population chain, listed as C->R, R->H, H->C, C->H.
inline TransitionRateTable population_rates(const ModelParams& p, const PopulationCounts& n, const StrategyProfile& s)
{
    const auto N = static_cast<double>(n.total());
    const auto nR = static_cast<double>(n.n_R);
    const auto nH = static_cast<double>(n.n_H);
    const auto nC = static_cast<double>(n.n_C);
    TransitionRateTable t;
    t.add(State::C, State::R, nC * (p.b + p.q_soc * nH / N));
    t.add(State::R, State::H, nR * p.r);
    t.add(State::H, State::C, nH * (p.lambda * s.uH() + p.q_inf * nC / N));
    t.add(State::C, State::H, p.lambda * nC * s.uC());
    return t;
}

/// Rates of a single tagged agent playing `u` while the crowd sits at `x`.
inline TransitionRateTable individual_rates(const ModelParams& p, const PopulationState& x, const StrategyProfile& u)
{
    TransitionRateTable t;
    t.add(State::R, State::H, p.r);
    t.add(State::H, State::C, p.lambda * u.uH() + p.q_inf * x.C());
    t.add(State::C, State::H, p.lambda * u.uC());
    t.add(State::C, State::R, p.b + p.q_soc * x.H());
    return t;
}

} // namespace mfgc
