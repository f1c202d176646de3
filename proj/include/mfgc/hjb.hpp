#pragma once

// Stationary Bellman equations of an individual agent: closed-form average-payoff
// solutions per behavioral regime, the classifying threshold on x_H and the
// discounted linear system.

#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "mfgc/core.hpp"

namespace mfgc {

/// Absolute tolerance on payoff comparisons and on x_H versus the threshold.
inline constexpr double kTieTolerance = 1e-9;

/// Stationary payoffs. For the average-payoff criterion g_R = 0 and
/// mu = r * g_H + w_R; discounted values carry no normalization and mu = NaN.
struct ValueFunction {
    double g_R = 0.0;
    double g_H = 0.0;
    double g_C = 0.0;
    double mu = std::numeric_limits<double>::quiet_NaN();
    bool normalized = true;
};

struct RegimeSolution {
    ValueFunction value;
    Behavior assumed_regime = Behavior::Corrupt;
    bool consistent = false;
};

/// Threshold x̄ on the extended real line.
struct ExtendedThreshold {
    double value = 0.0;
    /// q_soc = 0 with a vanishing bracket: every x_H is a tie.
    bool indifferent_everywhere = false;

    [[nodiscard]] bool is_finite() const noexcept { return std::isfinite(value); }
};

namespace detail {

inline ExtendedThreshold threshold_from_bracket(double bracket, double q_soc) noexcept
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (q_soc > 0.0) {
        return {bracket / q_soc, false};
    }
    if (bracket > 0.0) return {inf, false};
    if (bracket < 0.0) return {-inf, false};
    return {inf, true};
}

// Shared pieces of both regime systems, wages shifted by w_R.
struct RegimeTerms {
    double w_H;       // w_H - w_R
    double net_wage;  // (w_C - w_R) - (b + q_soc x_H) f
    double detection; // b + q_soc x_H
    double infection; // q_inf x_C
};

inline RegimeTerms regime_terms(const ModelParams& p, const PopulationState& x) noexcept
{
    const double detection = p.b + p.q_soc * x.H();
    return {p.w_H - p.w_R, (p.w_C - p.w_R) - detection * p.f, detection, p.q_inf * x.C()};
}

} // namespace detail

/// x̄ = (1/q_soc) [ r (w_C - w_H) / (w_H - w_R + r f) - b ], ±∞ when q_soc = 0.
inline ExtendedThreshold classifier_xbar(const ModelParams& p) noexcept
{
    const double bracket = p.r * (p.w_C - p.w_H) / (p.w_H - p.w_R + p.r * p.f) - p.b;
    return detail::threshold_from_bracket(bracket, p.q_soc);
}

/// Discounted analogue of classifier_xbar: r is replaced by r + delta.
inline ExtendedThreshold classifier_xbar_discounted(const ModelParams& p, double delta)
{
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw ValidationError("delta ≥ 0 violated");
    }
    const double rd = p.r + delta;
    const double bracket = rd * (p.w_C - p.w_H) / (p.w_H - p.w_R + rd * p.f) - p.b;
    return detail::threshold_from_bracket(bracket, p.q_soc);
}

/// Average-payoff values assuming corrupt play (u_C = 0, u_H = 1).
inline RegimeSolution solve_regime_corrupt(const ModelParams& p, const PopulationState& x) noexcept
{
    const auto t = detail::regime_terms(p, x);
    const double a = p.lambda + t.infection;
    const double den = p.r * (a + t.detection) + a * t.detection;
    const double g_C = ((p.r + a) * t.net_wage - p.r * t.w_H) / den;
    const double g_H = (a * t.net_wage + t.detection * t.w_H) / den;
    RegimeSolution s;
    s.value = {0.0, g_H, g_C, p.r * g_H + p.w_R, true};
    s.assumed_regime = Behavior::Corrupt;
    s.consistent = g_C >= g_H - kTieTolerance;
    return s;
}

/// Average-payoff values assuming honest play (u_C = 1, u_H = 0).
inline RegimeSolution solve_regime_honest(const ModelParams& p, const PopulationState& x) noexcept
{
    const auto t = detail::regime_terms(p, x);
    const double c = t.infection;
    const double den = p.r * (p.lambda + c + t.detection) + c * t.detection;
    const double g_C = ((p.r + c) * t.net_wage + (p.lambda - p.r) * t.w_H) / den;
    const double g_H = (c * t.net_wage + (p.lambda + t.detection) * t.w_H) / den;
    RegimeSolution s;
    s.value = {0.0, g_H, g_C, p.r * g_H + p.w_R, true};
    s.assumed_regime = Behavior::Honest;
    s.consistent = g_C <= g_H + kTieTolerance;
    return s;
}

struct BestResponse {
    Behavior behavior = Behavior::Corrupt;
    ValueFunction value;
    /// Honest-branch value, attached only when behavior is Indifferent (value then
    /// holds the corrupt branch).
    std::optional<ValueFunction> alternative;
};

/// Optimal stationary behavior of one agent facing the crowd at `x`.
inline BestResponse best_response(const ModelParams& p, const PopulationState& x) noexcept
{
    const double xbar = classifier_xbar(p).value;
    if (x.H() < xbar - kTieTolerance) {
        return {Behavior::Corrupt, solve_regime_corrupt(p, x).value, std::nullopt};
    }
    if (x.H() > xbar + kTieTolerance) {
        return {Behavior::Honest, solve_regime_honest(p, x).value, std::nullopt};
    }
    return {Behavior::Indifferent, solve_regime_corrupt(p, x).value, solve_regime_honest(p, x).value};
}

/// Discounted stationary values with the control fixed by `regime`.
/// Solves the 3x3 system (delta I - L) g = w directly.
inline ValueFunction solve_discounted(const ModelParams& p, const PopulationState& x, double delta, Behavior regime)
{
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ValidationError("delta > 0 violated");
    }
    const StrategyProfile u = strategy_of(regime);
    const double detection = p.b + p.q_soc * x.H();
    const double to_corrupt = p.lambda * u.uH() + p.q_inf * x.C();
    const double to_honest = p.lambda * u.uC();

    Eigen::Matrix3d A;
    A << delta + p.r, -p.r, 0.0,
         0.0, delta + to_corrupt, -to_corrupt,
         -detection, -to_honest, delta + to_honest + detection;
    const Eigen::Vector3d w(p.w_R, p.w_H, p.w_C - detection * p.f);

    const Eigen::FullPivLU<Eigen::Matrix3d> lu(A);
    if (!lu.isInvertible()) {
        throw NumericalGuardError("discounted Bellman system is singular");
    }
    const Eigen::Vector3d g = lu.solve(w);
    return {g(0), g(1), g(2), std::numeric_limits<double>::quiet_NaN(), false};
}

} // namespace mfgc
