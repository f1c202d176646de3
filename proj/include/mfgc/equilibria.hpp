#pragma once

// Enumeration of all stationary mean-field equilibria: the corrupt root of the
// quadratic Q, the honest interior point, the honest boundary point x_H = 1 and
// the closed form for the interaction-free case.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfgc/core.hpp"
#include "mfgc/hjb.hpp"

namespace mfgc {

enum class Provenance : std::uint8_t { CorruptRoot, HonestInterior, HonestBoundary, NoInteraction };

inline constexpr const char* to_string(Provenance p) noexcept
{
    switch (p) {
    case Provenance::CorruptRoot: return "CorruptRoot";
    case Provenance::HonestInterior: return "HonestInterior";
    case Provenance::HonestBoundary: return "HonestBoundary";
    case Provenance::NoInteraction: return "NoInteraction";
    }
    return "?";
}

struct EquilibriumDiagnostics {
    double q_value = 0.0;         ///< Q evaluated at the equilibrium x_H
    ExtendedThreshold x_bar;      ///< classifying threshold of the parameter set
    bool interior_condition = false;  ///< max(x̄, 0) <= (b+λ)/(q_inf-q_soc) < 1
    bool corrupt_admissible = false;  ///< x̄ > 1, or x̄ > 0 with Q(x̄) >= 0
    double residual = 0.0;        ///< max-norm of the drift at the state
    std::vector<std::string> warnings;
};

struct EquilibriumReport {
    PopulationState state = PopulationState::make(0.0, 1.0, 0.0);
    Behavior behavior = Behavior::Honest;
    StrategyProfile strategy = kHonest;
    Provenance provenance = Provenance::HonestBoundary;
    EquilibriumDiagnostics diagnostics;
};

/// Coefficients of Q(x) = alpha x^2 + beta x + gamma.
struct Quadratic {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    [[nodiscard]] double operator()(double x) const noexcept { return (alpha * x + beta) * x + gamma; }
    [[nodiscard]] double scale() const noexcept
    {
        return std::max({std::abs(alpha), std::abs(beta), std::abs(gamma)});
    }
};

inline Quadratic q_coefficients(const ModelParams& p) noexcept
{
    return {(p.r + p.lambda) * p.q_soc - p.r * p.q_inf,
            p.r * (p.q_inf - p.q_soc) + p.lambda * p.r + p.lambda * p.b + p.r * p.b, -p.r * p.b};
}

/// The quadratic whose root in (0, 1) is the honest fraction at a corrupt equilibrium.
inline double q_polynomial(const ModelParams& p, double x_H) noexcept { return q_coefficients(p)(x_H); }

/// x_C on the detection/recruitment balance line (b + q_soc x_H) x_C = r x_R.
inline double balance_x_C(const ModelParams& p, double x_H) noexcept
{
    return (1.0 - x_H) * p.r / (p.r + p.b + p.q_soc * x_H);
}

struct ReducedPoint {
    double x_H = 0.0;
    double x_C = 0.0;
};

namespace detail {

/// Real roots of a x^2 + b x + c in cancellation-free form; linear fallback when
/// |a| <= 1e-14 |b|.
inline std::vector<double> real_roots(double a, double b, double c)
{
    if (std::abs(a) <= 1e-14 * std::abs(b)) {
        if (b == 0.0) return {};
        return {-c / b};
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        // a double root perturbed by rounding
        return {-b / (2.0 * a)};
    }
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q == 0.0) return {0.0};
    return {q / a, c / q};
}

} // namespace detail

/// Unique root of Q in (0, 1) and the matching x_C.
inline ReducedPoint corrupt_root(const ModelParams& p)
{
    const Quadratic Q = q_coefficients(p);
    const auto roots = detail::real_roots(Q.alpha, Q.beta, Q.gamma);
    std::optional<double> best;
    for (double x : roots) {
        if (!(x > 0.0 && x < 1.0)) continue;
        if (!best || std::abs(Q(x)) < std::abs(Q(*best))) best = x;
    }
    if (!best) {
        // Q(0) < 0 < Q(1) guarantees a root; reaching here means the parameters
        // bypassed validation.
        throw NumericalGuardError("Q has no root in (0, 1)");
    }
    return {*best, balance_x_C(p, *best)};
}

/// Honest interior equilibrium, present iff q_inf > q_soc and
/// max(x̄, 0) <= (b+λ)/(q_inf-q_soc) < 1.
inline std::optional<ReducedPoint> honest_interior(const ModelParams& p) noexcept
{
    const double d = p.q_inf - p.q_soc;
    if (!(d > 0.0)) return std::nullopt;
    const double x_H = (p.b + p.lambda) / d;
    const double xbar = classifier_xbar(p).value;
    if (!(x_H < 1.0) || std::max(xbar, 0.0) > x_H + kTieTolerance) return std::nullopt;
    const double x_C = p.r * (d - p.b - p.lambda) / ((p.r + p.b) * p.q_inf + (p.lambda - p.r) * p.q_soc);
    return ReducedPoint{x_H, x_C};
}

namespace detail {

inline EquilibriumReport make_report(const ModelParams& p, PopulationState state, StrategyProfile strategy,
                                     Provenance provenance, Behavior behavior)
{
    EquilibriumReport e;
    e.state = state;
    e.strategy = strategy;
    e.provenance = provenance;
    e.behavior = behavior;
    e.diagnostics.x_bar = classifier_xbar(p);
    e.diagnostics.q_value = q_polynomial(p, state.H());
    e.diagnostics.residual = kinetic_rhs(p, state, strategy).max_norm();
    if (e.diagnostics.x_bar.indifferent_everywhere) {
        e.diagnostics.warnings.emplace_back("q_soc = 0 with vanishing bracket: indifferent at every state");
    }
    return e;
}

inline Behavior tie_aware(double x_H, double xbar, Behavior strict) noexcept
{
    return std::abs(x_H - xbar) <= kTieTolerance ? Behavior::Indifferent : strict;
}

} // namespace detail

/// The all-honest point (0, 1, 0) when honesty is a best response there (x̄ < 1).
inline std::optional<EquilibriumReport> honest_boundary(const ModelParams& p)
{
    const ExtendedThreshold xbar = classifier_xbar(p);
    if (xbar.value > 1.0 + kTieTolerance) return std::nullopt;
    const Behavior beh = detail::tie_aware(1.0, xbar.value, Behavior::Honest);
    auto e = detail::make_report(p, PopulationState::make(0.0, 1.0, 0.0), kHonest, Provenance::HonestBoundary, beh);
    if (beh == Behavior::Indifferent) {
        e.diagnostics.warnings.emplace_back("x_bar = 1: agents at the honest boundary are indifferent");
    }
    return e;
}

/// Every stationary equilibrium, sorted by x_H (between one and three of them).
inline std::vector<EquilibriumReport> enumerate_equilibria(const ModelParams& p)
{
    const ExtendedThreshold xbar = classifier_xbar(p);
    const Quadratic Q = q_coefficients(p);
    const bool interior_condition = honest_interior(p).has_value();

    std::vector<EquilibriumReport> out;

    // corrupt behavior
    {
        const ReducedPoint root = corrupt_root(p);
        bool admissible = false;
        bool tie = false;
        std::string warning;
        if (xbar.value > 1.0) {
            admissible = true;
        } else if (xbar.value > 0.0) {
            const bool by_q = Q(xbar.value) >= 0.0;
            const bool by_root = root.x_H <= xbar.value;
            if (by_q != by_root) {
                if (std::abs(root.x_H - xbar.value) > kTieTolerance) {
                    throw std::logic_error("corrupt admissibility tests disagree away from a tie");
                }
                warning = "Q(x_bar) sign and root ordering disagree within tie tolerance";
                tie = true;
            }
            // a root on the threshold is a tie whatever the rounded sign tests say
            tie = tie || std::abs(root.x_H - xbar.value) <= kTieTolerance;
            admissible = by_q || tie;
        }
        if (admissible) {
            const Behavior beh =
                tie ? Behavior::Indifferent : detail::tie_aware(root.x_H, xbar.value, Behavior::Corrupt);
            auto e = detail::make_report(p, PopulationState::from_reduced(root.x_H, root.x_C), kCorrupt,
                                         Provenance::CorruptRoot, beh);
            e.diagnostics.corrupt_admissible = true;
            if (!warning.empty()) e.diagnostics.warnings.push_back(warning);
            if (beh == Behavior::Indifferent && warning.empty()) {
                e.diagnostics.warnings.emplace_back("Q(x_bar) = 0: corrupt root lies on the threshold");
            }
            out.push_back(std::move(e));
        }
    }

    if (auto boundary = honest_boundary(p)) {
        out.push_back(std::move(*boundary));
    }

    if (auto interior = honest_interior(p)) {
        const Behavior beh = detail::tie_aware(interior->x_H, xbar.value, Behavior::Honest);
        auto e = detail::make_report(p, PopulationState::from_reduced(interior->x_H, interior->x_C), kHonest,
                                     Provenance::HonestInterior, beh);
        if (beh == Behavior::Indifferent) {
            e.diagnostics.warnings.emplace_back("x_bar equals the honest interior x_H");
        }
        out.push_back(std::move(e));
    }

    for (auto& e : out) {
        e.diagnostics.interior_condition = interior_condition;
        e.diagnostics.corrupt_admissible =
            xbar.value > 1.0 || (xbar.value > 0.0 && Q(xbar.value) >= 0.0) || e.diagnostics.corrupt_admissible;
    }
    std::sort(out.begin(), out.end(),
              [](const EquilibriumReport& a, const EquilibriumReport& b) { return a.state.H() < b.state.H(); });
    return out;
}

/// Closed-form equilibrium without interaction (q_soc = q_inf = 0): corrupt iff
/// w_C - w_R >= b f + (w_H - w_R)(1 + b/r).
inline EquilibriumReport no_interaction_equilibrium(const ModelParams& p)
{
    if (p.q_soc != 0.0 || p.q_inf != 0.0) {
        throw ValidationError("no-interaction equilibrium requires q_soc = q_inf = 0");
    }
    const double lhs = p.w_C - p.w_R;
    const double rhs = p.b * p.f + (p.w_H - p.w_R) * (1.0 + p.b / p.r);
    if (lhs < rhs - kTieTolerance) {
        return detail::make_report(p, PopulationState::make(0.0, 1.0, 0.0), kHonest, Provenance::NoInteraction,
                                   Behavior::Honest);
    }
    const double x_H = p.r * p.b / (p.lambda * p.r + p.lambda * p.b + p.r * p.b);
    const double x_C = p.r * (1.0 - x_H) / (p.r + p.b);
    const bool tie = lhs <= rhs + kTieTolerance;
    auto e = detail::make_report(p, PopulationState::from_reduced(x_H, x_C), kCorrupt, Provenance::NoInteraction,
                                 tie ? Behavior::Indifferent : Behavior::Corrupt);
    e.diagnostics.corrupt_admissible = true;
    if (tie) {
        e.diagnostics.warnings.emplace_back("corruption and honesty pay equally without interaction");
    }
    return e;
}

} // namespace mfgc
