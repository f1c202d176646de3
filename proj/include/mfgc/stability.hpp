#pragma once

// Linear stability of stationary equilibria in the reduced coordinates (x_H, x_C),
// with x_R = 1 - x_H - x_C eliminated.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "mfgc/core.hpp"
#include "mfgc/equilibria.hpp"

namespace mfgc {

inline constexpr double kStabilityMargin = 1e-9;

/// 2x2 Jacobian; rows/columns ordered (x_H, x_C).
struct LinearizationMatrix {
    std::array<std::array<double, 2>, 2> a{};

    [[nodiscard]] double trace() const noexcept { return a[0][0] + a[1][1]; }
    [[nodiscard]] double det() const noexcept { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }
};

enum class Classification : std::uint8_t { Stable, Unstable, Marginal };
enum class StabilityMethod : std::uint8_t { Theorem2Sufficient, TraceDet, InconclusiveFellBack };

inline constexpr const char* to_string(Classification c) noexcept
{
    switch (c) {
    case Classification::Stable: return "Stable";
    case Classification::Unstable: return "Unstable";
    case Classification::Marginal: return "Marginal";
    }
    return "?";
}

inline constexpr const char* to_string(StabilityMethod m) noexcept
{
    switch (m) {
    case StabilityMethod::Theorem2Sufficient: return "Theorem2Sufficient";
    case StabilityMethod::TraceDet: return "TraceDet";
    case StabilityMethod::InconclusiveFellBack: return "InconclusiveFellBack";
    }
    return "?";
}

/// Which closed-form rules were evaluated, and their outcome.
struct TheoremFlags {
    std::optional<bool> corrupt_band;          ///< sufficient band on q_soc - q_inf held
    std::optional<bool> boundary_stable;       ///< q_inf - q_soc - λ - b < 0
    std::optional<bool> interior_coefficients; ///< both characteristic coefficients > 0
};

struct StabilityVerdict {
    Classification classification = Classification::Marginal;
    StabilityMethod method = StabilityMethod::TraceDet;
    std::array<double, 2> eigen_real_parts{}; ///< sorted descending
    TheoremFlags theorem_flags;
};

/// Raised when a closed-form stability rule contradicts the eigenvalue verdict.
class StabilityDisagreement : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Analytic Jacobian of the reduced drift under strategy `s`.
inline LinearizationMatrix jacobian(const ModelParams& p, const PopulationState& x, const StrategyProfile& s) noexcept
{
    const double uH = s.uH();
    const double uC = s.uC();
    LinearizationMatrix m;
    m.a[0][0] = -p.r - p.lambda * uH - p.q_inf * x.C();
    m.a[0][1] = -p.r + p.lambda * uC - p.q_inf * x.H();
    m.a[1][0] = (p.q_inf - p.q_soc) * x.C() + p.lambda * uH;
    m.a[1][1] = -p.b - p.lambda * uC + (p.q_inf - p.q_soc) * x.H();
    return m;
}

/// Real parts of the roots of xi^2 - trace xi + det, largest first.
inline std::array<double, 2> eigen_real_parts(const LinearizationMatrix& m) noexcept
{
    const double t = m.trace();
    const double d = m.det();
    const double disc = t * t - 4.0 * d;
    if (disc < 0.0) {
        return {0.5 * t, 0.5 * t};
    }
    const double q = 0.5 * (t + std::copysign(std::sqrt(disc), t));
    double r1 = q;
    double r2 = q != 0.0 ? d / q : 0.0;
    if (r1 < r2) std::swap(r1, r2);
    return {r1, r2};
}

inline StabilityVerdict trace_det_verdict(const LinearizationMatrix& m) noexcept
{
    StabilityVerdict v;
    v.method = StabilityMethod::TraceDet;
    v.eigen_real_parts = eigen_real_parts(m);
    const double lead = v.eigen_real_parts[0];
    if (lead < -kStabilityMargin) {
        v.classification = Classification::Stable;
    } else if (lead > kStabilityMargin) {
        v.classification = Classification::Unstable;
    } else {
        v.classification = Classification::Marginal;
    }
    return v;
}

/// Sufficient condition for stability of the corrupt root:
/// -λ q_soc / r <= q_soc - q_inf <= [r q_inf + (r+b)(b r + r λ + b λ)] / r^2.
inline bool theorem2_corrupt_condition(const ModelParams& p) noexcept
{
    const double gap = p.q_soc - p.q_inf;
    const double lower = -p.lambda * p.q_soc / p.r;
    const double upper =
        (p.r * p.q_inf + (p.r + p.b) * (p.b * p.r + p.r * p.lambda + p.b * p.lambda)) / (p.r * p.r);
    return lower <= gap && gap <= upper;
}

/// Coefficients (c1, c0) of xi^2 + c1 xi + c0 at the honest interior point.
/// c1 = r + q_inf x_C** = r (r + q_inf - λ)(q_inf - q_soc) / D and c0 = r (q_inf - q_soc - b - λ),
/// D = (r + b) q_inf + (λ - r) q_soc.
inline std::array<double, 2> honest_interior_characteristic(const ModelParams& p) noexcept
{
    const double d = p.q_inf - p.q_soc;
    const double D = (p.r + p.b) * p.q_inf + (p.lambda - p.r) * p.q_soc;
    return {p.r * (p.r + p.q_inf - p.lambda) * d / D, p.r * (d - p.b - p.lambda)};
}

namespace detail {

inline Classification classify_sign(double lead) noexcept
{
    if (lead < -kStabilityMargin) return Classification::Stable;
    if (lead > kStabilityMargin) return Classification::Unstable;
    return Classification::Marginal;
}

inline void require_agreement(Classification closed_form, const StabilityVerdict& numeric, const char* rule)
{
    const bool contradiction = (closed_form == Classification::Stable &&
                                numeric.classification == Classification::Unstable) ||
                               (closed_form == Classification::Unstable &&
                                numeric.classification == Classification::Stable);
    if (contradiction) {
        throw StabilityDisagreement(std::string(rule) + " contradicts the eigenvalue verdict");
    }
}

} // namespace detail

/// Closed-form rule first where one exists, always cross-checked against the
/// eigenvalues of the reduced Jacobian.
inline StabilityVerdict classify_equilibrium(const ModelParams& p, const EquilibriumReport& e)
{
    StabilityVerdict numeric = trace_det_verdict(jacobian(p, e.state, e.strategy));
    StabilityVerdict v = numeric;

    const bool corrupt_play = e.strategy == kCorrupt;
    const bool honest_play = e.strategy == kHonest;
    const bool at_boundary = e.state.H() == 1.0 && e.state.C() == 0.0;

    if (corrupt_play && (e.provenance == Provenance::CorruptRoot || e.provenance == Provenance::NoInteraction)) {
        const bool band = theorem2_corrupt_condition(p);
        v.theorem_flags.corrupt_band = band;
        if (band) {
            detail::require_agreement(Classification::Stable, numeric, "corrupt stability band");
            v.method = StabilityMethod::Theorem2Sufficient;
        } else {
            v.method = StabilityMethod::InconclusiveFellBack;
        }
    } else if (honest_play && at_boundary) {
        const double growth = p.q_inf - p.q_soc - p.lambda - p.b;
        // eigenvalues are -r and growth
        const Classification closed = detail::classify_sign(std::max(growth, -p.r));
        v.theorem_flags.boundary_stable = growth < 0.0;
        detail::require_agreement(closed, numeric, "honest boundary rule");
        v.method = StabilityMethod::Theorem2Sufficient;
    } else if (honest_play && e.provenance == Provenance::HonestInterior) {
        const auto [c1, c0] = honest_interior_characteristic(p);
        const bool positive = c1 > 0.0 && c0 > 0.0;
        v.theorem_flags.interior_coefficients = positive;
        if (positive) {
            detail::require_agreement(Classification::Stable, numeric, "honest interior coefficients");
            v.method = StabilityMethod::Theorem2Sufficient;
        }
    }
    return v;
}

} // namespace mfgc
