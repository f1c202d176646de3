// Enumerates and classifies the equilibria of a parameter set with three of
// them, then follows the ODE from just off the unstable honest boundary.

#include <cstdio>

#include "mfgc/dynamics.hpp"
#include "mfgc/equilibria.hpp"
#include "mfgc/stability.hpp"

int main()
{
    mfgc::ModelParams p;
    p.lambda = 0.1;
    p.r = 1.0;
    p.b = 0.2;
    p.f = 0.0;
    p.q_soc = 0.5;
    p.q_inf = 2.0;
    p.w_R = 0.0;
    p.w_H = 1.0;
    p.w_C = 1.275;
    mfgc::validate_params(p);

    std::printf("x_bar = %.6f\n", mfgc::classifier_xbar(p).value);
    for (const auto& e : mfgc::enumerate_equilibria(p)) {
        const auto v = mfgc::classify_equilibrium(p, e);
        std::printf("%-15s x = (%.6f, %.6f, %.6f)  %-8s %-9s eig re = (%.4f, %.4f)\n", mfgc::to_string(e.provenance),
                    e.state.R(), e.state.H(), e.state.C(), mfgc::to_string(e.behavior),
                    mfgc::to_string(v.classification), v.eigen_real_parts[0], v.eigen_real_parts[1]);
    }

    // a small corrupt seed in an honest population drifts to the interior point
    const auto start = mfgc::PopulationState::make(0.0, 0.999, 0.001);
    const auto tr = mfgc::integrate_ode(p, start, mfgc::kHonest, 60.0, 0.01);
    for (double t : {0.0, 5.0, 10.0, 20.0, 40.0, 60.0}) {
        const auto k = static_cast<std::size_t>(t / tr.dt + 0.5);
        const auto& x = tr.states[k];
        std::printf("t = %5.1f  x = (%.6f, %.6f, %.6f)\n", tr.times[k], x.R(), x.H(), x.C());
    }
    return 0;
}
