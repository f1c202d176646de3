// How the detection effort b and the fine f move the stable equilibria.

#include <cstdio>

#include "mfgc/dynamics.hpp"
#include "mfgc/equilibria.hpp"
#include "mfgc/stability.hpp"

namespace {

void print_stable(const mfgc::ModelParams& p, const char* label, double value)
{
    std::printf("%s = %.3f  x_bar = %+.4f :", label, value, mfgc::classifier_xbar(p).value);
    for (const auto& e : mfgc::enumerate_equilibria(p)) {
        if (mfgc::classify_equilibrium(p, e).classification != mfgc::Classification::Stable) continue;
        std::printf("  [%s x_H=%.4f x_C=%.4f]", mfgc::to_string(e.behavior), e.state.H(), e.state.C());
    }
    std::printf("\n");
}

} // namespace

int main()
{
    mfgc::ModelParams p;
    p.lambda = 0.1;
    p.r = 1.0;
    p.b = 0.2;
    p.q_soc = 0.5;
    p.q_inf = 2.0;
    p.w_R = 0.0;
    p.w_H = 1.0;
    p.w_C = 1.275;

    for (int i = 0; i <= 8; ++i) {
        mfgc::ModelParams q = p;
        q.b = 0.05 + 0.25 * i;
        print_stable(mfgc::validate_params(q), "b", q.b);
    }
    for (int i = 0; i <= 4; ++i) {
        mfgc::ModelParams q = p;
        q.f = 0.05 * i;
        print_stable(mfgc::validate_params(q), "f", q.f);
    }
    return 0;
}
