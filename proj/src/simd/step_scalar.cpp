#include <cstdlib>
#include <cstring>

#include "htype/simd/step.hpp"

namespace htype::simd {

StepPlan make_step_plan(const Structure& s) {
    StepPlan plan;
    plan.horizontal = s.horizontal_dim();
    plan.vertical = s.m();
    plan.terms.resize(s.m());
    for (int j = 0; j < s.m(); ++j) {
        const Mat& J = s.J(j);
        for (int a = 0; a < J.rows(); ++a)
            for (int b = 0; b < J.cols(); ++b)
                if (J(a, b) != 0.0) plan.terms[j].push_back({a, b, J(a, b)});
    }
    return plan;
}

void step_scalar(const StepPlan& plan, double* x, double* z, const double* dx, std::size_t lanes) {
    for (int j = 0; j < plan.vertical; ++j) {
        double* zj = z + j * lanes;
        for (std::size_t p = 0; p < lanes; ++p) {
            double acc = 0.0;
            for (const BracketTerm& t : plan.terms[j]) acc = acc + (t.v * x[t.b * lanes + p]) * dx[t.a * lanes + p];
            zj[p] = zj[p] + 0.5 * acc;
        }
    }
    const std::size_t total = static_cast<std::size_t>(plan.horizontal) * lanes;
    for (std::size_t i = 0; i < total; ++i) x[i] = x[i] + dx[i];
}

#if !defined(HTYPE_HAVE_AVX2)
void step_avx2(const StepPlan& plan, double* x, double* z, const double* dx, std::size_t lanes) {
    step_scalar(plan, x, z, dx, lanes);
}
#endif

bool avx2_available() {
#if defined(HTYPE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa() {
    static const Isa isa = [] {
        const char* env = std::getenv("HTYPE_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
        return avx2_available() ? Isa::avx2 : Isa::scalar;
    }();
    return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void step(Isa isa, const StepPlan& plan, double* x, double* z, const double* dx, std::size_t lanes) {
    if (isa == Isa::avx2)
        step_avx2(plan, x, z, dx, lanes);
    else
        step_scalar(plan, x, z, dx, lanes);
}

}  // namespace htype::simd
