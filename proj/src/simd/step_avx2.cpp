#include <immintrin.h>

#include "htype/simd/step.hpp"

namespace htype::simd {

void step_avx2(const StepPlan& plan, double* x, double* z, const double* dx, std::size_t lanes) {
    const __m256d half = _mm256_set1_pd(0.5);
    for (int j = 0; j < plan.vertical; ++j) {
        double* zj = z + j * lanes;
        for (std::size_t p = 0; p < lanes; p += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (const BracketTerm& t : plan.terms[j]) {
                const __m256d xv = _mm256_loadu_pd(x + t.b * lanes + p);
                const __m256d dv = _mm256_loadu_pd(dx + t.a * lanes + p);
                acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(t.v), xv), dv));
            }
            const __m256d zv = _mm256_loadu_pd(zj + p);
            _mm256_storeu_pd(zj + p, _mm256_add_pd(zv, _mm256_mul_pd(half, acc)));
        }
    }
    const std::size_t total = static_cast<std::size_t>(plan.horizontal) * lanes;
    for (std::size_t i = 0; i < total; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(dx + i)));
    }
}

}  // namespace htype::simd
