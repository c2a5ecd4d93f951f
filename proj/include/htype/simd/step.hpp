#pragma once

// One Euler step of horizontal Brownian motion for a block of paths stored
// structure-of-arrays: x[d * lanes + p], z[j * lanes + p], dx[d * lanes + p].
//
//   z_j += 1/2 <J_j x, dx>,   x += dx
//
// The scalar and AVX2 variants perform the same operations in the same order
// without contraction, so their results agree bit for bit.

#include <cstddef>
#include <vector>

#include "htype/algebra.hpp"

namespace htype::simd {

struct BracketTerm {
    int a;  // index into dx
    int b;  // index into x
    double v;
};

/// Nonzero entries of each J_j as (a, b, J_j(a, b)), i.e. <J_j x, dx> = sum v x_b dx_a.
struct StepPlan {
    int horizontal = 0;
    int vertical = 0;
    std::vector<std::vector<BracketTerm>> terms;  // one list per j
};

StepPlan make_step_plan(const Structure& s);

enum class Isa { scalar, avx2 };

/// lanes must be a multiple of 4.
void step_scalar(const StepPlan& plan, double* x, double* z, const double* dx, std::size_t lanes);
void step_avx2(const StepPlan& plan, double* x, double* z, const double* dx, std::size_t lanes);

/// True when the AVX2 variant is compiled in and the CPU supports it.
bool avx2_available();

/// Variant picked at runtime; HTYPE_SIMD=scalar forces the reference path.
Isa active_isa();
const char* isa_name(Isa isa);
void step(Isa isa, const StepPlan& plan, double* x, double* z, const double* dx, std::size_t lanes);

}  // namespace htype::simd
