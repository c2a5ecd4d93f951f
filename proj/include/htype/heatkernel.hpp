#pragma once

#include <cstdint>
#include <string>

#include "htype/algebra.hpp"

namespace htype {

struct KernelQuery {
    int n = 1;
    int m = 1;
    double t = 1.0;
    double r = 0.0;  // |x|
    double s = 0.0;  // |z|
    double rel_tol = 1e-10;
    /// Absolute floor for the error target; lets callers integrating p over
    /// space skip precision escalation where p is negligible.
    double abs_tol = 0.0;
};

struct EvalResult {
    double value = 0.0;
    double abs_err = 0.0;
    /// log of the value, computed without underflow where the method allows.
    double log_value = 0.0;
    std::string method;
    bool extended_precision = false;
    bool converged = true;
    std::string diagnostic;
};

/// Method tags.
namespace methods {
inline constexpr const char* bessel = "bessel-quadrature";
inline constexpr const char* hankel = "hankel-series";
inline constexpr const char* scaled_bessel = "scaling+bessel-quadrature";
inline constexpr const char* scaled_hankel = "scaling+hankel-series";
}  // namespace methods

/// (2 pi)^{-m} (4 pi)^{-n}.
double kernel_prefactor(int n, int m);

/// Mehler kernel m_{t,lambda}(x) on R^{2n} at |x| = r.
double mehler(double t, double lambda, double r, int n);

/// p_1(x, z) by the Bessel radial reduction. Requires q.t == 1.
EvalResult p1(const KernelQuery& q);
/// p_1 through the finite Hankel series with the integration line moved off
/// the real axis. Requires odd m and |z| > 0.
EvalResult p1_hankel(const KernelQuery& q);
/// p_t(x, z) = t^{-(n+m)} p_1(x / sqrt t, z / t).
EvalResult pt(const KernelQuery& q);
/// Same, routed through p1_hankel.
EvalResult pt_hankel(const KernelQuery& q);

/// q_1 = int (|l|/sinh|l|)^{n+1} cosh|l| e^{i<l,z> - |l|coth|l| |x|^2/4} dl  (t = 1).
EvalResult q1(const KernelQuery& q);
/// q_2 = int -i<l, z^> (|l|/sinh|l|)^n e^{i<l,z> - |l|coth|l| |x|^2/4} dl  (t = 1).
EvalResult q2(const KernelQuery& q);

struct KernelGradient {
    double dp_dr = 0.0;       // d p_t / d|x|
    double dp_ds = 0.0;       // d p_t / d|z|
    double horizontal = 0.0;  // |grad p_t|, horizontal gradient
    double vertical = 0.0;    // |grad_z p_t|
    bool converged = true;
};

/// Gradient data of p_t at (|x|, |z|) from q_1, q_2 and the dilation.
KernelGradient kernel_gradient(const KernelQuery& q);

/// (L - d/dt) p_t at g by central differences in all coordinates, divided by p_t(g).
double heat_residual(const Structure& s, double t, const GroupPoint& g, double h, double rel_tol = 1e-13);

/// Relative deviation of int_R p^{(n, m+1)}(x, (z, w)) dw from p^{(n, m)}(x, z).
double hadamard_check(int n, int m, double r, double s, double tol = 1e-8);

/// int p_t dm over R^{2n+m} by 2-D radial quadrature.
double normalization(int n, int m, double t = 1.0, double tol = 1e-7);

struct SemigroupCheck {
    double lhs = 0.0;    // MC estimate of (p_{t1} * p_{t2})(g)
    double rhs = 0.0;    // p_{t1 + t2}(g)
    double sigma = 0.0;  // standard error of lhs
};

SemigroupCheck semigroup_mc_check(const Structure& s, double t1, double t2, const GroupPoint& g,
                                  int n_samples, std::uint64_t seed, int steps = 500);

}  // namespace htype
