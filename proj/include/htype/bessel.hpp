#pragma once

// Bessel functions of the first kind for the orders that appear in radial
// Fourier transforms on R^m: integers and half-integers >= -1/2.

namespace htype::bessel {

/// Switch from the power series to the large-argument expansion for integer
/// orders (orders 0 and 1 directly, higher ones by upward recurrence). The
/// series runs in extended precision below this point.
inline constexpr double kIntegerSwitch = 16.0;

/// J_nu(w) for integer nu >= 0 and w >= 0.
template <class Real>
Real j_integer(int nu, Real w);

/// J_{l+1/2}(w) for l >= -1 and w >= 0 (closed trigonometric forms).
template <class Real>
Real j_half(int l, Real w);

/// J_{k/2}(w) for twice-the-order k >= -1.
template <class Real>
Real j(int twice_order, Real w);

/// w^{-nu} J_nu(w) with nu = twice_order / 2, finite at w = 0.
template <class Real>
Real j_scaled(int twice_order, Real w);

/// Large-argument Hankel expansion of J_nu for integer nu, exposed for the
/// overlap validation against the series.
template <class Real>
Real j_integer_asymptotic(int nu, Real w);
template <class Real>
Real j_integer_series(int nu, Real w);

/// Fourier transform of the surface measure of S^{m-1}:
///   S_m(w) = int_{S^{m-1}} e^{i w sigma.v} dsigma = (2 pi)^{m/2} w^{1-m/2} J_{m/2-1}(w).
/// S_1(w) = 2 cos w, S_3(w) = 4 pi sin(w)/w.
template <class Real>
Real sphere_fourier(int m, Real w);

/// -dS_m/dw = (2 pi)^{m/2} w^{1-m/2} J_{m/2}(w).
template <class Real>
Real sphere_fourier_slope(int m, Real w);

/// |S^{m-1}| = 2 pi^{m/2} / Gamma(m/2), with |S^0| = 2.
double sphere_area(int m);

}  // namespace htype::bessel
