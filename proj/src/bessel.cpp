#include "htype/bessel.hpp"

#include <cmath>
#include <numbers>
#include <limits>
#include <stdexcept>
#include <vector>

namespace htype::bessel {

namespace {

using LD = long double;

// sum_k (-1)^k (w^2/4)^k / (k! Gamma(nu + k + 1)) / 2^nu  ==  w^{-nu} J_nu(w)
template <class R>
R scaled_series(int twice_order, R w) {
    const R nu = static_cast<R>(twice_order) / 2;
    const R q = w * w / 4;
    R term = R(1) / (std::pow(R(2), nu) * std::tgamma(nu + 1));
    R sum = term;
    const R stop = std::numeric_limits<R>::epsilon() / 1000;
    for (int k = 1; k < 400; ++k) {
        term *= -q / (static_cast<R>(k) * (nu + k));
        sum += term;
        if (std::abs(term) < stop * std::abs(sum) && static_cast<R>(k) > q) break;
    }
    return sum;
}

// The alternating series loses about e^w relative accuracy; extended
// precision keeps it below 1e-15 up to the switch point.
template <class R>
R scaled_series_guarded(int twice_order, R w) {
    if (w <= R(4)) return scaled_series<R>(twice_order, w);
    return static_cast<R>(scaled_series<LD>(twice_order, static_cast<LD>(w)));
}

// h_l(w) = w^{-l} j_l(w) for the spherical Bessel j_l, l >= -1.
template <class R>
R spherical_scaled(int l, R w) {
    if (w < static_cast<R>(l) + 2) {
        // sum_k (-1)^k (w^2/2)^k / (k! (2l+2k+1)!!)
        R dfact = 1;  // (2l+1)!!, with (-1)!! = 1
        for (int i = 2 * l + 1; i > 1; i -= 2) dfact *= i;
        const R q = w * w / 2;
        R term = 1 / dfact;
        R sum = term;
        const R stop = std::numeric_limits<R>::epsilon() / 1000;
        for (int k = 1; k < 400; ++k) {
            term *= -q / (static_cast<R>(k) * (2 * l + 2 * k + 1));
            sum += term;
            if (std::abs(term) < stop * std::abs(sum) && static_cast<R>(k) > q) break;
        }
        return sum;
    }
    R prev = std::cos(w) / w;  // j_{-1}
    R cur = std::sin(w) / w;   // j_0
    if (l == -1) return prev * w;
    for (int k = 0; k < l; ++k) {
        const R next = (2 * k + 1) / w * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur / std::pow(w, static_cast<R>(l));
}

// (2 pi)^{m/2}
template <class R>
R two_pi_power(int m) {
    static const std::vector<R> table = [] {
        std::vector<R> t(65);
        for (int k = 0; k < 65; ++k) t[k] = std::pow(2 * std::numbers::pi_v<R>, static_cast<R>(k) / 2);
        return t;
    }();
    if (m < 65) return table[m];
    return std::pow(2 * std::numbers::pi_v<R>, static_cast<R>(m) / 2);
}

void check_order(int twice_order) {
    if (twice_order < -1) throw std::domain_error("bessel: order must be >= -1/2");
}

}  // namespace

template <class Real>
Real j_integer_series(int nu, Real w) {
    return scaled_series_guarded<Real>(2 * nu, w) * std::pow(w, static_cast<Real>(nu));
}

template <class Real>
Real j_integer_asymptotic(int nu, Real w) {
    // J_nu(w) = sqrt(2/(pi w)) (P cos chi - Q sin chi), chi = w - (nu/2 + 1/4) pi
    using R = Real;
    const R pi = std::numbers::pi_v<R>;
    const R mu = R(4) * nu * nu;
    R p = 0, q = 0;
    R a = 1;  // a_k / w^k
    R last = std::numeric_limits<R>::infinity();
    for (int k = 0; k < 60; ++k) {
        if (k > 0) a *= (mu - static_cast<R>((2 * k - 1) * (2 * k - 1))) / (static_cast<R>(k) * 8 * w);
        const R mag = std::abs(a);
        if (mag > last) break;  // divergent tail
        last = mag;
        const R sgn = ((k / 2) % 2 == 0) ? R(1) : R(-1);
        if (k % 2 == 0)
            p += sgn * a;
        else
            q += sgn * a;
        if (mag < std::numeric_limits<R>::epsilon() / 100) break;
    }
    // cos and sin of chi = w - (nu/2 + 1/4) pi by angle addition, keeping w exact
    const R phase = (static_cast<R>(nu) / 2 + R(0.25)) * pi;
    const R cw = std::cos(w), sw = std::sin(w), cp = std::cos(phase), sp = std::sin(phase);
    const R cchi = cw * cp + sw * sp;
    const R schi = sw * cp - cw * sp;
    return std::sqrt(2 / (pi * w)) * (p * cchi - q * schi);
}

namespace {

// Above the switch point: the expansion for orders 0 and 1, then upward
// recurrence, which is stable while nu < w. Beyond that the standard library
// special function takes over.
template <class R>
R j_integer_large(int nu, R w) {
    if (nu <= 1) return j_integer_asymptotic<R>(nu, w);
    if (static_cast<R>(nu) >= w) return std::cyl_bessel_j(static_cast<R>(nu), w);
    R prev = j_integer_asymptotic<R>(0, w);
    R cur = j_integer_asymptotic<R>(1, w);
    for (int k = 1; k < nu; ++k) {
        const R next = 2 * k / w * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace

template <class Real>
Real j_integer(int nu, Real w) {
    if (nu < 0) throw std::domain_error("j_integer: order must be >= 0");
    if (w < Real(0)) throw std::domain_error("j_integer: argument must be >= 0");
    if (static_cast<double>(w) <= kIntegerSwitch) return j_integer_series(nu, w);
    return j_integer_large(nu, w);
}

template <class Real>
Real j_half(int l, Real w) {
    if (l < -1) throw std::domain_error("j_half: l must be >= -1");
    if (w < Real(0)) throw std::domain_error("j_half: argument must be >= 0");
    // J_{l+1/2}(w) = sqrt(2 w / pi) j_l(w) = sqrt(2/pi) w^{l+1/2} h_l(w)
    return std::sqrt(2 / std::numbers::pi_v<Real>) * std::pow(w, static_cast<Real>(l) + Real(0.5)) *
           spherical_scaled<Real>(l, w);
}

template <class Real>
Real j(int twice_order, Real w) {
    check_order(twice_order);
    if (twice_order % 2 == 0) return j_integer(twice_order / 2, w);
    return j_half((twice_order - 1) / 2, w);
}

template <class Real>
Real j_scaled(int twice_order, Real w) {
    check_order(twice_order);
    if (w < Real(0)) throw std::domain_error("j_scaled: argument must be >= 0");
    if (twice_order % 2 != 0) {
        const int l = (twice_order - 1) / 2;
        return std::sqrt(2 / std::numbers::pi_v<Real>) * spherical_scaled<Real>(l, w);
    }
    const int nu = twice_order / 2;
    if (w <= static_cast<Real>(kIntegerSwitch)) return scaled_series_guarded<Real>(twice_order, w);
    return j_integer_large<Real>(nu, w) / std::pow(w, static_cast<Real>(nu));
}

template <class Real>
Real sphere_fourier(int m, Real w) {
    if (m < 1) throw std::domain_error("sphere_fourier: m must be >= 1");
    const Real a = std::abs(w);
    if (m == 1) return 2 * std::cos(a);
    if (m == 3 && a > Real(0.5)) return 4 * std::numbers::pi_v<Real> * std::sin(a) / a;
    return two_pi_power<Real>(m) * j_scaled<Real>(m - 2, a);
}

template <class Real>
Real sphere_fourier_slope(int m, Real w) {
    if (m < 1) throw std::domain_error("sphere_fourier_slope: m must be >= 1");
    // (2pi)^{m/2} w^{1-m/2} J_{m/2}(w) = (2pi)^{m/2} w * [w^{-m/2} J_{m/2}(w)]
    return two_pi_power<Real>(m) * w * j_scaled<Real>(m, std::abs(w));
}

double sphere_area(int m) {
    if (m < 1) throw std::domain_error("sphere_area: m must be >= 1");
    if (m == 1) return 2.0;
    return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
}

#define HTYPE_BESSEL_INSTANTIATE(R)                       \
    template R j_integer<R>(int, R);                      \
    template R j_half<R>(int, R);                         \
    template R j<R>(int, R);                              \
    template R j_scaled<R>(int, R);                       \
    template R j_integer_asymptotic<R>(int, R);           \
    template R j_integer_series<R>(int, R);               \
    template R sphere_fourier<R>(int, R);                 \
    template R sphere_fourier_slope<R>(int, R);

HTYPE_BESSEL_INSTANTIATE(double)
HTYPE_BESSEL_INSTANTIATE(long double)

#undef HTYPE_BESSEL_INSTANTIATE

}  // namespace htype::bessel
