#include "htype/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace htype {

namespace {

constexpr double kPi = std::numbers::pi;

// w - sin w by its alternating series; exact to rounding for w < 1.
double w_minus_sin_series(double w) {
    const double w2 = w * w;
    double term = w * w2 / 6.0;
    double sum = term;
    for (int k = 2; k < 30; ++k) {
        term *= -w2 / static_cast<double>((2 * k) * (2 * k + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// nu written with delta = pi - theta, accurate near the pole.
double nu_from_delta(double delta) {
    const double sd = std::sin(delta);
    return (kPi - delta) / (sd * sd) + std::cos(delta) / sd;
}

double dnu_dtheta(double theta) {
    const double s = std::sin(theta);
    if (theta < 1e-3) return 2.0 / 3.0 + 4.0 * theta * theta / 15.0;
    return 2.0 * (s - theta * std::cos(theta)) / (s * s * s);
}

struct Angle {
    double theta;
    double sin_theta;  // computed from the complementary angle near pi
};

Angle nu_inv_angle(double y) {
    if (!(y >= 0.0)) throw std::domain_error("nu_inv: argument must be nonnegative");
    if (y == 0.0) return {0.0, 0.0};
    if (std::isinf(y)) return {kPi, 0.0};

    if (y <= nu(kPi / 2)) {
        // Lower half: Newton on theta, safeguarded by the bracket.
        double lo = 0.0, hi = kPi / 2;
        double th = std::min(1.5 * y, hi);
        for (int it = 0; it < 100; ++it) {
            const double f = nu(th) - y;
            if (std::abs(f) <= 4e-16 * y) break;
            (f > 0 ? hi : lo) = th;
            double next = th - f / dnu_dtheta(th);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (next == th) break;
            th = next;
        }
        return {th, std::sin(th)};
    }

    // Upper half: solve in delta = pi - theta where nu ~ pi / delta^2.
    double lo = 0.0, hi = kPi / 2;  // nu_from_delta decreasing in delta
    double dl = std::min(hi, std::sqrt(kPi / y));
    for (int it = 0; it < 200; ++it) {
        const double f = nu_from_delta(dl) - y;
        if (std::abs(f) <= 1e-15 * (1.0 + y)) break;
        (f > 0 ? lo : hi) = dl;
        // d nu / d delta = -d nu / d theta
        const double th = kPi - dl;
        const double sd = std::sin(dl);
        const double deriv = -2.0 * (sd + th * std::cos(dl)) / (sd * sd * sd);
        double next = dl - f / deriv;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == dl) break;
        dl = next;
    }
    return {kPi - dl, std::sin(dl)};
}

// Solves theta / sin(theta) = ratio for theta in [0, pi), ratio >= 1.
Angle theta_for_length_ratio(double ratio) {
    if (ratio <= 1.0) return {0.0, 0.0};
    double lo = 0.0, hi = kPi;
    double th = ratio < 1.5 ? std::sqrt(6.0 * (ratio - 1.0)) : kPi - kPi / ratio;
    th = std::clamp(th, 1e-300, kPi * (1 - 1e-16));
    for (int it = 0; it < 200; ++it) {
        const double s = std::sin(th);
        const double f = th / s - ratio;
        if (std::abs(f) <= 2e-16 * ratio) break;
        (f > 0 ? hi : lo) = th;
        const double deriv = (s - th * std::cos(th)) / (s * s);
        double next = deriv > 0 ? th - f / deriv : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == th) break;
        th = next;
    }
    return {th, std::sin(th)};
}

}  // namespace

double nu(double theta) {
    if (!(theta >= 0.0 && theta < kPi)) throw std::domain_error("nu: theta must lie in [0, pi)");
    if (theta == 0.0) return 0.0;
    const double w = 2.0 * theta;
    const double s = std::sin(theta);
    if (w < 1.0) return w_minus_sin_series(w) / (2.0 * s * s);
    if (theta > kPi / 2) return nu_from_delta(kPi - theta);
    return (w - std::sin(w)) / (2.0 * s * s);
}

double nu_inv(double y) { return nu_inv_angle(y).theta; }

double theta_over_sin(double theta) {
    if (theta == 0.0) return 1.0;
    if (std::abs(theta) < 1e-4) {
        const double t2 = theta * theta;
        return 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0;
    }
    return theta / std::sin(theta);
}

DistanceResult cc_distance(double x_norm, double z_norm) {
    if (!(x_norm >= 0.0) || !(z_norm >= 0.0)) throw std::domain_error("cc_distance: norms must be nonnegative");
    if (x_norm == 0.0 && z_norm == 0.0) return {0.0, 0.0, DistanceBranch::identity};
    if (z_norm == 0.0) return {x_norm, 0.0, DistanceBranch::horizontal};
    const double y = 4.0 * z_norm / (x_norm * x_norm);
    if (x_norm == 0.0 || std::isinf(y)) return {std::sqrt(4.0 * kPi * z_norm), kPi, DistanceBranch::vertical};
    const Angle a = nu_inv_angle(y);
    const double ratio = a.theta < 1e-4 ? theta_over_sin(a.theta) : a.theta / a.sin_theta;
    return {x_norm * ratio, a.theta, DistanceBranch::generic};
}

double cc_distance(const GroupPoint& g) { return cc_distance(g.x.norm(), g.z.norm()).d; }

double cc_distance(const Structure& s, const GroupPoint& g, const GroupPoint& h) {
    return cc_distance(group_mul(s, group_inv(g), h));
}

double central_norm_at_distance(double x_norm, double d) {
    if (!(x_norm >= 0.0) || !(d >= x_norm)) {
        throw std::domain_error("central_norm_at_distance: need 0 <= |x| <= d");
    }
    if (x_norm == 0.0) return d * d / (4.0 * kPi);
    if (d == x_norm) return 0.0;
    const Angle a = theta_for_length_ratio(d / x_norm);
    if (a.theta == 0.0) return 0.0;
    return 0.25 * x_norm * x_norm * nu(a.theta);
}

double distance_ratio_f(double theta) {
    const double r = theta_over_sin(theta);
    return r * r / (1.0 + nu(theta));
}

GeodesicParams geodesic_from_endpoint(const Structure& s, const GroupPoint& g, int loops) {
    if (loops < 1) throw std::invalid_argument("geodesic_from_endpoint: loops must be >= 1");
    const double r = g.x.norm();
    const double zn = g.z.norm();
    if (r == 0.0 && zn == 0.0) throw std::invalid_argument("geodesic_from_endpoint: endpoint is the identity");

    GeodesicParams p;
    if (zn == 0.0) {
        p.xi0 = g.x;
        p.eta0 = Vec::Zero(s.m());
        p.straight = true;
        return p;
    }
    const Vec zhat = g.z / zn;
    if (r == 0.0) {
        // Every initial direction closes up; e_1 is the canonical pick.
        const double k = static_cast<double>(loops);
        p.eta0 = 2.0 * kPi * k * zhat;
        p.xi0 = std::sqrt(4.0 * k * kPi * zn) * Vec::Unit(s.horizontal_dim(), 0);
        return p;
    }
    const double theta = nu_inv(4.0 * zn / (r * r));
    const double a = 2.0 * theta;
    p.eta0 = a * zhat;
    // xi0 = -a^2 (J_eta (e^{J_eta} - I))^{-1} x, with J_eta (e^{J_eta} - I) = alpha I + beta J_eta.
    const double alpha = -a * std::sin(a);
    const double beta = std::cos(a) - 1.0;
    const Vec Jx = s.j_apply(p.eta0, g.x);
    p.xi0 = -a * a * (alpha * g.x - beta * Jx) / (alpha * alpha + beta * beta * a * a);
    return p;
}

GroupPoint geodesic_point(const Structure& s, const GeodesicParams& p, double t) {
    const double a = p.eta0.norm();
    if (p.straight || a == 0.0) return {t * p.xi0, Vec::Zero(s.m())};
    const Vec Jxi = s.j_apply(p.eta0, p.xi0);
    const double at = a * t;
    GroupPoint out;
    out.x = ((1.0 - std::cos(at)) * Jxi + a * std::sin(at) * p.xi0) / (a * a);
    out.z = p.xi0.squaredNorm() / (2.0 * a * a * a) * (at - std::sin(at)) * p.eta0;
    return out;
}

GroupPoint geodesic_velocity(const Structure& s, const GeodesicParams& p, double t) {
    const double a = p.eta0.norm();
    if (p.straight || a == 0.0) return {p.xi0, Vec::Zero(s.m())};
    const Vec Jxi = s.j_apply(p.eta0, p.xi0);
    const double at = a * t;
    GroupPoint out;
    out.x = std::sin(at) / a * Jxi + std::cos(at) * p.xi0;
    out.z = p.xi0.squaredNorm() / (2.0 * a * a) * (1.0 - std::cos(at)) * p.eta0;
    return out;
}

GroupPoint phi(const Structure& s, const Vec& u, const Vec& eta) {
    const double a = eta.norm();
    if (!(a > 0.0 && a < 2.0 * kPi)) throw std::domain_error("phi: |eta| must lie in (0, 2 pi)");
    // (I - e^{J_eta}) u with e^{J_eta} = cos|eta| I + sin|eta|/|eta| J_eta
    const Vec Ju = s.j_apply(eta, u);
    GroupPoint out;
    out.x = (1.0 - std::cos(a)) * u - std::sin(a) / a * Ju;
    out.z = 0.5 * u.squaredNorm() * (1.0 - std::sin(a) / a) * eta;
    return out;
}

double jacobian_a(double u_norm, double eta_norm, int n, int m) {
    if (!(u_norm > 0.0)) throw std::domain_error("jacobian_a: |u| must be positive");
    if (!(eta_norm > 0.0 && eta_norm < 2.0 * kPi)) throw std::domain_error("jacobian_a: |eta| must lie in (0, 2 pi)");
    const double e = eta_norm;
    const double one_minus_cos = e < 1e-3 ? 2.0 * std::pow(std::sin(0.5 * e), 2) : 1.0 - std::cos(e);
    const double half_gap = e < 1.0 ? 0.5 * w_minus_sin_series(e) / e : 0.5 - std::sin(e) / (2.0 * e);
    // 2 - 2cos e - e sin e = 4 sin(e/2) (sin(e/2) - (e/2) cos(e/2))
    const double h = 0.5 * e;
    double last;
    if (h < 0.5) {
        // sin h - h cos h = sum_k (-1)^{k+1} h^{2k+1} 2k / (2k+1)!
        const double h2 = h * h;
        double term = h * h2 / 3.0;  // k = 1
        double sum = term;
        for (int k = 2; k < 30; ++k) {
            term *= -h2 / static_cast<double>((2 * k) * (2 * k + 1)) * static_cast<double>(2 * k) /
                    static_cast<double>(2 * k - 2);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        last = 4.0 * std::sin(h) * sum;
    } else {
        last = 2.0 - 2.0 * std::cos(e) - e * std::sin(e);
    }
    return std::pow(u_norm, 2 * m) * std::pow(half_gap, m - 1) * std::pow(2.0 * one_minus_cos, n - 1) * last;
}

double jacobian_envelope(double u_norm, double eta_norm, int n, int m) {
    return std::pow(u_norm, 2 * m) * std::pow(eta_norm, 2 * (m + n)) * std::pow(2.0 * kPi - eta_norm, 2 * n - 1);
}

}  // namespace htype
