#include "htype/heatkernel.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "htype/bessel.hpp"
#include "htype/geometry.hpp"
#include "htype/parallel.hpp"
#include "htype/quadrature.hpp"
#include "htype/simulate.hpp"

namespace htype {

namespace {

constexpr double kPi = std::numbers::pi;

enum class Integrand { p, q1, q2 };

void validate(const KernelQuery& q) {
    if (q.n < 1 || q.m < 1) throw std::invalid_argument("heat kernel: n and m must be >= 1");
    if (!(q.t > 0.0)) throw std::invalid_argument("heat kernel: t must be positive");
    if (!(q.r >= 0.0) || !(q.s >= 0.0)) throw std::invalid_argument("heat kernel: |x| and |z| must be nonnegative");
    if (!(q.rel_tol > 0.0 && q.rel_tol <= 1e-2)) throw std::invalid_argument("heat kernel: rel_tol must lie in (0, 1e-2]");
    if (!(q.abs_tol >= 0.0)) throw std::invalid_argument("heat kernel: abs_tol must be nonnegative");
}

// log(rho coth rho) pieces: returns rho coth rho and log(rho / sinh rho).
template <class Real>
void hyperbolic_parts(Real rho, Real& rho_coth, Real& log_rho_over_sinh) {
    if (rho < Real(1e-3)) {
        const Real r2 = rho * rho;
        rho_coth = 1 + r2 / 3 - r2 * r2 / 45;
        log_rho_over_sinh = -r2 / 6 + r2 * r2 / 180;
        return;
    }
    const Real e = std::exp(-2 * rho);
    rho_coth = rho * (1 + e) / (1 - e);
    log_rho_over_sinh = std::log(2 * rho) - rho - std::log1p(-e);
}

template <class Real>
Real ipow(Real x, int k) {
    Real out = 1;
    for (int i = 0; i < k; ++i) out *= x;
    return out;
}

// Integrand of the radial reduction, without the (2 pi)^{-m} (4 pi)^{-n} prefactor.
template <class Real>
Real radial_integrand(Integrand kind, int n, int m, Real r, Real s, Real rho) {
    Real rc, lg;
    hyperbolic_parts(rho, rc, lg);
    const Real g = std::exp(-r * r / 4 * rc + n * lg);
    switch (kind) {
        case Integrand::p:
            return bessel::sphere_fourier<Real>(m, rho * s) * ipow(rho, m - 1) * g;
        case Integrand::q1:
            return bessel::sphere_fourier<Real>(m, rho * s) * ipow(rho, m - 1) * rc * g;
        case Integrand::q2:
            return bessel::sphere_fourier_slope<Real>(m, rho * s) * ipow(rho, m) * g;
    }
    return 0;
}

// Upper bound of |integrand| beyond rho (rho >= 3), up to a constant.
double tail_bound(Integrand kind, int n, int m, double r, double rho) {
    const double rate = n + r * r / 4;
    const double amp = std::pow(2.0 * kPi, 0.5 * m) * 2.0 * std::max(1.0, bessel::sphere_area(m));
    double poly = std::pow(2.0 * rho, n) * ipow(rho, m - 1);
    if (kind != Integrand::p) poly *= (rho + 1);
    return amp * poly * std::exp(-rate * rho) / rate * (1.0 + (n + m) / (rate * rho));
}

// Lower-side guess of p_1 used only to place the truncation point.
double scale_guess(int n, int m, double r, double s) {
    const double d = cc_distance(r, s).d;
    return kernel_prefactor(n, m) * std::exp(-d * d / 4) / std::pow(1.0 + d, 2 * (n + m));
}

struct RealLinePlan {
    double R = 0.0;
    std::vector<double> breaks;
};

RealLinePlan plan_real_line(Integrand kind, const KernelQuery& q) {
    const double target =
        std::max(1e-3 * q.abs_tol / kernel_prefactor(q.n, q.m),
                 std::max(1e-300, 1e-3 * q.rel_tol * scale_guess(q.n, q.m, q.r, q.s) / kernel_prefactor(q.n, q.m)));
    double R = 3.0;
    while (R < 2000.0 && tail_bound(kind, q.n, q.m, q.r, R) > target) R += 1.0;
    RealLinePlan plan;
    plan.R = R;
    const double width = q.s > 1.0 ? std::min(1.0, kPi / (4.0 * q.s)) : 1.0;
    plan.breaks = quad::uniform_breaks(0.0, R, width);
    return plan;
}

template <class Real>
quad::Result<Real> integrate_real_line(Integrand kind, const KernelQuery& q, const RealLinePlan& plan) {
    const Real r = q.r, s = q.s;
    auto f = [&](Real rho) { return radial_integrand<Real>(kind, q.n, q.m, r, s, rho); };
    std::vector<Real> br(plan.breaks.begin(), plan.breaks.end());
    quad::Options opt;
    opt.rel_tol = q.rel_tol;
    opt.abs_tol = q.abs_tol / kernel_prefactor(q.n, q.m);
    return quad::integrate<Real>(f, br, opt);
}

// Real-line evaluation with precision escalation. `scale` multiplies the raw integral.
EvalResult evaluate_real_line(Integrand kind, const KernelQuery& q, double scale) {
    const RealLinePlan plan = plan_real_line(kind, q);
    EvalResult out;
    out.method = methods::bessel;
    auto res = integrate_real_line<double>(kind, q, plan);
    double value = res.value, err = res.abs_err;
    bool ok = res.converged;
    if (!ok) {
        auto ext = integrate_real_line<long double>(kind, q, plan);
        out.extended_precision = true;
        value = static_cast<double>(ext.value);
        err = static_cast<double>(ext.abs_err);
        ok = ext.converged;
        if (!ok) {
            out.diagnostic = "cancellation: error target not met even in extended precision (l1/|value| = " +
                             std::to_string(static_cast<double>(ext.l1 / std::abs(ext.value))) + ")";
        }
    }
    out.value = scale * value;
    out.abs_err = std::abs(scale) * err;
    out.converged = ok;
    out.log_value = out.value > 0 ? std::log(out.value) : -std::numeric_limits<double>::infinity();
    if (kind == Integrand::p && !(out.value > 0.0)) {
        out.diagnostic += out.diagnostic.empty() ? "" : "; ";
        out.diagnostic += "nonpositive kernel value";
    }
    return out;
}

// c_{m,k} of the Hankel expansion of S_m; m = 1 uses the single k = 0 term.
std::vector<std::pair<int, double>> hankel_coefficients(int m) {
    if (m == 1) return {{0, 1.0}};
    std::vector<std::pair<int, double>> c;
    const int h = (m - 1) / 2;
    for (int k = 1; k <= h; ++k) {
        const double v = std::tgamma(m - k - 1.0) / (std::pow(2.0, h - k) * std::tgamma(h - k + 1.0) * std::tgamma(k * 1.0));
        c.push_back({k, v});
    }
    return c;
}

EvalResult scale_to_t(EvalResult r, const KernelQuery& q, const char* tag_scaled) {
    if (q.t == 1.0) return r;
    const double f = std::pow(q.t, -(q.n + q.m));
    r.value *= f;
    r.abs_err *= f;
    r.log_value += -(q.n + q.m) * std::log(q.t);
    r.method = tag_scaled;
    return r;
}

KernelQuery at_unit_time(const KernelQuery& q) {
    KernelQuery u = q;
    u.t = 1.0;
    u.r = q.r / std::sqrt(q.t);
    u.s = q.s / q.t;
    u.abs_tol = q.abs_tol * std::pow(q.t, q.n + q.m);
    return u;
}

}  // namespace

double kernel_prefactor(int n, int m) { return std::pow(2.0 * kPi, -m) * std::pow(4.0 * kPi, -n); }

double mehler(double t, double lambda, double r, int n) {
    if (!(t > 0.0)) throw std::invalid_argument("mehler: t must be positive");
    const double l = std::abs(lambda);
    const double tl = t * l;
    if (tl < 1e-8) return std::pow(4.0 * kPi * t, -n) * std::exp(-r * r / (4.0 * t));
    // l / sinh(tl) and l coth(tl) in overflow-free form
    const double e = std::exp(-2.0 * tl);
    const double log_ratio = std::log(2.0 * l) - tl - std::log1p(-e);
    const double l_coth = l * (1.0 + e) / (1.0 - e);
    return std::exp(n * (log_ratio - std::log(4.0 * kPi)) - 0.25 * l_coth * r * r);
}

EvalResult p1(const KernelQuery& q) {
    validate(q);
    if (q.t != 1.0) throw std::invalid_argument("p1: t must be 1 (use pt)");
    return evaluate_real_line(Integrand::p, q, kernel_prefactor(q.n, q.m));
}

EvalResult q1(const KernelQuery& q) {
    validate(q);
    if (q.t != 1.0) throw std::invalid_argument("q1: t must be 1");
    EvalResult r = evaluate_real_line(Integrand::q1, q, 1.0);
    r.log_value = std::log(std::abs(r.value));
    return r;
}

EvalResult q2(const KernelQuery& q) {
    validate(q);
    if (q.t != 1.0) throw std::invalid_argument("q2: t must be 1");
    if (q.s == 0.0) {
        EvalResult r;
        r.method = methods::bessel;
        r.log_value = -std::numeric_limits<double>::infinity();
        return r;
    }
    EvalResult r = evaluate_real_line(Integrand::q2, q, 1.0);
    r.log_value = std::log(std::abs(r.value));
    return r;
}

EvalResult p1_hankel(const KernelQuery& q) {
    validate(q);
    if (q.t != 1.0) throw std::invalid_argument("p1_hankel: t must be 1 (use pt_hankel)");
    if (q.m % 2 == 0) throw std::invalid_argument("p1_hankel: m must be odd");
    if (!(q.s > 0.0)) throw std::invalid_argument("p1_hankel: |z| must be positive");

    using C = std::complex<double>;
    const int n = q.n, m = q.m;
    const double r = q.r, s = q.s;
    const DistanceResult dist = cc_distance(r, s);
    const double d = dist.d;

    // Integrate along Im rho = kappa, through the saddle where possible.
    const double delta = std::min(kPi / 2, n / std::max(s - n / kPi, 1e-300));
    const double kappa = std::min(dist.theta, kPi - delta);
    const double kcot = kappa < 1e-6 ? 1.0 - kappa * kappa / 3.0 : kappa / std::tan(kappa);
    const double E = kappa * s + 0.25 * r * r * kcot;

    const auto coeffs = hankel_coefficients(m);
    std::vector<double> weights;
    for (const auto& [k, c] : coeffs) weights.push_back(c * std::pow(s, k - m + 1));

    auto f = [&](double tau) {
        const C rho(tau, kappa);
        C rc, ros;  // rho coth rho, rho / sinh rho
        if (std::abs(rho) < 1e-4) {
            const C r2 = rho * rho;
            rc = 1.0 + r2 / 3.0 - r2 * r2 / 45.0;
            ros = 1.0 - r2 / 6.0 + 7.0 * r2 * r2 / 360.0;
        } else {
            const C sh = std::sinh(rho);
            rc = rho * std::cosh(rho) / sh;
            ros = rho / sh;
        }
        C base = std::exp(C(0.0, tau * s) - 0.25 * r * r * (rc - kcot));
        for (int i = 0; i < n; ++i) base *= ros;
        C sum = 0.0;
        const C mir = C(0.0, -1.0) * rho;
        for (std::size_t i = 0; i < coeffs.size(); ++i) sum += weights[i] * std::pow(mir, coeffs[i].first);
        return (base * sum).real();
    };

    // Tail: |integrand| <~ sum w_k |rho|^k (2|rho|)^n e^{-n tau} e^{-r^2/4 (tau - 1 - kcot)}.
    const double target = 1e-3 * std::max(q.rel_tol * std::exp(std::max(-700.0, E - d * d / 4)) / std::pow(1.0 + d, 2 * (n + m)),
                                          1e-300);
    auto bound = [&](double tau) {
        double b = 0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) b += std::abs(weights[i]) * std::pow(tau + kPi, coeffs[i].first);
        const double rate = n + r * r / 4;
        return b * std::pow(2.0 * (tau + kPi), n) * std::exp(-rate * tau + 0.25 * r * r * (1.0 + std::abs(kcot))) / rate;
    };
    double R = 3.0;
    while (R < 2000.0 && bound(R) > target) R += 1.0;

    std::vector<double> br{0.0};
    const double near = std::max(kPi - kappa, 1e-3);
    for (double b = near / 8; b < std::min(1.0, R); b *= 2) br.push_back(b);
    const double width = s > 1.0 ? std::min(1.0, kPi / (4.0 * s)) : 1.0;
    double a = br.back() > 0 ? br.back() : 0.0;
    const auto rest = quad::uniform_breaks(a, R, width);
    br.insert(br.end(), rest.begin() + 1, rest.end());

    quad::Options opt;
    opt.rel_tol = q.rel_tol / 4;
    const double pref = kernel_prefactor(n, m) * std::pow(2.0 * kPi, 0.5 * (m - 1));
    opt.abs_tol = q.abs_tol > 0 ? q.abs_tol * std::exp(std::min(E, 700.0)) / (2.0 * pref) : 0.0;
    const auto res = quad::integrate<double>(f, br, opt);

    EvalResult out;
    out.method = methods::hankel;
    const double scaled = 2.0 * res.value * pref;
    out.value = scaled * std::exp(-E);
    out.abs_err = 2.0 * res.abs_err * pref * std::exp(-E);
    out.log_value = scaled > 0 ? std::log(scaled) - E : -std::numeric_limits<double>::infinity();
    out.converged = res.converged;
    if (!res.converged) out.diagnostic = "quadrature did not reach the error target";
    if (!(scaled > 0)) out.diagnostic += (out.diagnostic.empty() ? "" : "; ") + std::string("nonpositive kernel value");
    return out;
}

EvalResult pt(const KernelQuery& q) {
    validate(q);
    return scale_to_t(p1(at_unit_time(q)), q, methods::scaled_bessel);
}

EvalResult pt_hankel(const KernelQuery& q) {
    validate(q);
    return scale_to_t(p1_hankel(at_unit_time(q)), q, methods::scaled_hankel);
}

KernelGradient kernel_gradient(const KernelQuery& q) {
    validate(q);
    const KernelQuery u = at_unit_time(q);
    const double c = kernel_prefactor(q.n, q.m);
    const EvalResult a = q1(u);
    const EvalResult b = q2(u);
    // d p_1 / dr = -(r/2) C q1,  d p_1 / ds = -C q2
    const double dr1 = -0.5 * u.r * c * a.value;
    const double ds1 = -c * b.value;
    // p_t(r, s) = t^{-(n+m)} p_1(r / sqrt t, s / t)
    const double f = std::pow(q.t, -(q.n + q.m));
    KernelGradient g;
    g.dp_dr = f * dr1 / std::sqrt(q.t);
    g.dp_ds = f * ds1 / q.t;
    // x^ and J_z^ x^ are orthonormal, so |grad p| = (r/2) C sqrt(q1^2 + q2^2) at t = 1.
    g.horizontal = f / std::sqrt(q.t) * 0.5 * u.r * c * std::hypot(a.value, b.value);
    g.vertical = std::abs(g.dp_ds);
    g.converged = a.converged && b.converged;
    return g;
}

double heat_residual(const Structure& s, double t, const GroupPoint& g, double h, double rel_tol) {
    const int hd = s.horizontal_dim();
    const int m = s.m();
    auto p = [&](const Vec& x, const Vec& z, double time) {
        KernelQuery q;
        q.n = s.n();
        q.m = m;
        q.t = time;
        q.r = x.norm();
        q.s = z.norm();
        q.rel_tol = rel_tol;
        return pt(q).value;
    };
    const double p0 = p(g.x, g.z, t);
    auto ex = [&](int i) { return Vec::Unit(hd, i); };
    auto ez = [&](int j) { return Vec::Unit(m, j); };

    double lap_x = 0.0;
    for (int i = 0; i < hd; ++i)
        lap_x += (p(g.x + h * ex(i), g.z, t) - 2 * p0 + p(g.x - h * ex(i), g.z, t)) / (h * h);
    double lap_z = 0.0;
    for (int j = 0; j < m; ++j)
        lap_z += (p(g.x, g.z + h * ez(j), t) - 2 * p0 + p(g.x, g.z - h * ez(j), t)) / (h * h);
    double mixed = 0.0;
    for (int j = 0; j < m; ++j) {
        const Vec jx = s.J(j) * g.x;
        for (int i = 0; i < hd; ++i) {
            if (jx(i) == 0.0) continue;
            const double d2 = (p(g.x + h * ex(i), g.z + h * ez(j), t) - p(g.x + h * ex(i), g.z - h * ez(j), t) -
                               p(g.x - h * ex(i), g.z + h * ez(j), t) + p(g.x - h * ex(i), g.z - h * ez(j), t)) /
                              (4 * h * h);
            mixed += jx(i) * d2;
        }
    }
    const double lp = lap_x + mixed + 0.25 * g.x.squaredNorm() * lap_z;
    const double dt = (p(g.x, g.z, t + h) - p(g.x, g.z, t - h)) / (2 * h);
    return std::abs(lp - dt) / p0;
}

double hadamard_check(int n, int m, double r, double s, double tol) {
    KernelQuery base;
    base.n = n;
    base.m = m;
    base.r = r;
    base.s = s;
    base.rel_tol = std::min(1e-2, tol / 10);
    const double target = p1(base).value;

    KernelQuery up = base;
    up.m = m + 1;
    up.abs_tol = 1e-3 * tol * target;
    auto f = [&](double w) {
        KernelQuery k = up;
        k.s = std::hypot(s, w);
        return p1(k).value;
    };
    // p^{(n, m+1)} decays like e^{-pi |w|} in w.
    const double W = std::max(s, 1.0) + (std::log(1.0 / tol) + 30.0) / kPi;
    std::vector<double> br = quad::uniform_breaks(0.0, W, 1.0);
    quad::Options opt;
    opt.rel_tol = tol / 10;
    const auto res = quad::integrate<double>(f, br, opt);
    return std::abs(2.0 * res.value - target) / target;
}

double normalization(int n, int m, double t, double tol) {
    const int hd = 2 * n;
    const double wx = bessel::sphere_area(hd);
    const double wz = bessel::sphere_area(m);
    // p_t concentrates on |x| <~ sqrt(t), |z| <~ t; beyond these radii the mass is below e^{-40}.
    const double Rx = std::sqrt(t) * (2.0 * std::sqrt(40.0 + 4.0 * (n + m)) + 2.0);
    const double Rz = t * (40.0 + 2.0 * (n + m)) / kPi;
    const double abs_floor = 1e-3 * tol * kernel_prefactor(n, m) * std::pow(t, -(n + m));

    auto inner = [&](double s) {
        auto f = [&](double r) {
            KernelQuery q;
            q.n = n;
            q.m = m;
            q.t = t;
            q.r = r;
            q.s = s;
            q.rel_tol = std::min(1e-2, tol / 10);
            q.abs_tol = abs_floor;
            return pt(q).value * std::pow(r, hd - 1);
        };
        quad::Options opt;
        opt.rel_tol = tol / 10;
        opt.abs_tol = 1e-3 * tol * kernel_prefactor(n, m) * std::pow(t, -(n + m)) * std::pow(t, 0.5 * hd);
        return quad::integrate<double>(f, quad::uniform_breaks(0.0, Rx, std::sqrt(t)), opt).value;
    };
    std::vector<double> zb = quad::uniform_breaks(0.0, Rz, t);
    quad::Options opt;
    opt.rel_tol = tol;
    const auto res = quad::integrate<double>(
        [&](double s) { return inner(s) * (m == 1 ? 1.0 : std::pow(s, m - 1)); }, zb, opt);
    return wx * wz * res.value;
}

SemigroupCheck semigroup_mc_check(const Structure& s, double t1, double t2, const GroupPoint& g,
                                  int n_samples, std::uint64_t seed, int steps) {
    SimConfig cfg;
    cfg.t = t2;
    cfg.steps = steps;
    cfg.n_paths = n_samples;
    cfg.seed = seed;
    const SampleBatch batch = simulate(s, cfg);
    std::vector<double> vals(batch.size());
    parallel_for(batch.size(), [&](std::size_t i) {
        const GroupPoint h = group_mul(s, g, group_inv(batch.point(i)));
        KernelQuery q;
        q.n = s.n();
        q.m = s.m();
        q.t = t1;
        q.r = h.x.norm();
        q.s = h.z.norm();
        q.rel_tol = 1e-8;
        q.abs_tol = 1e-12 * kernel_prefactor(q.n, q.m) * std::pow(t1, -(q.n + q.m));
        vals[i] = pt(q).value;
    });
    double sum = 0.0, sum_sq = 0.0;
    for (double v : vals) {
        sum += v;
        sum_sq += v * v;
    }
    const double nn = static_cast<double>(vals.size());
    SemigroupCheck out;
    out.lhs = sum / nn;
    out.sigma = std::sqrt(std::max(0.0, sum_sq / nn - out.lhs * out.lhs) / (nn - 1));
    KernelQuery q;
    q.n = s.n();
    q.m = s.m();
    q.t = t1 + t2;
    q.r = g.x.norm();
    q.s = g.z.norm();
    q.rel_tol = 1e-10;
    out.rhs = pt(q).value;
    return out;
}

}  // namespace htype
