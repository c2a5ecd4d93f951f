#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "htype/algebra.hpp"
#include "htype/bessel.hpp"
#include "htype/heatkernel.hpp"

using namespace htype;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Composite Simpson rule, independent of the library quadrature.
double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 ? 4 : 2);
    return sum * h / 3;
}

// Heisenberg H_1 kernel straight from its one-dimensional Fourier integral.
double heisenberg_direct(double t, double r, double z) {
    auto f = [&](double l) {
        if (l == 0.0) return std::exp(-r * r / (4 * t)) / (4 * pi * t) / pi;
        return std::cos(l * z) * l / (4 * pi * std::sinh(t * l)) * std::exp(-0.25 * l * r * r / std::tanh(t * l)) / pi;
    };
    return simpson(f, 0.0, 80.0 / t, 400000);
}

KernelQuery query(int n, int m, double r, double s, double t = 1.0, double tol = 1e-10) {
    KernelQuery q;
    q.n = n;
    q.m = m;
    q.t = t;
    q.r = r;
    q.s = s;
    q.rel_tol = tol;
    return q;
}

}  // namespace

TEST_CASE("reference values") {
    struct Case {
        int n, m;
        double r, s, value;
    };
    // 30-digit evaluations of the radial Fourier integral.
    const Case cases[] = {
        {1, 1, 1.0, 1.0, 0.010696725237946683},   {1, 1, 0.5, 3.0, 3.0063833754709095e-5},
        {2, 3, 0.2, 4.0, 8.5985428355844841e-8},  {1, 2, 1.0, 1.0, 0.0061185358672246132},
        {1, 3, 3.0, 3.0, 1.6046403739958568e-5},
    };
    for (const Case& c : cases) {
        CAPTURE(c.n);
        CAPTURE(c.m);
        CAPTURE(c.r);
        CAPTURE(c.s);
        const EvalResult e = p1(query(c.n, c.m, c.r, c.s));
        CHECK(e.converged);
        CHECK(rel(e.value, c.value) < 1e-9);
        CHECK(std::abs(e.log_value - std::log(c.value)) < 1e-9);
        if (c.m % 2 == 1) CHECK(rel(p1_hankel(query(c.n, c.m, c.r, c.s)).value, c.value) < 1e-9);
    }
    CHECK(rel(p1(query(1, 1, 0.0, 0.0)).value, 1.0 / 16) < 1e-12);
}

TEST_CASE("far from the identity the contour route stays accurate") {
    const EvalResult h = p1_hankel(query(1, 1, 0.0, 8.0));
    CHECK(h.converged);
    CHECK(rel(h.value, 3.0403891772783754e-12) < 1e-9);
    CHECK(h.method == methods::hankel);
    const EvalResult b = p1(query(1, 1, 0.0, 8.0));
    if (!b.converged) CHECK_FALSE(b.diagnostic.empty());
}

TEST_CASE("mehler kernel") {
    for (int n : {1, 2, 3}) {
        const double t = 0.7, r = 1.3;
        CHECK(rel(mehler(t, 0.0, r, n), std::pow(4 * pi * t, -n) * std::exp(-r * r / (4 * t))) < 1e-15);
        CHECK(rel(mehler(t, 1e-9, r, n), mehler(t, 0.0, r, n)) < 1e-12);
        const double lambda = 2.2;
        CHECK(rel(mehler(t, lambda, r, n), std::pow(t, -n) * mehler(1.0, t * lambda, r / std::sqrt(t), n)) < 1e-13);
        // int over R^{2n} is cosh(t lambda)^{-n}
        const double area = bessel::sphere_area(2 * n);
        const double mass = simpson([&](double x) { return area * std::pow(x, 2 * n - 1) * mehler(t, lambda, x, n); },
                                    0.0, 30.0, 20000);
        CHECK(rel(mass, std::pow(std::cosh(t * lambda), -n)) < 1e-10);
    }
}

TEST_CASE("heisenberg closed form") {
    for (double t : {1.0, 2.0, 0.5})
        for (double r : {0.0, 0.7, 2.0})
            for (double z : {0.0, 0.4, 1.5}) {
                CAPTURE(t);
                CAPTURE(r);
                CAPTURE(z);
                const EvalResult e = pt(query(1, 1, r, z, t));
                CHECK(e.converged);
                CHECK(rel(e.value, heisenberg_direct(t, r, z)) < 1e-10);
            }
}

TEST_CASE("value at the identity") {
    for (int n : {1, 2})
        for (int m : {1, 2, 3, 4}) {
            const double area = bessel::sphere_area(m);
            const double integral = simpson(
                [&](double l) { return l == 0.0 ? (m == 1 ? area : 0.0) : area * std::pow(l, m - 1) * std::pow(l / std::sinh(l), n); },
                0.0, 80.0, 200000);
            CHECK(rel(p1(query(n, m, 0.0, 0.0)).value, kernel_prefactor(n, m) * integral) < 1e-10);
        }
}

TEST_CASE("bessel and hankel evaluators agree") {
    for (int n : {1, 2})
        for (int m : {1, 3})
            for (double r : {0.0, 0.5, 1.5, 3.0})
                for (double s : {0.2, 1.0, 2.5, 5.0}) {
                    const auto q = query(n, m, r, s);
                    const EvalResult a = p1(q), b = p1_hankel(q);
                    CHECK(rel(a.value, b.value) <= 2 * q.rel_tol);
                }
    CHECK_THROWS(p1_hankel(query(1, 2, 1.0, 1.0)));
}

TEST_CASE("dilation") {
    for (auto [n, m] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 2}, std::pair{2, 3}}) {
        const double t = 0.8, r = 0.9, s = 0.6, a = 1.7;
        const double lhs = pt(query(n, m, r, s, t)).value;
        const double rhs = std::pow(a, 2 * (n + m)) * pt(query(n, m, a * r, a * a * s, a * a * t)).value;
        CHECK(rel(lhs, rhs) < 1e-10);
    }
    double prev = pt(query(1, 1, 0.5, 0.5, 1.0)).value;
    for (double t = 1.5; t < 40; t *= 1.5) {
        const double v = pt(query(1, 1, 0.5, 0.5, t)).value;
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS(pt(query(1, 1, 0.5, 0.5, 0.0)));
}

TEST_CASE("gradient against finite differences") {
    const double h = 1e-4;
    for (auto [n, m] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 2}, std::pair{2, 3}})
        for (double r : {0.4, 1.2})
            for (double s : {0.3, 1.5}) {
                CAPTURE(n);
                CAPTURE(m);
                const auto q = query(n, m, r, s, 1.0, 1e-12);
                const KernelGradient g = kernel_gradient(q);
                CHECK(g.converged);
                const double dr = (p1(query(n, m, r + h, s, 1.0, 1e-13)).value - p1(query(n, m, r - h, s, 1.0, 1e-13)).value) / (2 * h);
                const double ds = (p1(query(n, m, r, s + h, 1.0, 1e-13)).value - p1(query(n, m, r, s - h, 1.0, 1e-13)).value) / (2 * h);
                const double p = p1(q).value;
                CHECK(std::abs(g.dp_dr - dr) < 1e-6 * p);
                CHECK(std::abs(g.dp_ds - ds) < 1e-6 * p);
                // the q-integrals, up to the kernel constant
                const double c = kernel_prefactor(n, m);
                CHECK(std::abs(c * q1(q).value - (-2 / r) * dr) < 1e-6 * p);
                CHECK(std::abs(c * q2(q).value + ds) < 1e-6 * p);
                CHECK(rel(g.horizontal, 0.5 * c * r * std::hypot(q1(q).value, q2(q).value)) < 1e-10);
                CHECK(rel(g.vertical, std::abs(ds)) < 1e-5);
            }
    CHECK(q2(query(1, 1, 0.8, 0.0)).value == 0.0);
    CHECK(kernel_gradient(query(2, 1, 0.0, 0.7)).horizontal == 0.0);
}

TEST_CASE("heat equation residual") {
    const Structure s = build_heisenberg(1);
    Vec x(2), z(1);
    x << 0.5, 0.0;
    z << 0.2;
    const GroupPoint g{x, z};
    const double r1 = std::abs(heat_residual(s, 1.0, g, 1e-3));
    CHECK(r1 <= 1e-4);
    // second order: halving h divides the truncation error by about 4
    const double a = std::abs(heat_residual(s, 1.0, g, 0.2));
    const double b = std::abs(heat_residual(s, 1.0, g, 0.1));
    const double c = std::abs(heat_residual(s, 1.0, g, 0.05));
    CHECK(a / b == doctest::Approx(4.0).epsilon(0.1));
    CHECK(b / c == doctest::Approx(4.0).epsilon(0.1));
    // radial: rotating x gives the same residual
    Vec xr(2);
    xr << 0.0, 0.5;
    CHECK(std::abs(heat_residual(s, 1.0, {xr, z}, 0.1) - heat_residual(s, 1.0, g, 0.1)) < 1e-9);
}

TEST_CASE("hadamard descent") {
    CHECK(hadamard_check(1, 1, 1.0, 1.0) <= 1e-5);
    CHECK(hadamard_check(1, 1, 0.0, 0.0) <= 1e-5);
    CHECK(hadamard_check(2, 2, 0.8, 0.5) <= 1e-4);
}

TEST_CASE("normalization of the heisenberg kernel") {
    CHECK(std::abs(normalization(1, 1) - 1.0) < 1e-4);
    CHECK(std::abs(normalization(1, 1, 0.5) - 1.0) < 1e-4);
}
