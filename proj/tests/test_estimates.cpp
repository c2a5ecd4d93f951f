#include <doctest.h>

#include <cmath>

#include "htype/estimates.hpp"
#include "htype/geometry.hpp"

using namespace htype;

TEST_CASE("kernel envelope") {
    for (auto [n, m] : {std::pair{1, 1}, std::pair{2, 3}})
        for (double d : {0.5, 2.0, 6.0})
            CHECK(kernel_envelope(n, m, 0.0, d) == doctest::Approx(std::pow(d, 2 * n - m - 1) * std::exp(-d * d / 4)));
    for (double x : {0.1, 1.0})
        for (double d : {1.0, 3.0})
            CHECK(kernel_envelope(1, 1, x, d) == doctest::Approx(std::exp(-d * d / 4) / (1 + std::sqrt(x * d))));

    // eventually decreasing in d along a ray
    double prev = kernel_envelope(2, 1, 0.3, 4.0);
    for (double d = 4.1; d < 12; d += 0.1) {
        const double v = kernel_envelope(2, 1, 0.3, d);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("gradient envelope") {
    CHECK(gradient_envelope(1, 1, 0.0, 3.0) == 0.0);
    for (int n : {1, 2})
        for (double x : {0.01, 0.5, 3.0})
            for (double d : {3.0, 5.0, 9.0}) {
                const double ratio = gradient_envelope(n, 1, x, d) / kernel_envelope(n, 1, x, d);
                const double expect = x * d * d * (1 + std::pow(x * d, n - 0.5)) / (1 + std::pow(x * d, n + 0.5));
                CHECK(ratio == doctest::Approx(expect).epsilon(1e-12));
                CHECK(ratio <= 2 * (1 + d) * d);
            }
}

TEST_CASE("time-dependent envelope is dilation covariant") {
    const int n = 2, m = 1;
    for (double t : {0.25, 1.0, 4.0})
        for (double x : {0.0, 0.4, 1.5})
            for (double d : {x + 0.5, 3.0 + x}) {
                const double a = std::sqrt(t);
                const double lhs = kernel_envelope_t(n, m, t, a * x, a * d);
                const double rhs = std::pow(t, -(m + n)) * kernel_envelope_t(n, m, 1.0, x, d);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            }
}

TEST_CASE("small kernel scan") {
    ScanGrid g;
    g.n_d = 6;
    g.n_u = 6;
    g.rel_tol = 1e-8;
    const ScanReport r = scan_kernel_ratio(1, 1, g, 2.0);
    CHECK(r.pass);
    CHECK(r.points == 36);
    CHECK(r.unconverged == 0);
    CHECK(r.min_ratio > 0.0);
    CHECK(r.max_ratio / r.min_ratio < 50.0);
    CHECK(std::abs(cc_distance(r.argmax.r, r.argmax.s).d - r.argmax.d) < 1e-9 * r.argmax.d);

    // restricting to larger d only removes points
    const ScanReport tail = scan_kernel_ratio(1, 1, g, 5.0);
    CHECK(tail.pass);
    CHECK(tail.points < r.points);
    CHECK(tail.min_ratio >= r.min_ratio);
    CHECK(tail.max_ratio <= r.max_ratio);
}

TEST_CASE("gradient scans") {
    ScanGrid g;
    g.n_d = 5;
    g.n_u = 5;
    g.rel_tol = 1e-8;
    CHECK(scan_gradient_ratio(2, 1, g, 2.0).pass);
    ScanGrid near = g;
    near.d_min = 0.2;
    CHECK(scan_crude_gradient(1, 1, near).pass);
    const ScanReport v = scan_vertical_gradient(1, 1, near);
    CHECK(v.pass);
    CHECK(std::isfinite(v.max_ratio));
}

TEST_CASE("vertical drift with a zero minimum") {
    ScanGrid g;
    g.n_d = 3;
    g.n_u = 3;
    g.d_min = 0.5;
    g.d_max = 2.0;
    const DriftReport dr = refinement_drift(1, 1, EnvelopeKind::vertical_gradient, g, 0.0, 0.02);
    CHECK(dr.coarse.min_ratio == 0.0);
    CHECK(dr.drift_min == 0.0);
    CHECK(std::isfinite(dr.drift_max));
    CHECK(dr.pass == (dr.drift_max <= 0.02));
}

TEST_CASE("grid refinement keeps the old nodes") {
    ScanGrid g;
    g.n_d = 4;
    g.n_u = 7;
    const ScanGrid f = g.refined();
    CHECK(f.n_d == 7);
    CHECK(f.n_u == 13);
    CHECK(f.d_min == g.d_min);
    CHECK_FALSE(g.describe().empty());
    ScanGrid bad;
    bad.u_max = 2.0;
    CHECK_THROWS_AS(scan_kernel_ratio(1, 1, bad, 2.0), std::invalid_argument);
}
