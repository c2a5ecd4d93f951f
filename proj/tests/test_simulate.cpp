#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "htype/algebra.hpp"
#include "htype/polynomial.hpp"
#include "htype/simd/step.hpp"
#include "htype/simulate.hpp"

using namespace htype;

TEST_CASE("scalar and avx2 steps agree bit for bit") {
    if (!simd::avx2_available()) {
        MESSAGE("AVX2 not available; only the scalar kernel is exercised");
        return;
    }
    for (const Structure& s : {build_heisenberg(1), build_heisenberg(3), build_complex_heisenberg(), build_clifford(7)}) {
        const simd::StepPlan plan = simd::make_step_plan(s);
        const std::size_t lanes = 64;
        const int h = s.horizontal_dim(), m = s.m();
        std::mt19937_64 rng(17);
        std::normal_distribution<double> nd;
        std::vector<double> x(h * lanes), z(m * lanes), dx(h * lanes);
        for (double& v : x) v = nd(rng);
        for (double& v : z) v = nd(rng);
        std::vector<double> xa = x, za = z;
        for (int step = 0; step < 100; ++step) {
            for (double& v : dx) v = 0.1 * nd(rng);
            simd::step_scalar(plan, x.data(), z.data(), dx.data(), lanes);
            simd::step_avx2(plan, xa.data(), za.data(), dx.data(), lanes);
        }
        CHECK(x == xa);
        CHECK(z == za);
    }
}

TEST_CASE("one step matches the bracket rule") {
    const Structure s = build_complex_heisenberg();
    const simd::StepPlan plan = simd::make_step_plan(s);
    const std::size_t lanes = 4;
    std::vector<double> x(4 * lanes), z(2 * lanes, 0.0), dx(4 * lanes);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.1 * static_cast<double>(i) - 0.7;
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = 0.05 * static_cast<double>(i % 5) - 0.1;
    const std::vector<double> x0 = x;
    simd::step(simd::active_isa(), plan, x.data(), z.data(), dx.data(), lanes);
    for (std::size_t p = 0; p < lanes; ++p) {
        Vec xv(4), dv(4);
        for (int d = 0; d < 4; ++d) {
            xv(d) = x0[d * lanes + p];
            dv(d) = dx[d * lanes + p];
            CHECK(x[d * lanes + p] == xv(d) + dv(d));
        }
        const Vec b = 0.5 * s.bracket(xv, dv);
        for (int j = 0; j < 2; ++j) CHECK(std::abs(z[j * lanes + p] - b(j)) < 1e-15);
    }
}

TEST_CASE("simulation is deterministic and independent of the kernel variant") {
    const Structure s = build_heisenberg(2);
    const SimConfig cfg{0.5, 50, 300, 42};
    const SampleBatch a = simulate(s, cfg);
    const SampleBatch b = simulate(s, cfg);
    CHECK(a.xs == b.xs);
    CHECK(a.zs == b.zs);
    CHECK(a.size() == 300);

    setenv("HTYPE_SIMD", "scalar", 1);
    const SampleBatch c = simulate(s, cfg);
    unsetenv("HTYPE_SIMD");
    CHECK(a.xs == c.xs);
    CHECK(a.zs == c.zs);

    setenv("HTYPE_THREADS", "1", 1);
    const SampleBatch d = simulate(s, cfg);
    unsetenv("HTYPE_THREADS");
    CHECK(a.zs == d.zs);

    // a prefix of paths does not depend on the batch size
    const SampleBatch e = simulate(s, SimConfig{0.5, 50, 70, 42});
    for (std::size_t i = 0; i < e.zs.size(); ++i) CHECK(e.zs[i] == a.zs[i]);

    CHECK(path_seed(1, 0) != path_seed(1, 1));
    CHECK(path_seed(1, 0) != path_seed(2, 0));
}

TEST_CASE("monte carlo moments") {
    const Structure s = build_heisenberg(1);
    const double t = 1.0;
    const SampleBatch b = simulate(s, SimConfig{t, 200, 20000, 7});
    const MeanEstimate x1 = sample_mean(b, [](const GroupPoint& g) { return g.x(0); });
    CHECK(std::abs(x1.mean) < 3 * x1.sigma);
    const MeanEstimate r2 = sample_mean(b, [](const GroupPoint& g) { return g.x.squaredNorm(); });
    CHECK(std::abs(r2.mean - 4 * t) < 3 * r2.sigma);
    const MeanEstimate z2 = sample_mean(b, [](const GroupPoint& g) { return g.z(0) * g.z(0); });
    CHECK(std::abs(z2.mean - t * t) < 3 * z2.sigma);

    Vec zero(1);
    zero << 0.0;
    const ComplexEstimate c0 = char_z(b, zero);
    CHECK(c0.mean.real() == 1.0);
    CHECK(c0.mean.imag() == 0.0);
    Vec one(1);
    one << 1.0;
    const ComplexEstimate c1 = char_z(b, one);
    CHECK(std::abs(c1.mean.real() - 1 / std::cosh(t)) < 3 * c1.sigma_re);

    const RealPolynomial p = parse_polynomial<double>("x1^2 + x2^2", 1, 1);
    const MeanEstimate pm = polynomial_mean(b, p);
    CHECK(pm.mean == doctest::Approx(r2.mean).epsilon(1e-12));
}

TEST_CASE("kde agrees with the kernel in order of magnitude") {
    const Structure s = build_heisenberg(1);
    const SampleBatch b = simulate(s, SimConfig{1.0, 100, 20000, 3});
    const KdeReport r = kde_compare(b, {{1.0, 0.5}, {2.0, 1.0}}, 0.15);
    CHECK(r.all_positive);
    CHECK(r.max_rel_dev < 0.3);
}

TEST_CASE("invalid configurations") {
    const Structure s = build_heisenberg(1);
    CHECK_THROWS(simulate(s, SimConfig{-1.0, 10, 10, 1}));
    CHECK_THROWS(simulate(s, SimConfig{1.0, 0, 10, 1}));
}
