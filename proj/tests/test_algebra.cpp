#include <doctest.h>

#include <cmath>
#include <random>

#include "htype/algebra.hpp"
#include "htype/io.hpp"

using namespace htype;

namespace {

Vec vec(std::initializer_list<double> v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

double max_abs(const Mat& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("heisenberg n=1 has J1 e1 = e2") {
    const Structure s = build_heisenberg(1);
    Mat expect(2, 2);
    expect << 0, -1, 1, 0;
    CHECK(max_abs(s.J(0) - expect) == 0.0);
    CHECK(max_abs(s.J(0) * s.J(0) + Mat::Identity(2, 2)) == 0.0);
    CHECK(s.bracket(vec({1, 0}), vec({0, 1}))(0) == 1.0);
}

TEST_CASE("heisenberg n=2 brackets") {
    const Structure s = build_heisenberg(2);
    CHECK(s.bracket(vec({1, 0, 0, 0}), vec({0, 1, 0, 0}))(0) == 1.0);
    CHECK(s.bracket(vec({0, 0, 1, 0}), vec({0, 0, 0, 1}))(0) == 1.0);
    CHECK(s.bracket(vec({1, 0, 0, 0}), vec({0, 0, 1, 0}))(0) == 0.0);
}

TEST_CASE("bracket examples") {
    const Structure s = build_heisenberg(1);
    CHECK(s.bracket(vec({1, 1}), vec({-1, 1}))(0) == 2.0);
    const Vec x = vec({0.3, -1.7});
    CHECK(s.bracket(x, x)(0) == 0.0);
}

TEST_CASE("complex heisenberg relations") {
    const Structure s = build_complex_heisenberg();
    REQUIRE(s.n() == 2);
    REQUIRE(s.m() == 2);
    CHECK(max_abs(s.J(0) * s.J(1) + s.J(1) * s.J(0)) == 0.0);
    CHECK(verify_htype(s).pass);
}

TEST_CASE("group law") {
    const Structure s = build_heisenberg(1);
    const GroupPoint e1{vec({1, 0}), vec({0})};
    const GroupPoint e2{vec({0, 1}), vec({0})};
    const GroupPoint p = group_mul(s, e1, e2);
    CHECK(p.x(0) == 1.0);
    CHECK(p.x(1) == 1.0);
    CHECK(p.z(0) == 0.5);

    const GroupPoint g{vec({0.4, -2.0}), vec({1.5})};
    const GroupPoint id = GroupPoint::identity(s);
    const GroupPoint a = group_mul(s, g, id);
    CHECK(max_abs(a.x - g.x) == 0.0);
    CHECK(max_abs(a.z - g.z) == 0.0);
    const GroupPoint b = group_mul(s, g, group_inv(g));
    CHECK(b.x.norm() == 0.0);
    CHECK(b.z.norm() == 0.0);
}

TEST_CASE("group law is associative and dilations are automorphisms") {
    const Structure s = build_clifford(3, 2);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    auto random_point = [&] {
        GroupPoint g{Vec(s.horizontal_dim()), Vec(s.m())};
        for (Eigen::Index i = 0; i < g.x.size(); ++i) g.x(i) = nd(rng);
        for (Eigen::Index j = 0; j < g.z.size(); ++j) g.z(j) = nd(rng);
        return g;
    };
    for (int k = 0; k < 50; ++k) {
        const GroupPoint a = random_point(), b = random_point(), c = random_point();
        const GroupPoint l = group_mul(s, group_mul(s, a, b), c);
        const GroupPoint r = group_mul(s, a, group_mul(s, b, c));
        CHECK((l.z - r.z).norm() < 1e-12);
        const double alpha = 0.3 + std::abs(nd(rng));
        const GroupPoint lhs = dilate(alpha, group_mul(s, a, b));
        const GroupPoint rhs = group_mul(s, dilate(alpha, a), dilate(alpha, b));
        CHECK((lhs.x - rhs.x).norm() < 1e-12);
        CHECK((lhs.z - rhs.z).norm() < 1e-12 * (1 + lhs.z.norm()));
    }
}

TEST_CASE("dilation examples") {
    const GroupPoint g{vec({1, 0}), vec({1})};
    const GroupPoint d = dilate(2.0, g);
    CHECK(d.x(0) == 2.0);
    CHECK(d.x(1) == 0.0);
    CHECK(d.z(0) == 4.0);
    const GroupPoint same = dilate(1.0, g);
    CHECK(max_abs(same.x - g.x) == 0.0);
    CHECK_THROWS(dilate(0.0, g));
}

TEST_CASE("j_apply") {
    const Structure s = build_heisenberg(1);
    const Vec x = vec({0.25, 3.0});
    CHECK(max_abs(s.j_apply(vec({1}), x) - s.J(0) * x) == 0.0);

    const Structure q = build_clifford(3);
    const Vec z = vec({0.6, 0.0, 0.8});
    const Vec y = vec({1.0, -2.0, 0.5, 0.25});
    CHECK(std::abs(q.j_apply(z, y).norm() - y.norm()) < 1e-14);
    const Vec zz = vec({1.0, 2.0, -0.5});
    CHECK((q.j_apply(zz, q.j_apply(zz, y)) + zz.squaredNorm() * y).norm() < 1e-13);
}

TEST_CASE("clifford constructions satisfy the H-type identities") {
    for (int m = 1; m <= 9; ++m) {
        CAPTURE(m);
        const Structure s = build_clifford(m);
        CHECK(s.horizontal_dim() == clifford_module_dim(m));
        const VerificationReport r = verify_htype(s, {1e-12, 100, 3});
        CHECK(r.pass);
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const Mat a = s.J(j) * s.J(k) + s.J(k) * s.J(j);
                const Mat expect = j == k ? Mat(-2.0 * Mat::Identity(s.horizontal_dim(), s.horizontal_dim()))
                                          : Mat(Mat::Zero(s.horizontal_dim(), s.horizontal_dim()));
                CHECK(max_abs(a - expect) < 1e-12);
            }
    }
    CHECK(build_clifford(3).horizontal_dim() == 4);
    CHECK(build_clifford(8).horizontal_dim() == 16);
    CHECK(build_clifford(2, 3).horizontal_dim() == 12);
}

TEST_CASE("clifford m=1 is the heisenberg structure up to conjugation") {
    const Structure s = build_clifford(1);
    REQUIRE(s.horizontal_dim() == 2);
    // A skew 2x2 matrix squaring to -I is +-J of the Heisenberg group.
    CHECK(std::abs(std::abs(s.J(0)(1, 0)) - 1.0) < 1e-14);
    CHECK(std::abs(s.J(0)(0, 0)) < 1e-14);
}

TEST_CASE("verify_htype detects a scaled J") {
    const Structure h = build_heisenberg(2);
    const VerificationReport ok = verify_htype(h, {1e-12, 0, 1});
    for (const auto& c : ok.checks) CHECK(c.max_deviation == 0.0);
    for (const auto& c : verify_htype(h).checks) CHECK(c.max_deviation < 1e-15);

    const Structure bad(1, 1, {Mat(2.0 * build_heisenberg(1).J(0))});
    const VerificationReport r = verify_htype(bad);
    CHECK_FALSE(r.pass);
    const PropertyCheck* sq = r.find(check_names::square);
    REQUIRE(sq != nullptr);
    CHECK(sq->max_deviation == doctest::Approx(3.0));
    CHECK_FALSE(sq->pass);
    CHECK(r.find(check_names::skew)->pass);
}

TEST_CASE("verify_htype rejects unequal anisotropic weights") {
    const VerificationReport r = verify_htype(build_anisotropic_heisenberg({1.0, 2.0}));
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.find(check_names::square)->pass);
    CHECK(verify_htype(build_anisotropic_heisenberg({1.0, -1.0})).pass);
}

TEST_CASE("hurwitz-radon") {
    CHECK(hurwitz_radon(16) == 9);
    CHECK(hurwitz_radon(2) == 2);
    CHECK(hurwitz_radon(6) == 2);
    CHECK(hurwitz_radon(1) == 1);
    CHECK(hurwitz_radon(4) == 4);
    CHECK(hurwitz_radon(8) == 8);
    CHECK(hurwitz_radon(32) == 10);
    CHECK(exists_htype(16, 8));
    CHECK_FALSE(exists_htype(16, 9));
    CHECK(exists_htype(2, 1));
    CHECK_FALSE(exists_htype(2, 2));
    // m < rho(2n) matches the dimension of the minimal Clifford module.
    for (int m = 1; m <= 12; ++m) {
        const int d = clifford_module_dim(m);
        CHECK(exists_htype(d, m));
        if (d > 2) CHECK_FALSE(exists_htype(d / 2, m));
    }
}

TEST_CASE("structure json round trip") {
    const Structure s = build_clifford(3, 2);
    const Structure t = structure_from_json(structure_to_json(s));
    REQUIRE(t.n() == s.n());
    REQUIRE(t.m() == s.m());
    for (int j = 0; j < s.m(); ++j) CHECK(max_abs(t.J(j) - s.J(j)) == 0.0);
    nlohmann::json flat = {{"n", 1}, {"m", 1}, {"J", {{0, -1, 1, 0}}}};
    CHECK(max_abs(structure_from_json(flat).J(0) - build_heisenberg(1).J(0)) == 0.0);
    CHECK_THROWS_AS(structure_from_json({{"n", 1}, {"m", 1}, {"J", {{0, 1}}}}), std::invalid_argument);
}

TEST_CASE("presets") {
    CHECK(structure_preset("heisenberg-3").n() == 3);
    CHECK(structure_preset("clifford-3x2").horizontal_dim() == 8);
    CHECK_THROWS_AS(structure_preset("octonion"), std::invalid_argument);
    CHECK(structure_for_dims(2, 3).horizontal_dim() == 4);
    CHECK_THROWS_AS(structure_for_dims(1, 2), std::invalid_argument);
}
