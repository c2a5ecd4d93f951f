#include "htype/algebra.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace htype {

namespace {

void require_dim(const Vec& v, int expected, const char* what) {
    if (v.size() != expected) {
        throw std::invalid_argument(std::string(what) + ": expected length " +
                                    std::to_string(expected) + ", got " +
                                    std::to_string(v.size()));
    }
}

Vec random_unit(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> normal;
    Vec v(dim);
    do {
        for (int i = 0; i < dim; ++i) v[i] = normal(rng);
    } while (v.norm() < 1e-8);
    return v / v.norm();
}

}  // namespace

Structure::Structure(int n, int m, std::vector<Mat> J) : n_(n), m_(m), J_(std::move(J)) {
    if (n < 1) throw std::invalid_argument("Structure: n must be >= 1");
    if (m < 1) throw std::invalid_argument("Structure: m must be >= 1");
    if (static_cast<int>(J_.size()) != m) {
        throw std::invalid_argument("Structure: expected " + std::to_string(m) + " matrices");
    }
    for (const auto& Jj : J_) {
        if (Jj.rows() != 2 * n || Jj.cols() != 2 * n) {
            throw std::invalid_argument("Structure: matrices must be 2n x 2n");
        }
        if (!Jj.allFinite()) throw std::invalid_argument("Structure: non-finite entry");
    }
}

Vec Structure::j_apply(const Vec& z, const Vec& x) const {
    require_dim(z, m_, "j_apply z");
    require_dim(x, 2 * n_, "j_apply x");
    Vec out = Vec::Zero(2 * n_);
    for (int j = 0; j < m_; ++j) {
        if (z[j] != 0.0) out.noalias() += z[j] * (J_[j] * x);
    }
    return out;
}

Mat Structure::j_matrix(const Vec& z) const {
    require_dim(z, m_, "j_matrix z");
    Mat out = Mat::Zero(2 * n_, 2 * n_);
    for (int j = 0; j < m_; ++j) out += z[j] * J_[j];
    return out;
}

Vec Structure::bracket(const Vec& x, const Vec& y) const {
    require_dim(x, 2 * n_, "bracket x");
    require_dim(y, 2 * n_, "bracket y");
    Vec out(m_);
    for (int j = 0; j < m_; ++j) out[j] = (J_[j] * x).dot(y);
    return out;
}

GroupPoint GroupPoint::identity(const Structure& s) {
    return {Vec::Zero(s.horizontal_dim()), Vec::Zero(s.m())};
}

GroupPoint group_mul(const Structure& s, const GroupPoint& g, const GroupPoint& h) {
    require_dim(g.z, s.m(), "group_mul g.z");
    require_dim(h.z, s.m(), "group_mul h.z");
    return {g.x + h.x, g.z + h.z + 0.5 * s.bracket(g.x, h.x)};
}

GroupPoint group_inv(const GroupPoint& g) { return -g; }

GroupPoint dilate(double alpha, const GroupPoint& g) {
    if (!(alpha > 0.0)) throw std::invalid_argument("dilate: alpha must be positive");
    return {alpha * g.x, alpha * alpha * g.z};
}

Structure build_heisenberg(int n) {
    if (n < 1) throw std::invalid_argument("build_heisenberg: n must be >= 1");
    Mat J = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        J(2 * i + 1, 2 * i) = 1.0;   // J e_{2i-1} = e_{2i}
        J(2 * i, 2 * i + 1) = -1.0;  // J e_{2i} = -e_{2i-1}
    }
    return Structure(n, 1, {J});
}

Structure build_anisotropic_heisenberg(const std::vector<double>& a) {
    const int n = static_cast<int>(a.size());
    if (n < 1) throw std::invalid_argument("build_anisotropic_heisenberg: empty coefficient list");
    Mat J = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        J(2 * i + 1, 2 * i) = a[i];
        J(2 * i, 2 * i + 1) = -a[i];
    }
    return Structure(n, 1, {J});
}

Structure build_complex_heisenberg() {
    // Slots (X1, X2, Y1, Y2) = (e1, e2, e3, e4).
    Mat J1 = Mat::Zero(4, 4);
    Mat J2 = Mat::Zero(4, 4);
    auto set = [](Mat& J, int from, int to, double sign) { J(to, from) = sign; };
    set(J1, 0, 2, 1.0);   // X1 -> Y1
    set(J1, 1, 3, -1.0);  // X2 -> -Y2
    set(J1, 2, 0, -1.0);  // Y1 -> -X1
    set(J1, 3, 1, 1.0);   // Y2 -> X2
    set(J2, 0, 3, 1.0);   // X1 -> Y2
    set(J2, 1, 2, 1.0);   // X2 -> Y1
    set(J2, 2, 1, -1.0);  // Y1 -> -X2
    set(J2, 3, 0, -1.0);  // Y2 -> -X1
    return Structure(2, 2, {J1, J2});
}

int hurwitz_radon(std::int64_t k) {
    if (k < 1) throw std::invalid_argument("hurwitz_radon: k must be >= 1");
    int e = 0;
    while (k % 2 == 0) {
        k /= 2;
        ++e;
    }
    const int p = e / 4;
    const int q = e % 4;
    return 8 * p + (1 << q);
}

bool exists_htype(std::int64_t two_n, std::int64_t m) {
    if (two_n < 2 || two_n % 2 != 0) {
        throw std::invalid_argument("exists_htype: horizontal dimension must be even and positive");
    }
    if (m < 1) throw std::invalid_argument("exists_htype: m must be >= 1");
    return m < hurwitz_radon(two_n);
}

const PropertyCheck* VerificationReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

VerificationReport verify_htype(const Structure& s, const VerifyOptions& opt) {
    const int d = s.horizontal_dim();
    const int m = s.m();
    const Mat I = Mat::Identity(d, d);
    std::mt19937_64 rng(opt.seed);

    double skew = 0.0, square = 0.0, cliff = 0.0, cross = 0.0, iso = 0.0, brk = 0.0;

    for (int j = 0; j < m; ++j) {
        const Mat& Jj = s.J(j);
        skew = std::max(skew, (Jj + Jj.transpose()).cwiseAbs().maxCoeff());
        square = std::max(square, (Jj * Jj + I).cwiseAbs().maxCoeff());
        for (int k = 0; k < m; ++k) {
            Mat anti = Jj * s.J(k) + s.J(k) * Jj;
            if (j == k) anti += 2.0 * I;
            cliff = std::max(cliff, anti.cwiseAbs().maxCoeff());
        }
    }

    // Basis pairs for the vector identities.
    for (int j = 0; j < m; ++j) {
        const Vec z = Vec::Unit(m, j);
        for (int a = 0; a < d; ++a) {
            const Vec x = Vec::Unit(d, a);
            const Vec Jx = s.j_apply(z, x);
            brk = std::max(brk, (s.bracket(x, Jx) - z).cwiseAbs().maxCoeff());
            for (int k = 0; k < m; ++k) {
                const Vec w = Vec::Unit(m, k);
                cross = std::max(cross, std::abs(Jx.dot(s.j_apply(w, x)) - z.dot(w)));
            }
            for (int b = 0; b < d; ++b) {
                const Vec y = Vec::Unit(d, b);
                iso = std::max(iso, std::abs(Jx.dot(s.j_apply(z, y)) - x.dot(y)));
            }
        }
    }

    for (int sample = 0; sample < opt.samples; ++sample) {
        const Vec z = random_unit(rng, m);
        const Vec w = random_unit(rng, m);
        const Vec x = random_unit(rng, d);
        const Vec y = random_unit(rng, d);
        const Mat Jz = s.j_matrix(z);
        skew = std::max(skew, (Jz + Jz.transpose()).cwiseAbs().maxCoeff());
        square = std::max(square, (Jz * Jz + I).cwiseAbs().maxCoeff());
        const Vec Jzx = Jz * x;
        cross = std::max(cross, std::abs(Jzx.dot(s.j_apply(w, x)) - z.dot(w)));
        iso = std::max(iso, std::abs(Jzx.dot(Jz * y) - x.dot(y)));
        brk = std::max(brk, (s.bracket(x, Jzx) - z).cwiseAbs().maxCoeff());
    }

    VerificationReport report;
    auto add = [&](const char* name, double dev) {
        PropertyCheck c{name, dev, opt.tol, dev <= opt.tol};
        report.pass = report.pass && c.pass;
        report.checks.push_back(std::move(c));
    };
    add(check_names::skew, skew);
    add(check_names::square, square);
    add(check_names::clifford, cliff);
    add(check_names::cross_norm, cross);
    add(check_names::isometry, iso);
    add(check_names::bracket_identity, brk);
    return report;
}

}  // namespace htype
