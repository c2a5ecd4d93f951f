#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace htype {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// H-type structure realized on R^{2n} x R^m.
///
/// `J[j]` is the matrix of J_{u_j} in the standard basis e_1..e_{2n}; the
/// bracket is recovered from <J_z x, y> = <z, [x, y]>. Instances are
/// immutable once constructed.
class Structure {
public:
    Structure(int n, int m, std::vector<Mat> J);

    int n() const { return n_; }
    int m() const { return m_; }
    int horizontal_dim() const { return 2 * n_; }
    int dim() const { return 2 * n_ + m_; }
    const Mat& J(int j) const { return J_[static_cast<std::size_t>(j)]; }
    const std::vector<Mat>& matrices() const { return J_; }

    /// J_z x = sum_j z_j J_j x.
    Vec j_apply(const Vec& z, const Vec& x) const;
    /// Matrix of J_z.
    Mat j_matrix(const Vec& z) const;
    /// [x, y]_j = <J_j x, y>.
    Vec bracket(const Vec& x, const Vec& y) const;

private:
    int n_;
    int m_;
    std::vector<Mat> J_;
};

struct GroupPoint {
    Vec x;
    Vec z;

    static GroupPoint identity(const Structure& s);
    GroupPoint operator-() const { return {-x, -z}; }
};

/// (x, z) * (x', z') = (x + x', z + z' + [x, x']/2).
GroupPoint group_mul(const Structure& s, const GroupPoint& g, const GroupPoint& h);
GroupPoint group_inv(const GroupPoint& g);
/// Anisotropic dilation (alpha x, alpha^2 z). Throws for alpha <= 0.
GroupPoint dilate(double alpha, const GroupPoint& g);

// Built-in families.
Structure build_heisenberg(int n);
Structure build_complex_heisenberg();

/// Structure with J_Z e_{2i-1} = a_i e_{2i}, J_Z e_{2i} = -a_i e_{2i-1} in the
/// coordinates that make {X_i, Z} orthonormal. Only admissible when |a_i| = 1.
Structure build_anisotropic_heisenberg(const std::vector<double>& a);

/// Structure obtained from the minimal real module of the Clifford algebra
/// with m anticommuting generators squaring to -1, repeated `copies` times and
/// made orthogonal by averaging an inner product over the finite Clifford
/// group {+-1, +-u_{i1}...u_{ik}}.
Structure build_clifford(int m, int copies = 1);

/// Dimension of the minimal real module on which m anticommuting complex
/// structures act (2, 4, 4, 8, 8, 8, 8, 16, then x16 every 8).
int clifford_module_dim(int m);

/// Hurwitz-Radon function rho(k) = 8p + 2^q for k = a 2^{4p+q}, a odd.
int hurwitz_radon(std::int64_t k);
/// An H-type group of dimensions (2n, m) exists iff m < rho(2n).
bool exists_htype(std::int64_t two_n, std::int64_t m);

struct PropertyCheck {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::vector<PropertyCheck> checks;
    bool pass = true;

    const PropertyCheck* find(const std::string& name) const;
};

struct VerifyOptions {
    double tol = 1e-10;
    int samples = 200;
    std::uint64_t seed = 0x5eed'0f'4a11ULL;
};

/// Checks the J_Z identities on all basis pairs and `samples` random unit
/// directions. Failures are reported, never thrown.
VerificationReport verify_htype(const Structure& s, const VerifyOptions& opt = {});

namespace check_names {
inline constexpr const char* skew = "skew-adjoint";
inline constexpr const char* square = "J_z^2 = -|z|^2 I";
inline constexpr const char* clifford = "J_jJ_k + J_kJ_j = -2 delta_jk I";
inline constexpr const char* cross_norm = "<J_z x, J_w x> = <z,w>|x|^2";
inline constexpr const char* isometry = "<J_z x, J_z y> = <x,y>|z|^2";
inline constexpr const char* bracket_identity = "[x, J_z x] = |x|^2 z";
}  // namespace check_names

}  // namespace htype
