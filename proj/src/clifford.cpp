// Minimal real Clifford modules from tensor words of 2x2 matrices, followed by
// the group-averaged inner product that makes every generator orthogonal.

#include "htype/algebra.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace htype {

namespace {

// Letters: 0 = I, 1 = E (rotation generator, E^2 = -I, skew),
// 2 = S1 (swap), 3 = S3 (reflection); S1, S3 symmetric with square +I.
// Distinct non-identity letters anticommute.
using Word = std::vector<int>;

Mat letter(int c) {
    Mat M(2, 2);
    switch (c) {
        case 0: M << 1, 0, 0, 1; break;
        case 1: M << 0, -1, 1, 0; break;
        case 2: M << 0, 1, 1, 0; break;
        default: M << 1, 0, 0, -1; break;
    }
    return M;
}

Mat kron(const Mat& A, const Mat& B) {
    Mat out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

Mat word_matrix(const Word& w) {
    Mat M = letter(w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) M = kron(M, letter(w[i]));
    return M;
}

bool anticommute(const Word& a, const Word& b) {
    int clashes = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0 && b[i] != 0 && a[i] != b[i]) ++clashes;
    }
    return clashes % 2 == 1;
}

// Words with an odd number of E letters are skew and square to -I.
std::vector<Word> complex_structure_words(int length) {
    std::vector<Word> out;
    int total = 1;
    for (int i = 0; i < length; ++i) total *= 4;
    for (int code = 0; code < total; ++code) {
        Word w(static_cast<std::size_t>(length));
        int c = code, e_count = 0;
        for (int i = length - 1; i >= 0; --i) {
            w[static_cast<std::size_t>(i)] = c % 4;
            c /= 4;
            if (w[static_cast<std::size_t>(i)] == 1) ++e_count;
        }
        if (e_count % 2 == 1) out.push_back(std::move(w));
    }
    return out;
}

bool extend_clique(const std::vector<Word>& pool, std::size_t start, int target,
                   std::vector<std::size_t>& chosen) {
    if (static_cast<int>(chosen.size()) == target) return true;
    for (std::size_t i = start; i < pool.size(); ++i) {
        bool ok = true;
        for (std::size_t c : chosen) {
            if (!anticommute(pool[c], pool[i])) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        chosen.push_back(i);
        if (extend_clique(pool, i + 1, target, chosen)) return true;
        chosen.pop_back();
    }
    return false;
}

int log2_exact(int d) {
    int k = 0;
    while ((1 << k) < d) ++k;
    return k;
}

// Anticommuting real generators with square -I acting on R^{clifford_module_dim(m)}.
std::vector<Mat> clifford_generators(int m) {
    if (m > 8) {
        // Period-8 step: Cl_{0,m} = Cl_{0,m-8} (x) Cl_{0,8}, glued by the
        // volume element of Cl_{0,8}, which is symmetric, squares to +I and
        // anticommutes with each of its eight generators.
        const std::vector<Mat> inner = clifford_generators(m - 8);
        const std::vector<Mat> eight = clifford_generators(8);
        Mat omega = Mat::Identity(eight[0].rows(), eight[0].cols());
        for (const auto& B : eight) omega = omega * B;
        const Mat Id = Mat::Identity(inner[0].rows(), inner[0].cols());
        std::vector<Mat> out;
        for (const auto& B : eight) out.push_back(kron(Id, B));
        for (const auto& A : inner) out.push_back(kron(A, omega));
        return out;
    }
    const int length = log2_exact(clifford_module_dim(m));
    const std::vector<Word> pool = complex_structure_words(length);
    std::vector<std::size_t> chosen;
    if (!extend_clique(pool, 0, m, chosen)) {
        throw std::logic_error("clifford_generators: no tensor-word representation found");
    }
    std::vector<Mat> out;
    for (std::size_t c : chosen) out.push_back(word_matrix(pool[c]));
    return out;
}

}  // namespace

int clifford_module_dim(int m) {
    if (m < 1) throw std::invalid_argument("clifford_module_dim: m must be >= 1");
    static constexpr std::array<int, 8> base{2, 4, 4, 8, 8, 8, 8, 16};
    int scale = 1;
    while (m > 8) {
        m -= 8;
        scale *= 16;
    }
    return scale * base[static_cast<std::size_t>(m - 1)];
}

Structure build_clifford(int m, int copies) {
    if (m < 1) throw std::invalid_argument("build_clifford: m must be >= 1");
    if (copies < 1) throw std::invalid_argument("build_clifford: copies must be >= 1");

    const std::vector<Mat> gens = clifford_generators(m);
    const Eigen::Index d = gens[0].rows();

    // Move to a skewed basis so the generators are no longer orthogonal; the
    // averaged inner product below has to restore that.
    Mat S = Mat::Identity(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) S(i, j) = 0.25 / static_cast<double>(j - i);
    const Mat S_inv = S.inverse();
    std::vector<Mat> rep;
    for (const auto& G : gens) rep.push_back(S * G * S_inv);

    // Average <pi(g) w, pi(g) w'> over the Clifford group. Signs do not change
    // pi(g)^T pi(g), so it suffices to sum over the 2^m ordered products.
    Mat gram = Mat::Zero(d, d);
    const std::uint64_t subsets = std::uint64_t{1} << m;
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        Mat P = Mat::Identity(d, d);
        for (int j = 0; j < m; ++j)
            if (mask & (std::uint64_t{1} << j)) P = P * rep[static_cast<std::size_t>(j)];
        gram.noalias() += P.transpose() * P;
    }
    gram /= static_cast<double>(subsets);

    // gram = R^T R; in coordinates y = R w the generators are orthogonal.
    const Eigen::LLT<Mat> llt(gram);
    if (llt.info() != Eigen::Success) throw std::runtime_error("build_clifford: averaged Gram not SPD");
    const Mat R = llt.matrixU();
    const Mat R_inv = R.inverse();

    const Eigen::Index two_n = d * copies;
    std::vector<Mat> J;
    for (const auto& P : rep) {
        Mat ortho = R * P * R_inv;
        // Remove rounding asymmetry; the exact matrix is skew.
        ortho = 0.5 * (ortho - ortho.transpose());
        // S is unit upper triangular, so R = S^{-1} and the exact result is the
        // signed permutation we started from; drop the rounding residue.
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) {
                const double k = std::round(ortho(i, j));
                if (std::abs(ortho(i, j) - k) < 1e-9) ortho(i, j) = k;
            }
        Mat block = Mat::Zero(two_n, two_n);
        for (int c = 0; c < copies; ++c) block.block(c * d, c * d, d, d) = ortho;
        J.push_back(std::move(block));
    }
    return Structure(static_cast<int>(two_n / 2), m, std::move(J));
}

}  // namespace htype
