#pragma once

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "htype/algebra.hpp"

namespace htype {

using Rational = boost::multiprecision::cpp_rational;

/// Exponents over (x_1..x_{2n}, z_1..z_m).
struct Monomial {
    std::vector<int> exps;

    int weight(int horizontal) const;
    int degree() const;
    /// Graded-lexicographic order: by degree, then lexicographic (x_1 first).
    friend bool operator<(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial& a, const Monomial& b) = default;
};

/// Sparse polynomial on R^{2n+m}. No zero coefficients are stored.
template <class T>
class Polynomial {
public:
    using Terms = std::map<Monomial, T>;

    Polynomial() = default;
    Polynomial(int n, int m) : n_(n), m_(m) {}

    static Polynomial constant(int n, int m, const T& c);
    /// Variable index v in [0, 2n+m): x_{v+1} for v < 2n, z_{v-2n+1} otherwise.
    static Polynomial variable(int n, int m, int v);
    static Polynomial x(int n, int m, int i) { return variable(n, m, i - 1); }
    static Polynomial z(int n, int m, int j) { return variable(n, m, 2 * n + j - 1); }

    int n() const { return n_; }
    int m() const { return m_; }
    int nvars() const { return 2 * n_ + m_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Monomial& mono, const T& c);
    T coefficient(const Monomial& mono) const;
    /// Value at the origin.
    T constant_term() const;

    /// Highest homogeneous weight, or -1 for the zero polynomial.
    int weight() const;
    bool is_weight_homogeneous() const;

    Polynomial derivative(int v) const;
    T evaluate(const std::vector<T>& point) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const T& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const T& c) { return a *= c; }
    friend Polynomial operator*(const T& c, Polynomial a) { return a *= c; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) { return a.times(b); }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.n_ == b.n_ && a.m_ == b.m_ && a.terms_ == b.terms_;
    }

    std::string to_string() const;

private:
    Polynomial times(const Polynomial& o) const;
    void check_compatible(const Polynomial& o) const;

    int n_ = 1;
    int m_ = 1;
    Terms terms_;
};

using RationalPolynomial = Polynomial<Rational>;
using RealPolynomial = Polynomial<double>;

/// Parses `coef * x1^a * ... * zm^c` sums; coefficients may be `p/q`.
template <class T>
Polynomial<T> parse_polynomial(const std::string& text, int n, int m);

/// Left-invariant field X_i = d/dx_i + (1/2) sum_j <J_j x, e_i> d/dz_j, i in 1..2n.
template <class T>
Polynomial<T> apply_xi(const Structure& s, const Polynomial<T>& p, int i);
/// Right-invariant field with the sign of the z-term flipped.
template <class T>
Polynomial<T> apply_xi_hat(const Structure& s, const Polynomial<T>& p, int i);
/// L = sum_i X_i^2.
template <class T>
Polynomial<T> apply_l(const Structure& s, const Polynomial<T>& p);
/// Delta_x + <grad_x, J_{grad_z} x> + |x|^2 Delta_z / 4, evaluated term by term.
template <class T>
Polynomial<T> apply_l_three_terms(const Structure& s, const Polynomial<T>& p);
/// sum_i (X_i p)^2.
template <class T>
Polynomial<T> grad_sq(const Structure& s, const Polynomial<T>& p);
/// (L(p^2) - 2 p L p) / 2.
template <class T>
Polynomial<T> carre_du_champ(const Structure& s, const Polynomial<T>& p);

/// Coefficients c_k = L^k p / k! of the terminating series P_t p = sum_k t^k c_k.
template <class T>
std::vector<Polynomial<T>> heat_series(const Structure& s, const Polynomial<T>& p);
/// P_t p as a polynomial in the group variables for fixed t.
template <class T>
Polynomial<T> heat_poly(const Structure& s, const Polynomial<T>& p, const T& t);

/// Univariate polynomial in t; index k holds the t^k coefficient.
using RationalSeries = std::vector<Rational>;

struct K2Parts {
    RationalSeries numerator;    // |grad P_t f (0)|^2
    RationalSeries denominator;  // P_t(|grad f|^2)(0)
};

/// Ingredients of k_2(t) for f = x_1 + z_1 x_2 on the Heisenberg-Weyl group H_n.
K2Parts k2_parts(int n);
/// Exact k_2(t) for rational t. Throws std::domain_error on a zero denominator.
Rational k2_ratio_exact(int n, const Rational& t);
double k2_ratio(int n, double t);

struct K2Maximum {
    double t = 0.0;
    double value = 0.0;
};

/// Maximizes k_2 over t in (0, 1] by bisection on the sign of its derivative.
K2Maximum maximize_k2(int n);

Rational series_eval(const RationalSeries& c, const Rational& t);
double series_eval(const RationalSeries& c, double t);

}  // namespace htype
