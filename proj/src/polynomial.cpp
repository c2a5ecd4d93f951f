#include "htype/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace htype {

int Monomial::weight(int horizontal) const {
    int w = 0;
    for (std::size_t v = 0; v < exps.size(); ++v) w += (static_cast<int>(v) < horizontal ? 1 : 2) * exps[v];
    return w;
}

int Monomial::degree() const {
    int d = 0;
    for (int e : exps) d += e;
    return d;
}

bool operator<(const Monomial& a, const Monomial& b) {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    // Higher power of an earlier variable sorts first, as in grlex.
    for (std::size_t v = 0; v < a.exps.size(); ++v) {
        if (a.exps[v] != b.exps[v]) return a.exps[v] > b.exps[v];
    }
    return false;
}

namespace {

template <class T>
bool is_zero_coef(const T& c) {
    return c == T(0);
}

std::string coef_string(const Rational& c) {
    std::ostringstream os;
    os << c;
    return os.str();
}

std::string coef_string(double c) {
    std::ostringstream os;
    os.precision(17);
    os << c;
    return os.str();
}

}  // namespace

template <class T>
Polynomial<T> Polynomial<T>::constant(int n, int m, const T& c) {
    Polynomial p(n, m);
    p.add_term(Monomial{std::vector<int>(static_cast<std::size_t>(2 * n + m), 0)}, c);
    return p;
}

template <class T>
Polynomial<T> Polynomial<T>::variable(int n, int m, int v) {
    if (v < 0 || v >= 2 * n + m) throw std::out_of_range("Polynomial::variable: index out of range");
    Polynomial p(n, m);
    Monomial mono{std::vector<int>(static_cast<std::size_t>(2 * n + m), 0)};
    mono.exps[static_cast<std::size_t>(v)] = 1;
    p.add_term(mono, T(1));
    return p;
}

template <class T>
void Polynomial<T>::add_term(const Monomial& mono, const T& c) {
    if (static_cast<int>(mono.exps.size()) != nvars()) {
        throw std::invalid_argument("Polynomial::add_term: monomial arity mismatch");
    }
    if (is_zero_coef(c)) return;
    auto it = terms_.find(mono);
    if (it == terms_.end()) {
        terms_.emplace(mono, c);
        return;
    }
    it->second += c;
    if (is_zero_coef(it->second)) terms_.erase(it);
}

template <class T>
T Polynomial<T>::coefficient(const Monomial& mono) const {
    auto it = terms_.find(mono);
    return it == terms_.end() ? T(0) : it->second;
}

template <class T>
T Polynomial<T>::constant_term() const {
    return coefficient(Monomial{std::vector<int>(static_cast<std::size_t>(nvars()), 0)});
}

template <class T>
int Polynomial<T>::weight() const {
    int w = -1;
    for (const auto& [mono, c] : terms_) w = std::max(w, mono.weight(2 * n_));
    return w;
}

template <class T>
bool Polynomial<T>::is_weight_homogeneous() const {
    const int w = weight();
    for (const auto& [mono, c] : terms_)
        if (mono.weight(2 * n_) != w) return false;
    return true;
}

template <class T>
Polynomial<T> Polynomial<T>::derivative(int v) const {
    if (v < 0 || v >= nvars()) throw std::out_of_range("Polynomial::derivative: index out of range");
    Polynomial out(n_, m_);
    for (const auto& [mono, c] : terms_) {
        const int e = mono.exps[static_cast<std::size_t>(v)];
        if (e == 0) continue;
        Monomial d = mono;
        d.exps[static_cast<std::size_t>(v)] = e - 1;
        out.add_term(d, c * T(e));
    }
    return out;
}

template <class T>
T Polynomial<T>::evaluate(const std::vector<T>& point) const {
    if (static_cast<int>(point.size()) != nvars()) throw std::invalid_argument("Polynomial::evaluate: arity mismatch");
    T sum(0);
    for (const auto& [mono, c] : terms_) {
        T term = c;
        for (std::size_t v = 0; v < point.size(); ++v)
            for (int k = 0; k < mono.exps[v]; ++k) term *= point[v];
        sum += term;
    }
    return sum;
}

template <class T>
void Polynomial<T>::check_compatible(const Polynomial& o) const {
    if (n_ != o.n_ || m_ != o.m_) throw std::invalid_argument("Polynomial: dimension mismatch");
}

template <class T>
Polynomial<T>& Polynomial<T>::operator+=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [mono, c] : o.terms_) add_term(mono, c);
    return *this;
}

template <class T>
Polynomial<T>& Polynomial<T>::operator-=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [mono, c] : o.terms_) add_term(mono, -c);
    return *this;
}

template <class T>
Polynomial<T>& Polynomial<T>::operator*=(const T& c) {
    if (is_zero_coef(c)) {
        terms_.clear();
        return *this;
    }
    for (auto& [mono, coef] : terms_) coef *= c;
    return *this;
}

template <class T>
Polynomial<T> Polynomial<T>::times(const Polynomial& o) const {
    check_compatible(o);
    Polynomial out(n_, m_);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Monomial prod = ma;
            for (std::size_t v = 0; v < prod.exps.size(); ++v) prod.exps[v] += mb.exps[v];
            out.add_term(prod, ca * cb);
        }
    }
    return out;
}

template <class T>
std::string Polynomial<T>::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest degree first reads naturally.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [mono, c] = *it;
        std::string coef = coef_string(c);
        bool negative = !coef.empty() && coef[0] == '-';
        if (negative) coef.erase(0, 1);
        if (first) {
            if (negative) os << "-";
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        std::ostringstream factors;
        bool any = false;
        for (std::size_t v = 0; v < mono.exps.size(); ++v) {
            const int e = mono.exps[v];
            if (e == 0) continue;
            if (any) factors << "*";
            any = true;
            const int idx = static_cast<int>(v);
            if (idx < 2 * n_) {
                factors << "x" << idx + 1;
            } else {
                factors << "z" << idx - 2 * n_ + 1;
            }
            if (e > 1) factors << "^" << e;
        }
        if (!any) {
            os << coef;
        } else if (coef == "1") {
            os << factors.str();
        } else {
            os << coef << "*" << factors.str();
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

template <class T>
T parse_coefficient(const std::string& tok);

template <>
Rational parse_coefficient<Rational>(const std::string& tok) {
    const auto slash = tok.find('/');
    auto parse_decimal = [](const std::string& s) -> Rational {
        const auto dot = s.find_first_of(".eE");
        if (dot == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
        // Decimal literal: exact value of its binary double.
        return Rational(std::stod(s));
    };
    if (slash == std::string::npos) return parse_decimal(tok);
    return parse_decimal(tok.substr(0, slash)) / parse_decimal(tok.substr(slash + 1));
}

template <>
double parse_coefficient<double>(const std::string& tok) {
    const auto slash = tok.find('/');
    if (slash == std::string::npos) return std::stod(tok);
    return std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1));
}

}  // namespace

template <class T>
Polynomial<T> parse_polynomial(const std::string& text, int n, int m) {
    Polynomial<T> out(n, m);
    std::size_t pos = 0;
    const std::size_t len = text.size();
    auto skip_ws = [&] {
        while (pos < len && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("parse_polynomial: " + why + " at offset " + std::to_string(pos) + " in '" +
                                    text + "'");
    };

    skip_ws();
    if (pos == len) fail("empty input");
    bool first = true;
    while (true) {
        skip_ws();
        if (pos == len) break;
        int sign = 1;
        if (text[pos] == '+' || text[pos] == '-') {
            sign = text[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;

        T coef(sign);
        Monomial mono{std::vector<int>(static_cast<std::size_t>(2 * n + m), 0)};
        bool any_factor = false;
        while (true) {
            skip_ws();
            if (pos == len) break;
            const char ch = text[pos];
            if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
                const std::size_t start = pos;
                while (pos < len && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
                                     text[pos] == '/' || text[pos] == 'e' || text[pos] == 'E' ||
                                     ((text[pos] == '-' || text[pos] == '+') && pos > start &&
                                      (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
                    ++pos;
                coef *= parse_coefficient<T>(text.substr(start, pos - start));
            } else if (ch == 'x' || ch == 'z') {
                ++pos;
                const std::size_t start = pos;
                while (pos < len && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                if (start == pos) fail("missing variable index");
                const int idx = std::stoi(text.substr(start, pos - start));
                int v = -1;
                if (ch == 'x') {
                    if (idx < 1 || idx > 2 * n) fail("x index out of range");
                    v = idx - 1;
                } else {
                    if (idx < 1 || idx > m) fail("z index out of range");
                    v = 2 * n + idx - 1;
                }
                int e = 1;
                skip_ws();
                if (pos < len && text[pos] == '^') {
                    ++pos;
                    skip_ws();
                    const std::size_t es = pos;
                    while (pos < len && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                    if (es == pos) fail("missing exponent");
                    e = std::stoi(text.substr(es, pos - es));
                }
                mono.exps[static_cast<std::size_t>(v)] += e;
            } else {
                fail(std::string("unexpected character '") + ch + "'");
            }
            any_factor = true;
            skip_ws();
            if (pos < len && text[pos] == '*') {
                ++pos;
                continue;
            }
            if (pos < len && (text[pos] == 'x' || text[pos] == 'z')) continue;
            break;
        }
        if (!any_factor) fail("empty term");
        out.add_term(mono, coef);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Invariant differential operators

namespace {

template <class T>
void require_matching(const Structure& s, const Polynomial<T>& p) {
    if (p.n() != s.n() || p.m() != s.m()) throw std::invalid_argument("polynomial/structure dimension mismatch");
}

template <class T>
Polynomial<T> xi_impl(const Structure& s, const Polynomial<T>& p, int i, int sign) {
    require_matching(s, p);
    const int d = s.horizontal_dim();
    if (i < 1 || i > d) throw std::out_of_range("apply_xi: index must be in 1..2n");
    Polynomial<T> out = p.derivative(i - 1);
    // <J_j x, e_i> = sum_k J_j(i,k) x_k
    for (int j = 0; j < s.m(); ++j) {
        const Polynomial<T> dz = p.derivative(d + j);
        if (dz.is_zero()) continue;
        for (int k = 0; k < d; ++k) {
            const double entry = s.J(j)(i - 1, k);
            if (entry == 0.0) continue;
            const T c = T(entry) * T(sign) / T(2);
            out += (Polynomial<T>::variable(s.n(), s.m(), k) * dz) * c;
        }
    }
    return out;
}

}  // namespace

template <class T>
Polynomial<T> apply_xi(const Structure& s, const Polynomial<T>& p, int i) {
    return xi_impl(s, p, i, 1);
}

template <class T>
Polynomial<T> apply_xi_hat(const Structure& s, const Polynomial<T>& p, int i) {
    return xi_impl(s, p, i, -1);
}

template <class T>
Polynomial<T> apply_l(const Structure& s, const Polynomial<T>& p) {
    Polynomial<T> out(s.n(), s.m());
    for (int i = 1; i <= s.horizontal_dim(); ++i) out += apply_xi(s, apply_xi(s, p, i), i);
    return out;
}

template <class T>
Polynomial<T> apply_l_three_terms(const Structure& s, const Polynomial<T>& p) {
    require_matching(s, p);
    const int n = s.n(), m = s.m(), d = s.horizontal_dim();
    Polynomial<T> out(n, m);
    Polynomial<T> x_sq(n, m);
    for (int k = 0; k < d; ++k) {
        out += p.derivative(k).derivative(k);
        const auto xk = Polynomial<T>::variable(n, m, k);
        x_sq += xk * xk;
    }
    // <grad_x, J_{grad_z} x> = sum_{i,j,k} J_j(i,k) x_k d^2/dx_i dz_j
    for (int j = 0; j < m; ++j) {
        const Polynomial<T> dz = p.derivative(d + j);
        if (dz.is_zero()) continue;
        for (int i = 0; i < d; ++i) {
            const Polynomial<T> dxz = dz.derivative(i);
            if (dxz.is_zero()) continue;
            for (int k = 0; k < d; ++k) {
                const double entry = s.J(j)(i, k);
                if (entry == 0.0) continue;
                out += (Polynomial<T>::variable(n, m, k) * dxz) * T(entry);
            }
        }
    }
    Polynomial<T> lap_z(n, m);
    for (int j = 0; j < m; ++j) lap_z += p.derivative(d + j).derivative(d + j);
    out += (x_sq * lap_z) * (T(1) / T(4));
    return out;
}

template <class T>
Polynomial<T> grad_sq(const Structure& s, const Polynomial<T>& p) {
    Polynomial<T> out(s.n(), s.m());
    for (int i = 1; i <= s.horizontal_dim(); ++i) {
        const Polynomial<T> xi = apply_xi(s, p, i);
        out += xi * xi;
    }
    return out;
}

template <class T>
Polynomial<T> carre_du_champ(const Structure& s, const Polynomial<T>& p) {
    Polynomial<T> out = apply_l(s, p * p) - (p * apply_l(s, p)) * T(2);
    return out * (T(1) / T(2));
}

template <class T>
std::vector<Polynomial<T>> heat_series(const Structure& s, const Polynomial<T>& p) {
    require_matching(s, p);
    std::vector<Polynomial<T>> out;
    Polynomial<T> cur = p;
    int k = 0;
    while (!cur.is_zero()) {
        out.push_back(cur);
        ++k;
        cur = apply_l(s, cur) * (T(1) / T(k));
    }
    return out;
}

template <class T>
Polynomial<T> heat_poly(const Structure& s, const Polynomial<T>& p, const T& t) {
    Polynomial<T> out(s.n(), s.m());
    T power(1);
    for (const auto& c : heat_series(s, p)) {
        out += c * power;
        power *= t;
    }
    return out;
}

// ---------------------------------------------------------------------------
// k_2(t)

namespace {

void series_add(RationalSeries& acc, const RationalSeries& b) {
    if (acc.size() < b.size()) acc.resize(b.size(), Rational(0));
    for (std::size_t k = 0; k < b.size(); ++k) acc[k] += b[k];
}

RationalSeries series_mul(const RationalSeries& a, const RationalSeries& b) {
    if (a.empty() || b.empty()) return {};
    RationalSeries out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

RationalSeries series_derivative(const RationalSeries& a) {
    RationalSeries out;
    for (std::size_t k = 1; k < a.size(); ++k) out.push_back(a[k] * Rational(static_cast<long long>(k)));
    return out;
}

}  // namespace

Rational series_eval(const RationalSeries& c, const Rational& t) {
    Rational acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
}

double series_eval(const RationalSeries& c, double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + static_cast<double>(*it);
    return acc;
}

K2Parts k2_parts(int n) {
    const Structure s = build_heisenberg(n);
    const int m = 1;
    const auto f = RationalPolynomial::x(n, m, 1) + RationalPolynomial::z(n, m, 1) * RationalPolynomial::x(n, m, 2);

    K2Parts parts;
    const auto series = heat_series(s, f);
    for (int i = 1; i <= s.horizontal_dim(); ++i) {
        RationalSeries component;
        for (const auto& c : series) component.push_back(apply_xi(s, c, i).constant_term());
        series_add(parts.numerator, series_mul(component, component));
    }
    for (const auto& c : heat_series(s, grad_sq(s, f))) parts.denominator.push_back(c.constant_term());
    return parts;
}

Rational k2_ratio_exact(int n, const Rational& t) {
    const K2Parts parts = k2_parts(n);
    const Rational den = series_eval(parts.denominator, t);
    if (den == 0) throw std::domain_error("k2_ratio: denominator vanishes");
    return series_eval(parts.numerator, t) / den;
}

double k2_ratio(int n, double t) {
    const K2Parts parts = k2_parts(n);
    const double den = series_eval(parts.denominator, t);
    if (den == 0.0) throw std::domain_error("k2_ratio: denominator vanishes");
    return series_eval(parts.numerator, t) / den;
}

K2Maximum maximize_k2(int n) {
    const K2Parts parts = k2_parts(n);
    // sign of d/dt (N/D) is the sign of N'D - ND'
    RationalSeries slope = series_mul(series_derivative(parts.numerator), parts.denominator);
    RationalSeries tmp = series_mul(parts.numerator, series_derivative(parts.denominator));
    for (auto& c : tmp) c = -c;
    series_add(slope, tmp);

    double lo = 0.0, hi = 1.0;
    if (series_eval(slope, lo) <= 0.0 || series_eval(slope, hi) >= 0.0) {
        throw std::runtime_error("maximize_k2: maximum not bracketed in (0, 1)");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (series_eval(slope, mid) > 0.0 ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    return {t, series_eval(parts.numerator, t) / series_eval(parts.denominator, t)};
}

#define HTYPE_INSTANTIATE(T)                                                                   \
    template class Polynomial<T>;                                                              \
    template Polynomial<T> parse_polynomial<T>(const std::string&, int, int);                  \
    template Polynomial<T> apply_xi<T>(const Structure&, const Polynomial<T>&, int);           \
    template Polynomial<T> apply_xi_hat<T>(const Structure&, const Polynomial<T>&, int);       \
    template Polynomial<T> apply_l<T>(const Structure&, const Polynomial<T>&);                 \
    template Polynomial<T> apply_l_three_terms<T>(const Structure&, const Polynomial<T>&);     \
    template Polynomial<T> grad_sq<T>(const Structure&, const Polynomial<T>&);                 \
    template Polynomial<T> carre_du_champ<T>(const Structure&, const Polynomial<T>&);          \
    template std::vector<Polynomial<T>> heat_series<T>(const Structure&, const Polynomial<T>&); \
    template Polynomial<T> heat_poly<T>(const Structure&, const Polynomial<T>&, const T&);

HTYPE_INSTANTIATE(Rational)
HTYPE_INSTANTIATE(double)

#undef HTYPE_INSTANTIATE

}  // namespace htype
