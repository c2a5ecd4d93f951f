#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature, templated on the working precision.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace htype::quad {

struct Options {
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    int max_panels = 20000;
};

template <class Real>
struct Result {
    Real value = 0;
    Real abs_err = 0;
    /// Integral of |f|; the ratio l1 / |value| measures cancellation.
    Real l1 = 0;
    int evaluations = 0;
    int panels = 0;
    bool converged = false;
};

namespace detail {

// Nodes and weights from QUADPACK qk15.
inline constexpr long double kXgk[8] = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
inline constexpr long double kWgk[8] = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
inline constexpr long double kWg[4] = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

template <class Real>
struct Panel {
    Real a, b, value, err, l1;
    bool operator<(const Panel& o) const { return err < o.err; }
};

template <class Real, class F>
Panel<Real> gk15(F& f, Real a, Real b) {
    const Real c = (a + b) / 2;
    const Real h = (b - a) / 2;
    const Real fc = f(c);
    Real kron = fc * static_cast<Real>(kWgk[7]);
    Real gauss = fc * static_cast<Real>(kWg[3]);
    Real l1 = std::abs(fc) * static_cast<Real>(kWgk[7]);
    for (int j = 0; j < 7; ++j) {
        const Real dx = h * static_cast<Real>(kXgk[j]);
        const Real f1 = f(c - dx);
        const Real f2 = f(c + dx);
        kron += (f1 + f2) * static_cast<Real>(kWgk[j]);
        l1 += (std::abs(f1) + std::abs(f2)) * static_cast<Real>(kWgk[j]);
        if (j % 2 == 1) gauss += (f1 + f2) * static_cast<Real>(kWg[j / 2]);
    }
    kron *= h;
    gauss *= h;
    l1 *= std::abs(h);
    Real err = std::abs(kron - gauss);
    // Rounding floor: nothing finer than a few ulps of the panel's |f| mass.
    err = std::max(err, 50 * std::numeric_limits<Real>::epsilon() * l1);
    return {a, b, kron, err, l1};
}

}  // namespace detail

/// Integrates f over the union of [breaks[i], breaks[i+1]].
template <class Real, class F>
Result<Real> integrate(F&& f, const std::vector<Real>& breaks, const Options& opt = {}) {
    Result<Real> out;
    if (breaks.size() < 2) return out;
    std::priority_queue<detail::Panel<Real>> heap;
    Real value = 0, err = 0, l1 = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        auto p = detail::gk15<Real>(f, breaks[i], breaks[i + 1]);
        value += p.value;
        err += p.err;
        l1 += p.l1;
        out.evaluations += 15;
        heap.push(p);
    }
    auto target = [&] {
        return std::max(static_cast<Real>(opt.abs_tol), static_cast<Real>(opt.rel_tol) * std::abs(value));
    };
    const Real floor_ratio = 50 * std::numeric_limits<Real>::epsilon();
    while (err > target() && static_cast<int>(heap.size()) < opt.max_panels) {
        auto worst = heap.top();
        // A panel already at its rounding floor cannot improve by splitting.
        if (worst.err <= floor_ratio * worst.l1 * 1.0001) break;
        heap.pop();
        const Real mid = (worst.a + worst.b) / 2;
        auto left = detail::gk15<Real>(f, worst.a, mid);
        auto right = detail::gk15<Real>(f, mid, worst.b);
        out.evaluations += 30;
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum from the panels to shed drift from the running updates.
    value = 0;
    err = 0;
    l1 = 0;
    Real comp = 0;  // Neumaier compensation
    out.panels = static_cast<int>(heap.size());
    while (!heap.empty()) {
        const auto& p = heap.top();
        const Real t = value + p.value;
        if (std::abs(value) >= std::abs(p.value))
            comp += (value - t) + p.value;
        else
            comp += (p.value - t) + value;
        value = t;
        err += p.err;
        l1 += p.l1;
        heap.pop();
    }
    out.value = value + comp;
    out.abs_err = err;
    out.l1 = l1;
    out.converged = err <= std::max(static_cast<Real>(opt.abs_tol), static_cast<Real>(opt.rel_tol) * std::abs(out.value));
    return out;
}

/// Uniform breakpoints on [a, b] with panel width at most `width`.
template <class Real>
std::vector<Real> uniform_breaks(Real a, Real b, Real width) {
    const int k = std::max(1, static_cast<int>(std::ceil(static_cast<double>((b - a) / width))));
    std::vector<Real> br(k + 1);
    for (int i = 0; i <= k; ++i) br[i] = a + (b - a) * static_cast<Real>(i) / static_cast<Real>(k);
    return br;
}

}  // namespace htype::quad
