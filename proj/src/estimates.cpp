#include "htype/estimates.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "htype/geometry.hpp"
#include "htype/heatkernel.hpp"
#include "htype/parallel.hpp"

namespace htype {

namespace {

std::vector<double> log_space(double a, double b, int k) {
    std::vector<double> v(k);
    if (k == 1) {
        v[0] = a;
        return v;
    }
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < k; ++i) v[i] = std::exp(la + (lb - la) * i / (k - 1));
    v.front() = a;
    v.back() = b;
    return v;
}

void validate_grid(const ScanGrid& g) {
    if (!(g.d_min > 0 && g.d_max >= g.d_min)) throw std::invalid_argument("scan grid: need 0 < d_min <= d_max");
    if (!(g.u_min > 0 && g.u_max >= g.u_min && g.u_max <= 1.0))
        throw std::invalid_argument("scan grid: need 0 < u_min <= u_max <= 1");
    if (g.n_d < 1 || g.n_u < 1) throw std::invalid_argument("scan grid: point counts must be >= 1");
}

}  // namespace

const char* envelope_name(EnvelopeKind kind) {
    switch (kind) {
        case EnvelopeKind::kernel: return "kernel";
        case EnvelopeKind::gradient: return "gradient";
        case EnvelopeKind::crude_gradient: return "crude-gradient";
        case EnvelopeKind::vertical_gradient: return "vertical-gradient";
    }
    return "unknown";
}

double kernel_envelope(int n, int m, double x_norm, double d) {
    if (!(d >= 0.0) || !(x_norm >= 0.0)) throw std::domain_error("kernel_envelope: need d, |x| >= 0");
    return std::pow(d, 2 * n - m - 1) / (1.0 + std::pow(x_norm * d, n - 0.5)) * std::exp(-0.25 * d * d);
}

double gradient_envelope(int n, int m, double x_norm, double d) {
    if (!(d >= 0.0) || !(x_norm >= 0.0)) throw std::domain_error("gradient_envelope: need d, |x| >= 0");
    return x_norm * std::pow(d, 2 * n - m + 1) / (1.0 + std::pow(x_norm * d, n + 0.5)) * std::exp(-0.25 * d * d);
}

double kernel_envelope_t(int n, int m, double t, double x_norm, double d) {
    if (!(t > 0.0)) throw std::domain_error("kernel_envelope_t: t must be positive");
    const double ds = d / std::sqrt(t);
    return std::pow(t, -(m + n)) * (1.0 + std::pow(ds, 2 * n - m - 1)) /
           (1.0 + std::pow(x_norm * d / t, n - 0.5)) * std::exp(-d * d / (4.0 * t));
}

ScanGrid ScanGrid::refined() const {
    ScanGrid g = *this;
    g.n_d = 2 * n_d - 1;
    g.n_u = 2 * n_u - 1;
    return g;
}

std::string ScanGrid::describe() const {
    std::ostringstream os;
    os << "d0 log-spaced [" << d_min << ", " << d_max << "] x " << n_d << "; |x|/d0 log-spaced [" << u_min << ", "
       << u_max << "] x " << n_u;
    return os.str();
}

ScanReport scan_ratio(int n, int m, EnvelopeKind kind, const ScanGrid& grid, double d0_min) {
    validate_grid(grid);
    const std::vector<double> ds = log_space(grid.d_min, grid.d_max, grid.n_d);
    const std::vector<double> us = log_space(grid.u_min, grid.u_max, grid.n_u);
    std::vector<ScanPoint> pts;
    for (double d : ds) {
        if (d < d0_min) continue;
        for (double u : us) {
            ScanPoint p;
            p.d = d;
            p.r = u * d;
            p.s = central_norm_at_distance(p.r, d);
            pts.push_back(p);
        }
    }

    parallel_for(pts.size(), [&](std::size_t i) {
        ScanPoint& p = pts[i];
        KernelQuery q;
        q.n = n;
        q.m = m;
        q.r = p.r;
        q.s = p.s;
        q.rel_tol = grid.rel_tol;
        const bool needs_p = kind != EnvelopeKind::gradient;
        const bool needs_grad = kind != EnvelopeKind::kernel;
        double pv = 0.0;
        p.converged = true;
        if (needs_p) {
            // The contour route stays well conditioned far from the identity.
            const EvalResult e = (m % 2 == 1 && p.s > 0.0) ? p1_hankel(q) : p1(q);
            pv = e.value;
            p.converged = e.converged;
        }
        KernelGradient g;
        if (needs_grad) {
            g = kernel_gradient(q);
            p.converged = p.converged && g.converged;
        }
        switch (kind) {
            case EnvelopeKind::kernel:
                p.value = pv;
                p.envelope = kernel_envelope(n, m, p.r, p.d);
                break;
            case EnvelopeKind::gradient:
                p.value = g.horizontal;
                p.envelope = gradient_envelope(n, m, p.r, p.d);
                break;
            case EnvelopeKind::crude_gradient:
                p.value = g.horizontal;
                p.envelope = (1.0 + p.d) * pv;
                break;
            case EnvelopeKind::vertical_gradient:
                p.value = g.vertical;
                p.envelope = pv;
                break;
        }
        p.ratio = p.value / p.envelope;
    });

    ScanReport rep;
    rep.kind = kind;
    rep.n = n;
    rep.m = m;
    rep.grid = grid;
    rep.d0_min = d0_min;
    rep.points = static_cast<int>(pts.size());
    rep.min_ratio = std::numeric_limits<double>::infinity();
    rep.max_ratio = -std::numeric_limits<double>::infinity();
    bool finite = true;
    for (const ScanPoint& p : pts) {
        if (!p.converged) ++rep.unconverged;
        if (!std::isfinite(p.ratio)) {
            finite = false;
            continue;
        }
        if (p.ratio < rep.min_ratio) {
            rep.min_ratio = p.ratio;
            rep.argmin = p;
        }
        if (p.ratio > rep.max_ratio) {
            rep.max_ratio = p.ratio;
            rep.argmax = p;
        }
    }
    // The crude and vertical bounds are one-sided, and vanish on an axis.
    const bool two_sided = kind == EnvelopeKind::kernel || kind == EnvelopeKind::gradient;
    rep.pass = finite && !pts.empty() && std::isfinite(rep.max_ratio) && (!two_sided || rep.min_ratio > 0.0);
    return rep;
}

ScanReport scan_kernel_ratio(int n, int m, const ScanGrid& grid, double d0_min) {
    return scan_ratio(n, m, EnvelopeKind::kernel, grid, d0_min);
}

ScanReport scan_gradient_ratio(int n, int m, const ScanGrid& grid, double d0_min) {
    return scan_ratio(n, m, EnvelopeKind::gradient, grid, d0_min);
}

ScanReport scan_crude_gradient(int n, int m, const ScanGrid& grid) {
    return scan_ratio(n, m, EnvelopeKind::crude_gradient, grid, 0.0);
}

ScanReport scan_vertical_gradient(int n, int m, const ScanGrid& grid) {
    return scan_ratio(n, m, EnvelopeKind::vertical_gradient, grid, 0.0);
}

DriftReport refinement_drift(int n, int m, EnvelopeKind kind, const ScanGrid& grid, double d0_min, double max_drift) {
    DriftReport dr;
    dr.coarse = scan_ratio(n, m, kind, grid, d0_min);
    dr.fine = scan_ratio(n, m, kind, grid.refined(), d0_min);
    // One-sided bounds can hit a zero minimum on both grids; that has not moved.
    dr.drift_min = dr.coarse.min_ratio == 0.0 && dr.fine.min_ratio == 0.0
                       ? 0.0
                       : std::abs(dr.fine.min_ratio / dr.coarse.min_ratio - 1.0);
    dr.drift_max = std::abs(dr.fine.max_ratio / dr.coarse.max_ratio - 1.0);
    dr.pass = dr.coarse.pass && dr.fine.pass && dr.drift_min <= max_drift && dr.drift_max <= max_drift;
    return dr;
}

}  // namespace htype
