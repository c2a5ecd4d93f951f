#include "htype/simulate.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "htype/bessel.hpp"
#include "htype/heatkernel.hpp"
#include "htype/parallel.hpp"
#include "htype/simd/step.hpp"

namespace htype {

namespace {

constexpr std::size_t kLanes = 64;

std::uint64_t splitmix64(std::uint64_t v) {
    v += 0x9e3779b97f4a7c15ULL;
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
    return v ^ (v >> 31);
}

MeanEstimate finish(double sum, double sum_sq, std::size_t count) {
    MeanEstimate e;
    if (count == 0) return e;
    const double nn = static_cast<double>(count);
    e.mean = sum / nn;
    const double var = count > 1 ? std::max(0.0, (sum_sq - nn * e.mean * e.mean) / (nn - 1.0)) : 0.0;
    e.sigma = std::sqrt(var / nn);
    return e;
}

}  // namespace

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path) {
    return splitmix64(splitmix64(seed) ^ (path * 0xd1b54a32d192ed03ULL + 1));
}

GroupPoint SampleBatch::point(std::size_t i) const {
    const int h = 2 * n;
    GroupPoint g{Vec(h), Vec(m)};
    for (int k = 0; k < h; ++k) g.x(k) = xs[i * h + k];
    for (int j = 0; j < m; ++j) g.z(j) = zs[i * m + j];
    return g;
}

SampleBatch simulate(const Structure& s, const SimConfig& cfg) {
    if (!(cfg.t > 0.0)) throw std::invalid_argument("simulate: t must be positive");
    if (cfg.steps < 1) throw std::invalid_argument("simulate: steps must be >= 1");
    if (cfg.n_paths < 1) throw std::invalid_argument("simulate: n_paths must be >= 1");

    const int h = s.horizontal_dim();
    const int m = s.m();
    SampleBatch batch;
    batch.n = s.n();
    batch.m = m;
    batch.t = cfg.t;
    batch.steps = cfg.steps;
    batch.seed = cfg.seed;
    const std::size_t paths = static_cast<std::size_t>(cfg.n_paths);
    batch.xs.assign(paths * h, 0.0);
    batch.zs.assign(paths * m, 0.0);

    const simd::StepPlan plan = simd::make_step_plan(s);
    const simd::Isa isa = simd::active_isa();
    const double scale = std::sqrt(2.0 * cfg.t / cfg.steps);
    const std::size_t blocks = (paths + kLanes - 1) / kLanes;

    parallel_for(blocks, [&](std::size_t blk) {
        const std::size_t first = blk * kLanes;
        const std::size_t live = std::min(kLanes, paths - first);
        std::vector<double> x(h * kLanes, 0.0), z(m * kLanes, 0.0), dx(h * kLanes, 0.0);
        std::vector<std::mt19937_64> rng;
        std::vector<std::normal_distribution<double>> normal(live);
        rng.reserve(live);
        for (std::size_t p = 0; p < live; ++p) rng.emplace_back(path_seed(cfg.seed, first + p));
        for (int step = 0; step < cfg.steps; ++step) {
            for (std::size_t p = 0; p < live; ++p)
                for (int k = 0; k < h; ++k) dx[k * kLanes + p] = scale * normal[p](rng[p]);
            simd::step(isa, plan, x.data(), z.data(), dx.data(), kLanes);
        }
        for (std::size_t p = 0; p < live; ++p) {
            for (int k = 0; k < h; ++k) batch.xs[(first + p) * h + k] = x[k * kLanes + p];
            for (int j = 0; j < m; ++j) batch.zs[(first + p) * m + j] = z[j * kLanes + p];
        }
    });
    return batch;
}

MeanEstimate sample_mean(const SampleBatch& batch, const std::function<double(const GroupPoint&)>& f) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double v = f(batch.point(i));
        sum += v;
        sum_sq += v * v;
    }
    return finish(sum, sum_sq, batch.size());
}

MeanEstimate polynomial_mean(const SampleBatch& batch, const RealPolynomial& p) {
    if (p.n() != batch.n || p.m() != batch.m) throw std::invalid_argument("polynomial_mean: dimension mismatch");
    const int h = 2 * batch.n;
    std::vector<double> pt(h + batch.m);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        for (int k = 0; k < h; ++k) pt[k] = batch.xs[i * h + k];
        for (int j = 0; j < batch.m; ++j) pt[h + j] = batch.zs[i * batch.m + j];
        const double v = p.evaluate(pt);
        sum += v;
        sum_sq += v * v;
    }
    return finish(sum, sum_sq, batch.size());
}

ComplexEstimate char_z(const SampleBatch& batch, const Vec& lambda) {
    if (lambda.size() != batch.m) throw std::invalid_argument("char_z: lambda has the wrong dimension");
    double sc = 0, sc2 = 0, ss = 0, ss2 = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        double phase = 0.0;
        for (int j = 0; j < batch.m; ++j) phase += lambda(j) * batch.zs[i * batch.m + j];
        const double c = std::cos(phase), sn = std::sin(phase);
        sc += c;
        sc2 += c * c;
        ss += sn;
        ss2 += sn * sn;
    }
    const MeanEstimate re = finish(sc, sc2, batch.size());
    const MeanEstimate im = finish(ss, ss2, batch.size());
    return {{re.mean, im.mean}, re.sigma, im.sigma};
}

KdeReport kde_compare(const SampleBatch& batch, const std::vector<std::pair<double, double>>& grid,
                      double bandwidth) {
    if (!(bandwidth > 0.0)) throw std::invalid_argument("kde_compare: bandwidth must be positive");
    const int h = 2 * batch.n;
    const std::size_t count = batch.size();
    std::vector<double> rs(count), ss(count);
    for (std::size_t i = 0; i < count; ++i) {
        double r2 = 0, s2 = 0;
        for (int k = 0; k < h; ++k) r2 += batch.xs[i * h + k] * batch.xs[i * h + k];
        for (int j = 0; j < batch.m; ++j) s2 += batch.zs[i * batch.m + j] * batch.zs[i * batch.m + j];
        rs[i] = std::sqrt(r2);
        ss[i] = std::sqrt(s2);
    }
    const double norm = 1.0 / (2.0 * std::numbers::pi * bandwidth * bandwidth);
    KdeReport rep;
    rep.points.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t g) {
        const auto [r, s] = grid[g];
        double sum = 0, sum_sq = 0;
        for (std::size_t i = 0; i < count; ++i) {
            const double u = (r - rs[i]) / bandwidth, v = (s - ss[i]) / bandwidth;
            const double k = norm * std::exp(-0.5 * (u * u + v * v));
            sum += k;
            sum_sq += k * k;
        }
        const MeanEstimate e = finish(sum, sum_sq, count);
        const double jac = bessel::sphere_area(h) * std::pow(r, h - 1) * bessel::sphere_area(batch.m) *
                           std::pow(s, batch.m - 1);
        KdePoint& pnt = rep.points[g];
        pnt.r = r;
        pnt.s = s;
        pnt.estimate = e.mean / jac;
        pnt.sigma = e.sigma / jac;
        KernelQuery q;
        q.n = batch.n;
        q.m = batch.m;
        q.t = batch.t;
        q.r = r;
        q.s = s;
        q.rel_tol = 1e-8;
        pnt.exact = htype::pt(q).value;
    });
    for (const KdePoint& pnt : rep.points) {
        if (!(pnt.estimate > 0.0)) rep.all_positive = false;
        rep.max_rel_dev = std::max(rep.max_rel_dev, std::abs(pnt.estimate - pnt.exact) / pnt.exact);
        if (pnt.sigma > 0) rep.max_z_score = std::max(rep.max_z_score, std::abs(pnt.estimate - pnt.exact) / pnt.sigma);
    }
    return rep;
}

}  // namespace htype
