#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "htype/algebra.hpp"
#include "htype/polynomial.hpp"

namespace htype {

struct SimConfig {
    double t = 1.0;
    int steps = 1000;
    int n_paths = 100000;
    std::uint64_t seed = 1;
};

/// Terminal points of simulated horizontal Brownian paths, row-major:
/// x(i, k) = xs[i * 2n + k], z(i, j) = zs[i * m + j].
struct SampleBatch {
    int n = 1;
    int m = 1;
    double t = 0.0;
    int steps = 0;
    std::uint64_t seed = 0;
    std::vector<double> xs;
    std::vector<double> zs;

    std::size_t size() const { return m > 0 ? zs.size() / static_cast<std::size_t>(m) : 0; }
    GroupPoint point(std::size_t i) const;
};

/// Euler scheme for dz = 1/2 [x, dx] driven by dx ~ N(0, 2 dt I). Each path
/// draws from its own generator seeded from (seed, path index), so the batch
/// does not depend on threading or on the SIMD variant.
SampleBatch simulate(const Structure& s, const SimConfig& cfg);

/// Per-path seed used by simulate.
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path);

struct MeanEstimate {
    double mean = 0.0;
    double sigma = 0.0;  // standard error of the mean
};

struct ComplexEstimate {
    std::complex<double> mean;
    double sigma_re = 0.0;
    double sigma_im = 0.0;
};

MeanEstimate sample_mean(const SampleBatch& batch, const std::function<double(const GroupPoint&)>& f);
MeanEstimate polynomial_mean(const SampleBatch& batch, const RealPolynomial& p);

/// Empirical mean of e^{i <lambda, z_T>}; the exact value is cosh(t |lambda|)^{-n}.
ComplexEstimate char_z(const SampleBatch& batch, const Vec& lambda);

struct KdePoint {
    double r = 0.0;
    double s = 0.0;
    double estimate = 0.0;
    double sigma = 0.0;
    double exact = 0.0;
};

struct KdeReport {
    std::vector<KdePoint> points;
    double max_rel_dev = 0.0;
    /// max |estimate - exact| / sigma over the grid.
    double max_z_score = 0.0;
    bool all_positive = true;
};

/// Gaussian-kernel estimate of the density of (|x|, |z|), converted to p_t by
/// dividing out the surface-measure Jacobian, compared with pt. Diagnostic only.
KdeReport kde_compare(const SampleBatch& batch, const std::vector<std::pair<double, double>>& grid,
                      double bandwidth);

}  // namespace htype
