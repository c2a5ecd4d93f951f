#pragma once

#include <string>
#include <vector>

namespace htype {

enum class EnvelopeKind { kernel, gradient, crude_gradient, vertical_gradient };

const char* envelope_name(EnvelopeKind kind);

/// d^{2n-m-1} / (1 + (|x| d)^{n-1/2}) e^{-d^2/4}.
double kernel_envelope(int n, int m, double x_norm, double d);
/// |x| d^{2n-m+1} / (1 + (|x| d)^{n+1/2}) e^{-d^2/4}.
double gradient_envelope(int n, int m, double x_norm, double d);
/// t^{-m-n} (1 + (d / sqrt t)^{2n-m-1}) / (1 + (|x| d / t)^{n-1/2}) e^{-d^2/(4t)}:
/// the t = 1 form carried to all t by the dilation.
double kernel_envelope_t(int n, int m, double t, double x_norm, double d);

/// log-spaced in d and in u = |x| / d; |z| is recovered from (|x|, d).
struct ScanGrid {
    double d_min = 2.0;
    double d_max = 10.0;
    int n_d = 30;
    double u_min = 1e-3;
    double u_max = 1.0;
    int n_u = 30;
    double rel_tol = 1e-7;

    /// Same ranges with every interval halved (2k - 1 points per axis).
    ScanGrid refined() const;
    std::string describe() const;
};

struct ScanPoint {
    double r = 0.0;
    double s = 0.0;
    double d = 0.0;
    double value = 0.0;
    double envelope = 0.0;
    double ratio = 0.0;
    bool converged = true;
};

struct ScanReport {
    EnvelopeKind kind = EnvelopeKind::kernel;
    int n = 1;
    int m = 1;
    ScanGrid grid;
    double d0_min = 0.0;
    int points = 0;
    int unconverged = 0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    ScanPoint argmin;
    ScanPoint argmax;
    /// max < infinity, and min > 0 for the two-sided kernel and gradient bounds.
    bool pass = false;
};

/// Ratio of the kernel quantity to its envelope over the grid, restricted to d >= d0_min:
///   kernel:            p_1 / kernel_envelope
///   gradient:          |grad p_1| / gradient_envelope
///   crude-gradient:    |grad p_1| / ((1 + d) p_1)
///   vertical-gradient: |grad_z p_1| / p_1
ScanReport scan_ratio(int n, int m, EnvelopeKind kind, const ScanGrid& grid, double d0_min);

ScanReport scan_kernel_ratio(int n, int m, const ScanGrid& grid, double d0_min);
ScanReport scan_gradient_ratio(int n, int m, const ScanGrid& grid, double d0_min);
ScanReport scan_crude_gradient(int n, int m, const ScanGrid& grid);
ScanReport scan_vertical_gradient(int n, int m, const ScanGrid& grid);

struct DriftReport {
    ScanReport coarse;
    ScanReport fine;
    /// Relative change of min and max ratio under refinement.
    double drift_min = 0.0;
    double drift_max = 0.0;
    bool pass = false;
};

DriftReport refinement_drift(int n, int m, EnvelopeKind kind, const ScanGrid& grid, double d0_min,
                             double max_drift = 0.05);

}  // namespace htype
