#pragma once

#include "htype/algebra.hpp"

namespace htype {

/// nu(theta) = (2 theta - sin 2theta) / (1 - cos 2theta) on [0, pi); increasing
/// from nu(0) = 0 to +infinity.
double nu(double theta);
/// Unique theta in [0, pi) with nu(theta) = y, for y >= 0.
double nu_inv(double y);
/// theta / sin(theta), with the removable singularity at 0.
double theta_over_sin(double theta);

enum class DistanceBranch { identity, horizontal, vertical, generic };

struct DistanceResult {
    double d = 0.0;
    /// Angle parameter; pi for the x = 0 branch.
    double theta = 0.0;
    DistanceBranch branch = DistanceBranch::identity;
};

/// Carnot-Caratheodory distance from the identity to any (x, z) with the
/// given norms. Depends only on (|x|, |z|).
DistanceResult cc_distance(double x_norm, double z_norm);
double cc_distance(const GroupPoint& g);
/// d(g, h) = d(0, g^{-1} h).
double cc_distance(const Structure& s, const GroupPoint& g, const GroupPoint& h);

/// Inverse of cc_distance along a ray: the |z| at which (|x|, |z|) has distance d.
/// Requires 0 <= |x| <= d.
double central_norm_at_distance(double x_norm, double d);

/// (theta / sin theta)^2 / (1 + nu(theta)) = d^2 / (|x|^2 + 4|z|).
double distance_ratio_f(double theta);

struct GeodesicParams {
    Vec xi0;   // initial horizontal covector
    Vec eta0;  // constant vertical covector
    bool straight = false;
};

/// Minimizing geodesic from the identity to g. `loops` selects the k-th
/// circle family when x = 0 (k = 1 is the minimizer).
GeodesicParams geodesic_from_endpoint(const Structure& s, const GroupPoint& g, int loops = 1);
GroupPoint geodesic_point(const Structure& s, const GeodesicParams& p, double t);
/// Velocity (dx/dt, dz/dt) of the geodesic at t.
GroupPoint geodesic_velocity(const Structure& s, const GeodesicParams& p, double t);

/// Geodesic coordinates Phi(u, eta) for 0 < |eta| < 2 pi.
GroupPoint phi(const Structure& s, const Vec& u, const Vec& eta);
/// Jacobian determinant A(|u|, |eta|) of Phi.
double jacobian_a(double u_norm, double eta_norm, int n, int m);
/// |u|^{2m} |eta|^{2(m+n)} (2 pi - |eta|)^{2n-1}: two-sided envelope of A.
double jacobian_envelope(double u_norm, double eta_norm, int n, int m);

}  // namespace htype
