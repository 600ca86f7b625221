#pragma once

#include <vector>

#include "trajectoid/geom.hpp"
#include "trajectoid/path.hpp"

namespace trajectoid {

// Frame conventions used throughout:
//  - the plane is z = 0, the ball center sits at height +r, the contact
//    point is directly below the center;
//  - rolling a segment of length l in unit direction d rotates the ball
//    about z_hat x d by l/r in the world frame, left-composed onto the
//    cumulative rotation (no slipping, no pivoting);
//  - the body-frame contact point is R(t)^-1 applied to (0, 0, -r).

/// World-frame rotation for rolling one straight segment.
Quat segment_rotation(const Vec2& direction, double length, double r);

/// Cumulative rotation after rolling the whole path: the product of the
/// per-segment rotations in traversal order, later segments applied on the
/// left. Exact per segment (no resampling), renormalized after every
/// composition to control drift over long sweeps.
Quat holonomy(const PlanarPath& path, double r);

/// r = L / (2*pi*sigma), with sigma the scaled inverse radius.
double sigma_to_radius(double total_length, double sigma);
double radius_to_sigma(double total_length, double r);

/// Body-frame contact trace on a ball of radius r. Points are unit vectors;
/// scale by radius to get positions. Step angles are capped at 0.05 rad by
/// internal resampling so downstream area sums stay well conditioned.
struct SphereTrace {
    double radius = 1.0;
    std::vector<Vec3> points;       ///< unit vectors, body frame
    std::vector<double> arc_length; ///< planar arc length at each point

    std::size_t size() const { return points.size(); }
    Vec3 point_scaled(std::size_t i) const { return radius * points[i]; }
    const Vec3& start() const { return points.front(); }
    const Vec3& end() const { return points.back(); }
};

SphereTrace sphere_trace(const PlanarPath& path, double r);

/// Largest geodesic step angle between consecutive trace points.
double max_step_angle(const SphereTrace& trace);

/// True when the rotation maps the contact direction (0,0,-1) to itself
/// within tol; equivalently the trace of any path with this holonomy closes.
bool fixes_contact_axis(const Quat& q, double tol = 1e-8);

}  // namespace trajectoid
