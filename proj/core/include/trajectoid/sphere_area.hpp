#pragma once

#include <vector>

#include "trajectoid/geom.hpp"
#include "trajectoid/rolling.hpp"

namespace trajectoid {

/// Shortest great-circle arc from b to a, sampled with step <= max_step.
/// Returns an empty list when a and b coincide (within 1e-9 rad). Throws
/// AntipodalError when the endpoints are antipodal within 1e-6 rad, where
/// the shortest arc is not unique.
std::vector<Vec3> closing_geodesic(const Vec3& a, const Vec3& b, double max_step = 0.05);

/// Signed spherical area in length^2 units. `raw` keeps the unreduced
/// turning-sum branch for diagnostics; `reduced` is raw mod 2*pi*r^2 in
/// [0, 2*pi*r^2). When `antipodal` is set the values are NaN.
struct AreaValue {
    double raw = 0.0;
    double reduced = 0.0;
    bool antipodal = false;
};

/// A closed geodesic polygon on the sphere: a trace plus its closing arc.
/// `points` has the first point repeated at the end. Exterior angles are
/// listed per polygon vertex (points.size() - 1 of them, the one at index 0
/// using the last edge as predecessor). The junctions where the trace meets
/// the closing arc are flagged by `corner_a` (trace start) and `corner_m`
/// (trace end).
struct ClosedSphericalLoop {
    double radius = 1.0;
    std::vector<Vec3> points;
    std::vector<double> exterior_angles;
    std::size_t corner_a = 0;
    std::size_t corner_m = 0;

    double turning_sum() const;
    /// Exterior angles at the two trace/arc junctions.
    double corner_angle_a() const { return exterior_angles[corner_a]; }
    double corner_angle_m() const { return exterior_angles[corner_m]; }
};

/// Close the trace with its geodesic and compute the corner data.
/// Throws AntipodalError when the trace endpoints are antipodal.
ClosedSphericalLoop build_closed_loop(const SphereTrace& trace);

/// Discrete Gauss-Bonnet area of a closed loop: area/r^2 = 2*pi - sum of
/// exterior angles (mod 4*pi). Every edge of the loop is a geodesic arc, so
/// only corner turns contribute and the result is exact up to rounding.
AreaValue loop_area(const ClosedSphericalLoop& loop);

/// Area enclosed by the trace and its closing geodesic. Requires trace step
/// angles <= 0.05 rad. An antipodal trace is reported via the flag rather
/// than an exception (the scan needs to keep going across the jump).
AreaValue enclosed_area(const SphereTrace& trace);

/// Dimensionless area S(P, r)/r^2 at r = L/(2*pi*sigma), reduced mod 2*pi.
AreaValue normalized_area(const PlanarPath& path, double sigma);

struct DoubledTrace {
    SphereTrace trace;
    Vec3 rotation_axis;             ///< midpoint of the closing geodesic
    bool degenerate_closing = false;///< input was already closed; axis arbitrary
};

/// Append a copy of the trace rotated by pi about the midpoint of the
/// closing geodesic. The rotated copy starts at the old endpoint and ends at
/// the old start, so the doubled trace always closes; at a two-period
/// solution it coincides with the genuine second period and joins smoothly.
DoubledTrace double_trace(const SphereTrace& trace);

/// Exterior angle at b between geodesic edges a->b and b->c, signed by the
/// outward normal at b.
double spherical_exterior_angle(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace trajectoid
