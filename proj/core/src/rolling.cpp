#include "trajectoid/rolling.hpp"

#include <cmath>

#include "trajectoid/errors.hpp"

namespace trajectoid {

Quat segment_rotation(const Vec2& direction, double length, double r) {
    if (!(r > 0.0)) throw Error("ball radius must be positive");
    if (length < 0.0) throw Error("segment length must be non-negative");
    const Vec3 axis{-direction.y, direction.x, 0.0};  // z_hat x d
    return Quat::from_axis_angle(axis, length / r);
}

Quat holonomy(const PlanarPath& path, double r) {
    Quat q = Quat::identity();
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        q = segment_rotation(path.segment_direction(i), path.segment_length(i), r) * q;
        q = q.normalized();
    }
    return q;
}

double sigma_to_radius(double total_length, double sigma) {
    if (!(total_length > 0.0) || !(sigma > 0.0))
        throw Error("sigma_to_radius requires positive length and sigma");
    return total_length / (kTwoPi * sigma);
}

double radius_to_sigma(double total_length, double r) {
    if (!(total_length > 0.0) || !(r > 0.0))
        throw Error("radius_to_sigma requires positive length and radius");
    return total_length / (kTwoPi * r);
}

SphereTrace sphere_trace(const PlanarPath& path, double r) {
    if (!(r > 0.0)) throw Error("ball radius must be positive");
    const PlanarPath fine = resample(path, 0.05 * r);
    SphereTrace trace;
    trace.radius = r;
    trace.points.reserve(fine.vertices().size());
    trace.arc_length.reserve(fine.vertices().size());
    Quat q = Quat::identity();
    trace.points.push_back({0.0, 0.0, -1.0});
    trace.arc_length.push_back(0.0);
    for (std::size_t i = 0; i < fine.segment_count(); ++i) {
        q = segment_rotation(fine.segment_direction(i), fine.segment_length(i), r) * q;
        q = q.normalized();
        trace.points.push_back(normalized(q.conjugate().rotate({0.0, 0.0, -1.0})));
        trace.arc_length.push_back(fine.arc_length_at(i + 1));
    }
    return trace;
}

double max_step_angle(const SphereTrace& trace) {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < trace.points.size(); ++i)
        m = std::max(m, angle_between(trace.points[i], trace.points[i + 1]));
    return m;
}

bool fixes_contact_axis(const Quat& q, double tol) {
    const Vec3 down{0.0, 0.0, -1.0};
    return norm(q.rotate(down) - down) <= tol;
}

}  // namespace trajectoid
