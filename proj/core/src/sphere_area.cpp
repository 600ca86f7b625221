#include "trajectoid/sphere_area.hpp"

#include <cmath>
#include <limits>

#include "trajectoid/errors.hpp"

namespace trajectoid {

std::vector<Vec3> closing_geodesic(const Vec3& a, const Vec3& b, double max_step) {
    const double gap = angle_between(a, b);
    if (gap <= 1e-9) return {};
    if (gap >= kPi - 1e-6)
        throw AntipodalError("closing geodesic endpoints are antipodal; shortest arc not unique");
    // slerp from b to a, excluding b, including a
    const int steps = std::max(1, (int)std::ceil(gap / max_step));
    std::vector<Vec3> arc;
    arc.reserve(steps);
    const double s = std::sin(gap);
    for (int i = 1; i <= steps; ++i) {
        const double t = double(i) / double(steps);
        arc.push_back(normalized((std::sin((1.0 - t) * gap) / s) * b +
                                 (std::sin(t * gap) / s) * a));
    }
    arc.back() = a;
    return arc;
}

double spherical_exterior_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 t_in = normalized(dot(a, b) * b - a);   // arrival tangent at b from a
    const Vec3 t_out = normalized(c - dot(b, c) * b);  // departure tangent at b toward c
    return std::atan2(dot(cross(t_in, t_out), b), dot(t_in, t_out));
}

double ClosedSphericalLoop::turning_sum() const {
    double s = 0.0;
    for (double a : exterior_angles) s += a;
    return s;
}

ClosedSphericalLoop build_closed_loop(const SphereTrace& trace) {
    if (trace.points.size() < 2) throw Error("trace too short to close");
    const Vec3 a = trace.points.front();
    const Vec3 m = trace.points.back();
    const double gap = angle_between(a, m);
    if (gap >= kPi - 1e-6)
        throw AntipodalError("trace endpoints are antipodal");

    // Assemble the cyclic vertex list, merging near-duplicate neighbors so a
    // ~0-length edge never feeds the tangent normalization.
    std::vector<Vec3> src(trace.points);
    std::size_t trace_end_index = src.size() - 1;
    if (gap <= 1e-9) {
        src.pop_back();  // already closed; the junction lives at the start point
        trace_end_index = 0;
    } else {
        for (const Vec3& g : closing_geodesic(a, m)) src.push_back(g);
        src.pop_back();  // the arc ends at the start point
    }

    std::vector<Vec3> cyc;
    cyc.reserve(src.size());
    std::vector<std::size_t> mapped(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (!cyc.empty() && norm(src[i] - cyc.back()) < 1e-12) {
            mapped[i] = cyc.size() - 1;
            continue;
        }
        mapped[i] = cyc.size();
        cyc.push_back(src[i]);
    }
    if (cyc.size() > 2 && norm(cyc.back() - cyc.front()) < 1e-12) cyc.pop_back();
    if (cyc.size() < 3) throw Error("degenerate closed loop");

    ClosedSphericalLoop loop;
    loop.radius = trace.radius;
    loop.corner_a = 0;
    loop.corner_m = std::min(mapped[std::min(trace_end_index, src.size() - 1)], cyc.size() - 1);
    const std::size_t n = cyc.size();
    loop.exterior_angles.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& prev = cyc[(i + n - 1) % n];
        const Vec3& next = cyc[(i + 1) % n];
        loop.exterior_angles[i] = spherical_exterior_angle(prev, cyc[i], next);
    }
    loop.points = std::move(cyc);
    loop.points.push_back(loop.points.front());
    return loop;
}

AreaValue loop_area(const ClosedSphericalLoop& loop) {
    const double raw_unit = kTwoPi - loop.turning_sum();
    const double r2 = loop.radius * loop.radius;
    return {raw_unit * r2, positive_fmod(raw_unit, kTwoPi) * r2, false};
}

AreaValue enclosed_area(const SphereTrace& trace) {
    if (max_step_angle(trace) > 0.05 + 1e-9)
        throw Error("trace step angles exceed 0.05 rad; resample first");
    try {
        return loop_area(build_closed_loop(trace));
    } catch (const AntipodalError&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, true};
    }
}

AreaValue normalized_area(const PlanarPath& path, double sigma) {
    const double r = sigma_to_radius(path.total_length(), sigma);
    const AreaValue av = enclosed_area(sphere_trace(path, r));
    const double raw_unit = av.raw / (r * r);
    return {raw_unit, positive_fmod(raw_unit, kTwoPi), av.antipodal};
}

DoubledTrace double_trace(const SphereTrace& trace) {
    const Vec3 a = trace.points.front();
    const Vec3 m = trace.points.back();
    const double gap = angle_between(a, m);
    if (gap >= kPi - 1e-6)
        throw AntipodalError("cannot double a trace with antipodal endpoints");

    DoubledTrace out;
    out.degenerate_closing = gap <= 1e-9;
    out.rotation_axis = out.degenerate_closing ? a : normalized(a + m);
    const Vec3& u = out.rotation_axis;
    auto half_turn = [&u](const Vec3& p) { return 2.0 * dot(u, p) * u - p; };

    out.trace.radius = trace.radius;
    out.trace.points = trace.points;
    out.trace.arc_length = trace.arc_length;
    const double period = trace.arc_length.back();
    // the rotated copy starts at the old endpoint: halfTurn(a) = m exactly
    for (std::size_t i = 1; i < trace.points.size(); ++i) {
        out.trace.points.push_back(normalized(half_turn(trace.points[i])));
        out.trace.arc_length.push_back(period + trace.arc_length[i]);
    }
    return out;
}

}  // namespace trajectoid
