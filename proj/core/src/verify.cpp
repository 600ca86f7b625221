#include "trajectoid/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trajectoid/errors.hpp"
#include "trajectoid/sphere_area.hpp"

namespace trajectoid {

namespace {

// Rodrigues form, kept separate from the quaternion path on purpose.
Mat3 axis_angle_matrix(const Vec3& unit_axis, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    const double omc = 1.0 - c;
    const Vec3& a = unit_axis;
    Mat3 r;
    r.m[0][0] = c + a.x * a.x * omc;
    r.m[0][1] = a.x * a.y * omc - a.z * s;
    r.m[0][2] = a.x * a.z * omc + a.y * s;
    r.m[1][0] = a.y * a.x * omc + a.z * s;
    r.m[1][1] = c + a.y * a.y * omc;
    r.m[1][2] = a.y * a.z * omc - a.x * s;
    r.m[2][0] = a.z * a.x * omc - a.y * s;
    r.m[2][1] = a.z * a.y * omc + a.x * s;
    r.m[2][2] = c + a.z * a.z * omc;
    return r;
}

// Rotation angle of M in [0, pi], using the skew part where acos((tr-1)/2)
// would round to zero.
double matrix_rotation_angle(const Mat3& M) {
    const double sx = 0.5 * (M.m[2][1] - M.m[1][2]);
    const double sy = 0.5 * (M.m[0][2] - M.m[2][0]);
    const double sz = 0.5 * (M.m[1][0] - M.m[0][1]);
    const double s = std::min(1.0, std::sqrt(sx * sx + sy * sy + sz * sz));
    const double c = std::clamp(0.5 * (M.trace() - 1.0), -1.0, 1.0);
    return std::atan2(s, c);
}

Mat3 matrix_holonomy(const PlanarPath& path, double r) {
    Mat3 M;
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        const Vec2 d = path.segment_direction(i);
        M = axis_angle_matrix({-d.y, d.x, 0.0}, path.segment_length(i) / r) * M;
    }
    return M;
}

// Fibonacci lattice on the sphere; deterministic low-discrepancy directions.
std::vector<Vec3> sphere_directions(int n) {
    std::vector<Vec3> dirs;
    dirs.reserve(n);
    const double ga = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double ph = ga * i;
        dirs.push_back({rho * std::cos(ph), rho * std::sin(ph), z});
    }
    return dirs;
}

}  // namespace

double verify_holonomy(const PlanarPath& path, const Solution& sol) {
    const Mat3 M = matrix_holonomy(path, sol.r);
    Mat3 P;
    for (int i = 0; i < sol.n; ++i) P = M * P;
    return matrix_rotation_angle(P);
}

SupportCheck verify_trace_support(const TrajectoidSolid& solid, const SphereTrace& trace,
                                  double delta, int samples) {
    SupportCheck check;
    check.delta = delta;
    const double r = solid.radius_inner;
    check.trace_tol = 1e-5 * r;

    const std::size_t stride = std::max<std::size_t>(1, trace.points.size() / 4000);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < trace.points.size(); i += stride)
        max_dev = std::max(max_dev, std::fabs(support_height(solid, trace.points[i]) - r));
    max_dev = std::max(max_dev, std::fabs(support_height(solid, trace.points.back()) - r));
    check.max_trace_deviation = max_dev;
    check.pass_trace = max_dev <= check.trace_tol;

    // the cut at u shaves the shell up to angular radius acos(r / r_shell)
    const double band = std::acos(std::clamp(r / solid.radius_shell, -1.0, 1.0));
    double min_margin = std::numeric_limits<double>::infinity();
    int counted = 0;
    for (const Vec3& d : sphere_directions(samples)) {
        double nearest = kPi;
        for (const CutPlane& cut : solid.cuts)
            nearest = std::min(nearest, angle_between(d, cut.normal));
        if (nearest < band + delta) continue;
        min_margin = std::min(min_margin, support_height(solid, d) / r - 1.0);
        ++counted;
    }
    check.off_trace_samples = counted;
    check.min_off_trace_margin = counted > 0 ? min_margin : 0.0;
    check.pass_margin = counted == 0 || min_margin > 0.0;
    return check;
}

PlanarPath replay(const PlanarPath& path, const Solution& sol, int periods) {
    if (periods < 1) throw Error("periods must be >= 1");
    const PlanarPath repeated = resample(repeat_path(path, periods), 0.05 * sol.r);
    const SphereTrace trace = sphere_trace(repeated, sol.r);

    std::vector<Vec2> out;
    out.reserve(trace.points.size());
    out.push_back(repeated.vertices().front());
    double heading = std::atan2(repeated.segment_direction(0).y, repeated.segment_direction(0).x);
    for (std::size_t i = 0; i + 1 < trace.points.size(); ++i) {
        if (i > 0)
            heading += spherical_exterior_angle(trace.points[i - 1], trace.points[i],
                                                trace.points[i + 1]);
        const double step = sol.r * angle_between(trace.points[i], trace.points[i + 1]);
        const Vec2 prev = out.back();
        out.push_back({prev.x + step * std::cos(heading), prev.y + step * std::sin(heading)});
    }
    return PlanarPath::from_vertices(std::move(out), path.name() + "-replay");
}

VerificationReport verify_solution(const PlanarPath& path, const Solution& sol,
                                   const TrajectoidSolid* solid, const SphereTrace* trace) {
    VerificationReport rep;
    rep.holonomy_residual = verify_holonomy(path, sol);
    rep.holonomy_pass = rep.holonomy_residual <= rep.holonomy_tol;

    const Mat3 M = matrix_holonomy(path, sol.r);
    Mat3 P;
    rep.minimality_pass = true;
    for (int m = 1; m <= sol.n; ++m) {
        P = M * P;
        const double res = matrix_rotation_angle(P);
        rep.orientation_residual_per_period.push_back(res);
        if (m < sol.n && res <= 1e-4) rep.minimality_pass = false;
    }

    const int periods = sol.n;
    const PlanarPath replayed = replay(path, sol, periods);
    const PlanarPath reference = resample(repeat_path(path, periods), 0.05 * sol.r);
    double dev = 0.0;
    for (std::size_t i = 0; i < reference.vertices().size(); ++i)
        dev = std::max(dev, norm(replayed.vertices()[i] - reference.vertices()[i]));
    rep.replay_deviation = dev;
    rep.replay_tol = 1e-9 * path.total_length();
    rep.replay_pass = dev <= rep.replay_tol;

    // one-period displacement of the replayed route vs. the period vector
    const double L = path.total_length();
    std::size_t j_end = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < reference.vertices().size(); ++i) {
        const double d = std::fabs(reference.arc_length_at(i) - L);
        if (d < best) {
            best = d;
            j_end = i;
        }
    }
    rep.period_translation_error =
        norm((replayed.vertices()[j_end] - replayed.vertices()[0]) - path.period_vector());

    if (solid && trace) {
        rep.support = verify_trace_support(*solid, *trace);
        rep.has_support = true;
    }
    return rep;
}

}  // namespace trajectoid
