#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "trajectoid/errors.hpp"
#include "trajectoid/mesh.hpp"
#include "trajectoid/rolling.hpp"
#include "trajectoid/solver.hpp"

using namespace trajectoid;

namespace {

SphereTrace synthetic_trace(const std::vector<Vec3>& pts, double r) {
    SphereTrace t;
    t.radius = r;
    t.points = pts;
    t.arc_length.resize(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i)
        t.arc_length[i] = t.arc_length[i - 1] + r * angle_between(pts[i - 1], pts[i]);
    return t;
}

std::vector<Vec3> great_circle_points(int n) {
    std::vector<Vec3> pts;
    for (int i = 0; i <= n; ++i) {
        const double a = kTwoPi * i / n;
        pts.push_back({std::sin(a), 0.0, -std::cos(a)});
    }
    return pts;
}

bool solid_is_convex(const TrajectoidSolid& s, double tol_rel) {
    const double r = s.radius_inner;
    for (const Vec3& p : s.mesh.positions) {
        if (norm(p) > s.radius_shell * (1.0 + tol_rel)) return false;
        for (const CutPlane& cut : s.cuts)
            if (dot(cut.normal, p) > cut.offset + tol_rel * r) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("build_shell: one subdivision gives 80 faces, Euler characteristic 2") {
    const Mesh m = build_shell(1.0, 1);
    CHECK(m.faces.size() == 80);
    CHECK(oracles::validate_closed_mesh(m).ok);
    CHECK(mesh_volume(m) > 0.0);

    const Mesh m4 = build_shell(2.0, 4);
    CHECK(m4.faces.size() == 20 * 256);
    CHECK(oracles::validate_closed_mesh(m4).ok);
    CHECK_THROWS_AS(build_shell(1.0, 0), Error);
    CHECK_THROWS_AS(build_shell(1.0, 9), Error);
}

TEST_CASE("build_shell: area converges to the sphere area from below") {
    const double R = 1.5;
    double prev_err = 1.0;
    for (int s : {1, 2, 3, 4}) {
        const Mesh m = build_shell(R, s);
        const double err = 1.0 - mesh_area(m) / (4 * kPi * R * R);
        CHECK(err > 0.0);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 2e-3);
}

TEST_CASE("carve: two antipodal cuts make a sphere with two flats") {
    const double r = 1.0, R = 1.4;
    const std::vector<CutPlane> cuts = {{{0, 0, 1}, r}, {{0, 0, -1}, r}};
    const TrajectoidSolid solid = carve_with_cuts(cuts, r, R, 4);
    CHECK(oracles::validate_closed_mesh(solid.mesh).ok);
    CHECK(solid_is_convex(solid, 1e-7));
    CHECK(min_face_plane_offset(solid) >= r * (1 - 1e-7));

    CHECK(std::fabs(support_height(solid, {0, 0, 1}) - r) <= 1e-6 * r);
    CHECK(std::fabs(support_height(solid, {0, 0, -1}) - r) <= 1e-6 * r);
    // uncut directions keep the shell radius, up to the chord sagitta
    CHECK(support_height(solid, {1, 0, 0}) == doctest::Approx(R).epsilon(1e-3));

    // slab support oracle between the flats
    const double psi = 0.3;
    const Vec3 d{std::sin(psi), 0.0, std::cos(psi)};
    const double expect = std::cos(psi) <= r / R
                              ? R
                              : r * std::cos(psi) + std::sqrt(R * R - r * r) * std::sin(psi);
    CHECK(support_height(solid, d) == doctest::Approx(expect).epsilon(2e-3));
    CHECK(support_height(solid, d) >= r);
}

TEST_CASE("carve: a great-circle trace leaves a cylindrical band") {
    const double r = 1.0, R = 1.3;
    const TrajectoidSolid solid =
        carve(synthetic_trace(great_circle_points(7000), r), R, 4, {1e-3, 7000});
    CHECK(oracles::validate_closed_mesh(solid.mesh).ok);
    for (double a : {0.0, 0.4, 1.1, 2.0, 3.9, 5.5}) {
        const Vec3 d{std::sin(a), 0.0, -std::cos(a)};
        CHECK(std::fabs(support_height(solid, d) - r) <= 1e-6 * r);
    }
    // polar directions keep the shell
    CHECK(support_height(solid, {0, 1, 0}) == doctest::Approx(R).epsilon(1e-3));
}

TEST_CASE("carve: thick shell loses every original vertex") {
    // V path at sigma = 1: the two-period trace covers two orthogonal great
    // circles, so every direction is within acos(r/R) of a cut for R = 5r
    const PlanarPath v = gen_v_path(1, 1);
    const double r = sigma_to_radius(v.total_length(), 1.0);
    const SphereTrace trace = sphere_trace(repeat_path(v, 2), r);
    const double R = 5.0 * r;
    const TrajectoidSolid solid = carve(trace, R, 3, {1e-2, 1500});
    for (const Vec3& p : solid.mesh.positions)
        CHECK(norm(p) < R * (1.0 - 1e-9));
}

TEST_CASE("carve: volume never increases as cuts accumulate") {
    std::mt19937_64 rng(606);
    std::vector<CutPlane> cuts;
    double prev = mesh_volume(build_shell(1.3, 3));
    for (int i = 0; i < 12; ++i) {
        cuts.push_back({oracles::random_unit_vec3(rng), 1.0});
        const TrajectoidSolid s = carve_with_cuts(cuts, 1.0, 1.3, 3);
        const double vol = mesh_volume(s.mesh);
        CHECK(vol <= prev * (1.0 + 1e-12));
        prev = vol;
        CHECK(solid_is_convex(s, 1e-7));
    }
}

TEST_CASE("carve: cut facets are planar and tangent to the inner ball") {
    std::mt19937_64 rng(42);
    std::vector<CutPlane> cuts;
    for (int i = 0; i < 20; ++i) cuts.push_back({oracles::random_unit_vec3(rng), 1.0});
    const TrajectoidSolid s = carve_with_cuts(cuts, 1.0, 1.4, 3);
    for (std::size_t f = 0; f < s.mesh.faces.size(); ++f) {
        const int cut_id = s.face_cut_id[f];
        if (cut_id < 0) continue;
        const CutPlane& cut = s.cuts[cut_id];
        for (int v : s.mesh.faces[f])
            CHECK(std::fabs(dot(cut.normal, s.mesh.positions[v]) - cut.offset) <= 1e-7);
    }
}

TEST_CASE("carve: rotation closure of the cut set at a certified solution") {
    const PlanarPath path = gen_fourier_random(2024, 4, 0.6, 600);
    const auto sols = solve_n(path, 2, 0.05, 4.0, 600);
    REQUIRE(!sols.empty());
    const Solution& sol = sols.front();
    const SphereTrace trace = sphere_trace(repeat_path(path, 2), sol.r);
    const std::vector<CutPlane> cuts = decimate_cuts(trace, {5e-3, 600});
    const Quat period = holonomy(path, sol.r);
    // one period maps the cut set into itself (within the decimation spacing)
    double worst = 0.0;
    for (const CutPlane& c : cuts) {
        const Vec3 moved = period.conjugate().rotate(c.normal);
        double best = kPi;
        for (const CutPlane& other : cuts) best = std::min(best, angle_between(moved, other.normal));
        worst = std::max(worst, best);
    }
    CHECK(worst <= 6e-3);
}

TEST_CASE("decimate_cuts: spacing and deduplication") {
    const SphereTrace trace = synthetic_trace(great_circle_points(5000), 1.0);
    const auto cuts = decimate_cuts(trace, {1e-2, 100000});
    for (std::size_t i = 1; i < cuts.size(); ++i)
        CHECK(angle_between(cuts[i - 1].normal, cuts[i].normal) >= 1e-2 - 1e-9);
    // a doubled pass over the same circle adds no planes
    std::vector<Vec3> twice = great_circle_points(5000);
    const auto more = great_circle_points(5000);
    twice.insert(twice.end(), more.begin() + 1, more.end());
    const auto cuts2 = decimate_cuts(synthetic_trace(twice, 1.0), {1e-2, 100000});
    CHECK(cuts2.size() <= cuts.size() + 1);
}

TEST_CASE("export_stl: 80-face shell has the exact binary size") {
    TrajectoidSolid s;
    s.mesh = build_shell(1.0, 1);
    s.face_cut_id.assign(s.mesh.faces.size(), -1);
    const std::string bytes = export_stl(s);
    CHECK(bytes.size() == 84 + 80 * 50);
    const auto tris = oracles::parse_stl(bytes);
    REQUIRE(tris.size() == 80);
    // round trip within float32 quantization, normals outward
    std::multiset<float> xs_mesh, xs_stl;
    for (const auto& f : s.mesh.faces)
        for (int v : f) xs_mesh.insert(float(s.mesh.positions[v].x));
    for (const auto& t : tris) {
        for (int v = 0; v < 3; ++v) xs_stl.insert(t.v[v][0]);
        const Vec3 a{t.v[0][0], t.v[0][1], t.v[0][2]};
        const Vec3 b{t.v[1][0], t.v[1][1], t.v[1][2]};
        const Vec3 c{t.v[2][0], t.v[2][1], t.v[2][2]};
        CHECK(dot(Vec3{t.n[0], t.n[1], t.n[2]}, (a + b + c) / 3.0) > 0.0);
    }
    CHECK(xs_mesh == xs_stl);
}

TEST_CASE("export_obj emits one line per vertex and face") {
    TrajectoidSolid s;
    s.mesh = build_shell(1.0, 1);
    s.face_cut_id.assign(s.mesh.faces.size(), -1);
    const std::string obj = export_obj(s);
    std::size_t vlines = 0, flines = 0, pos = 0;
    while (pos < obj.size()) {
        if (obj.compare(pos, 2, "v ") == 0) ++vlines;
        if (obj.compare(pos, 2, "f ") == 0) ++flines;
        pos = obj.find('\n', pos);
        if (pos == std::string::npos) break;
        ++pos;
    }
    CHECK(vlines == s.mesh.positions.size());
    CHECK(flines == 80);
}

TEST_CASE("core_cavity: volume matches the sphere-plus-bore oracle") {
    const double r = 1.0, R = 1.4;
    std::mt19937_64 rng(9);
    std::vector<CutPlane> cuts;
    for (int i = 0; i < 40; ++i) {
        Vec3 n = oracles::random_unit_vec3(rng);
        if (n.z > 0.2) n.z = -n.z;  // keep the +z region clear for the bore
        cuts.push_back({normalized(n), r});
    }
    const TrajectoidSolid base = carve_with_cuts(cuts, r, R, 4);

    CavityOptions opt;
    opt.axis = {0, 0, 1};
    opt.r_ball = r;
    opt.bore_radius = 0.3;
    const TrajectoidSolid flask = core_cavity(base, opt);
    CHECK(oracles::validate_closed_mesh(flask.mesh).ok);

    // reference: the same solid with only the entry facet cut
    std::vector<CutPlane> with_facet = cuts;
    with_facet.push_back({{0, 0, 1}, 1.02 * r});
    const double v_before = mesh_volume(carve_with_cuts(with_facet, r, R, 4).mesh);
    const double removed = v_before - mesh_volume(flask.mesh);

    const double theta_b = std::asin(opt.bore_radius / r);
    const double z0 = r * std::cos(theta_b);
    const double cap_h = r - z0;
    const double v_cap = kPi * cap_h * cap_h * (3 * r - cap_h) / 3.0;
    const double v_prism = kPi * opt.bore_radius * opt.bore_radius * (1.02 * r - z0);
    const double expected = (4.0 / 3.0) * kPi * r * r * r - v_cap + v_prism;
    CHECK(std::fabs(removed - expected) <= 0.01 * expected);
}

TEST_CASE("core_cavity: r_ball = r is tangent to every cut plane") {
    const double r = 1.0, R = 1.4;
    const std::vector<CutPlane> cuts = {{{1, 0, 0}, r}, {{-1, 0, 0}, r}, {{0, 1, 0}, r}};
    const TrajectoidSolid base = carve_with_cuts(cuts, r, R, 3);
    CavityOptions opt;
    opt.axis = {0, 0, 1};
    const TrajectoidSolid flask = core_cavity(base, opt);
    CHECK(oracles::validate_closed_mesh(flask.mesh).ok);
    // every cavity vertex stays inside each tangent plane
    for (std::size_t f = 0; f < flask.mesh.faces.size(); ++f) {
        if (flask.face_cut_id[f] != -2) continue;
        for (int v : flask.mesh.faces[f])
            for (const CutPlane& cut : cuts)
                CHECK(dot(cut.normal, flask.mesh.positions[v]) <= cut.offset + 1e-9);
    }
}

TEST_CASE("core_cavity: thin-shell axis is reported") {
    const double r = 1.0, R = 1.05;
    // heavy shaving everywhere around +z
    std::vector<CutPlane> cuts;
    for (int i = 0; i < 64; ++i) {
        const double a = kTwoPi * i / 64;
        cuts.push_back({normalized(Vec3{0.25 * std::cos(a), 0.25 * std::sin(a), 1.0}), r});
    }
    const TrajectoidSolid base = carve_with_cuts(cuts, r, R, 3);
    CavityOptions opt;
    opt.axis = {0, 0, 1};
    CHECK_THROWS_AS(core_cavity(base, opt), Error);
}

TEST_CASE("carve rejects a shell not larger than the ball") {
    const SphereTrace t = synthetic_trace(great_circle_points(100), 1.0);
    CHECK_THROWS_AS(carve(t, 1.0, 3, {}), Error);
}
