#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "trajectoid/errors.hpp"
#include "trajectoid/rolling.hpp"
#include "trajectoid/solver.hpp"

using namespace trajectoid;

TEST_CASE("scan: straight path gives the triangle wave") {
    const PlanarPath p = PlanarPath::from_vertices({{0, 0}, {5, 0}});
    const ScanTable table = scan(p, 0.1, 2.1, 400);
    REQUIRE(table.rows.size() == 400);
    double prev = 0.0;
    for (const ScanRow& row : table.rows) {
        CHECK(std::fabs(row.phi - fold_angle(kTwoPi * row.sigma)) <= 1e-10);
        CHECK(row.sigma > prev);
        prev = row.sigma;
        CHECK(row.phi >= 0.0);
        CHECK(row.phi <= kPi);
    }
}

TEST_CASE("scan: antipodal rows are flagged and the area column jumps") {
    // straight path: endpoints antipodal at every half-integer sigma
    const PlanarPath p = PlanarPath::from_vertices({{0, 0}, {1, 0}});
    const ScanTable table = scan(p, 0.45, 0.55, 101);
    bool saw_antipodal = false;
    for (const ScanRow& row : table.rows) {
        if (row.antipodal) {
            saw_antipodal = true;
            CHECK(std::isnan(row.area_norm));
            CHECK(std::fabs(row.phi - kPi) <= 1e-3);  // antipodal implies a half turn
        }
    }
    CHECK(saw_antipodal);
}

TEST_CASE("solve_n: straight path closes at every integer sigma") {
    const PlanarPath p = PlanarPath::from_vertices({{0, 0}, {2, 0}});
    const auto sols = solve_n(p, 1, 0.05, 5.5, 600);
    REQUIRE(sols.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(std::fabs(sols[i].sigma - (i + 1)) <= 1e-9);
        CHECK(sols[i].residual_identity <= 1e-8);
        CHECK(sols[i].r == doctest::Approx(sigma_to_radius(2.0, i + 1.0)));
    }
}

TEST_CASE("solve_n: straight path n=2 roots at half-integers") {
    const PlanarPath p = PlanarPath::from_vertices({{0, 0}, {2, 0}});
    const auto sols = solve_n(p, 2, 0.05, 3.0, 400);
    // sigma = 0.5, 1.5, 2.5 are antipodal-degenerate for a straight path and
    // are excluded as non-generic two-path roots
    CHECK(sols.empty());
}

TEST_CASE("solve_n: V path is a 1-path (sigma = 2 in range)") {
    const PlanarPath v = gen_v_path(1, 1);
    const auto sols = solve_n(v, 1, 0.05, 4.0, 800);
    REQUIRE(!sols.empty());
    CHECK(std::fabs(sols.front().sigma - 2.0) <= 1e-9);
    for (const Solution& s : sols) CHECK(s.residual_identity <= 1e-8);
}

TEST_CASE("solve_n: results sorted by sigma, count stable under grid doubling") {
    const PlanarPath p = gen_fourier_random(77, 4, 0.5, 400);
    const auto a = solve_n(p, 2, 0.05, 4.0, 400);
    const auto b = solve_n(p, 2, 0.05, 4.0, 800);
    CHECK(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i > 0) CHECK(a[i].sigma > a[i - 1].sigma);
        CHECK(std::fabs(a[i].sigma - b[i].sigma) <= 1e-9 * a[i].sigma);
        CHECK(a[i].residual_identity <= 1e-8);
    }
}

TEST_CASE("solve_n: two-path roots satisfy the area condition") {
    for (std::uint64_t seed : {5ULL, 6ULL, 7ULL}) {
        const PlanarPath p = gen_fourier_random(seed, 4, 0.6, 400);
        for (const Solution& s : solve_n(p, 2, 0.05, 4.0, 500)) {
            REQUIRE(s.area_deviation.has_value());
            CHECK(*s.area_deviation <= 1e-6);
            CHECK(s.area_check_pass);
            CHECK(std::fabs(rotation_angle(holonomy(p, s.r)) - kPi) <= 1e-8);
        }
    }
}

TEST_CASE("minimal_n: straight path is a 1-path") {
    const PlanarPath p = PlanarPath::from_vertices({{0, 0}, {1, 0}});
    const MinimalResult res = minimal_n(p, 0.05, 4.0, 400, 4);
    REQUIRE(res.n.has_value());
    CHECK(*res.n == 1);
    CHECK(!res.phi_constant);
}

TEST_CASE("minimal_n: wedge with beta just under pi/j needs more than j periods") {
    std::mt19937_64 rng(31337);
    for (int j = 2; j <= 6; ++j) {
        const double beta = kPi / j * 0.98;
        const PlanarPath w = PlanarPath::from_vertices(oracles::random_polyline(rng, 5));
        const PlanarPath p = gen_wedge_path(w, beta);
        const MinimalResult res = minimal_n(p, 0.05, 6.0, 400, j);
        CHECK(!res.n.has_value());  // no n <= j admits a root
    }
}

TEST_CASE("rodrigues_angle: endpoints") {
    CHECK(rodrigues_angle(0.7, 1.0) == doctest::Approx(0.0));
    for (double beta : {0.2, 0.9, 1.4})
        CHECK(rodrigues_angle(beta, -1.0) == doctest::Approx(2 * beta).epsilon(1e-14));
    CHECK_THROWS_AS(rodrigues_angle(0.5, 1.5), Error);
}

TEST_CASE("rodrigues_angle matches direct composition B^-1 R^-1 B R") {
    std::mt19937_64 rng(4242);
    for (int rep = 0; rep < 500; ++rep) {
        const double beta = oracles::uniform(rng, 0.01, kPi - 0.01);
        const Vec3 n1 = oracles::random_unit_vec3(rng);
        const Quat B = Quat::from_axis_angle(n1, beta);
        const Quat R = Quat::from_axis_angle(oracles::random_unit_vec3(rng),
                                             oracles::uniform(rng, 0, kTwoPi));
        const Quat composed = B.conjugate() * R.conjugate() * B * R;
        const double dot12 = dot(n1, R.rotate(n1));
        CHECK(std::fabs(rodrigues_angle(beta, dot12) - rotation_angle(composed)) <= 1e-9);
    }
}

TEST_CASE("wedge_axis_dot: straight base gives cos(L/r)") {
    const PlanarPath w = PlanarPath::from_vertices({{0, 0}, {1.5, 0}});
    for (double sigma : {0.3, 0.8, 1.9}) {
        const double r = sigma_to_radius(w.total_length(), sigma);
        CHECK(wedge_axis_dot(w, sigma) ==
              doctest::Approx(std::cos(w.total_length() / r)).epsilon(1e-12));
    }
}

TEST_CASE("wedge_axis_dot: vertical-axis holonomy gives dot = 1") {
    const PlanarPath v = gen_v_path(1, 1);
    CHECK(wedge_axis_dot(v, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("wedge scan angle equals the Rodrigues prediction end to end") {
    std::mt19937_64 rng(808080);
    for (int rep = 0; rep < 5; ++rep) {
        const PlanarPath w = PlanarPath::from_vertices(oracles::random_polyline(rng, 5));
        const double beta = oracles::uniform(rng, 0.1, kPi / 2 - 0.1);
        const PlanarPath p = gen_wedge_path(w, beta);
        for (double sigma_p : {0.4, 0.9, 1.7, 2.5}) {
            const double r = sigma_to_radius(p.total_length(), sigma_p);
            const double phi = rotation_angle(holonomy(p, r));
            const double sigma_w = radius_to_sigma(w.total_length(), r);
            const double predicted = rodrigues_angle(beta, wedge_axis_dot(w, sigma_w));
            CHECK(std::fabs(phi - predicted) <= 1e-8);
            CHECK(phi <= 2 * beta + 1e-8);
        }
    }
}

TEST_CASE("solver: scan agrees with solve_n residual targets") {
    const PlanarPath p = gen_fourier_random(99, 3, 0.5, 300);
    for (int n : {2, 3}) {
        for (const Solution& s : solve_n(p, n, 0.05, 4.0, 500)) {
            CHECK(s.n == n);
            CHECK(std::gcd(s.k, s.n) == 1);
            CHECK(s.residual_angle <= 1e-8);
            CHECK(s.residual_identity <= 1e-8);
            // minimality of the certified pair: no earlier power closes
            const Quat q = holonomy(p, s.r);
            Quat pow = Quat::identity();
            for (int m = 1; m < s.n; ++m) {
                pow = (q * pow).normalized();
                CHECK(rotation_angle(pow) > 1e-4);
            }
        }
    }
}
