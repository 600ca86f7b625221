#include "trajectoid/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <thread>

#include "trajectoid/errors.hpp"
#include "trajectoid/rolling.hpp"
#include "trajectoid/sphere_area.hpp"

namespace trajectoid {

namespace {

struct AngleSample {
    double sigma;
    double Phi;  // continuous_angle of the raw holonomy product, in [0, 2*pi]
};

double eval_Phi(const PlanarPath& path, double L, double sigma) {
    return continuous_angle(holonomy(path, L / (kTwoPi * sigma)));
}

double folded(double Phi) { return std::min(Phi, kTwoPi - Phi); }

Quat holonomy_at_sigma(const PlanarPath& path, double sigma) {
    return holonomy(path, path.total_length() / (kTwoPi * sigma));
}

Quat quat_pow(const Quat& q, int n) {
    Quat p = Quat::identity();
    for (int i = 0; i < n; ++i) p = (p * q).normalized();
    return p;
}

// Grid refined until Phi varies at most opt.phi_cell per cell. Cells where
// the angle folds through 0 or 2*pi keep a large jump forever; the depth cap
// pins those down to ~(width / 2^30) and they are handled by the n = 1
// minimization path.
std::vector<AngleSample> refined_grid(const PlanarPath& path, double sigma_min, double sigma_max,
                                      int grid, const SolveOptions& opt) {
    const double L = path.total_length();
    std::vector<AngleSample> out;
    out.reserve(grid + 1);
    for (int i = 0; i <= grid; ++i) {
        const double s = sigma_min + (sigma_max - sigma_min) * double(i) / double(grid);
        out.push_back({s, eval_Phi(path, L, s)});
    }
    std::vector<AngleSample> refined;
    refined.reserve(out.size() * 2);
    refined.push_back(out.front());
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        // iterative midpoint subdivision of the cell (a, b]
        std::vector<std::pair<AngleSample, int>> stack{{out[i + 1], 0}};
        AngleSample left = out[i];
        while (!stack.empty()) {
            auto [right, depth] = stack.back();
            if (std::fabs(right.Phi - left.Phi) <= opt.phi_cell || depth >= opt.max_refine_depth) {
                refined.push_back(right);
                stack.pop_back();
                left = right;
            } else {
                const double mid = 0.5 * (left.sigma + right.sigma);
                stack.push_back({{mid, eval_Phi(path, L, mid)}, depth + 1});
            }
        }
    }
    return refined;
}

double bisect_Phi(const PlanarPath& path, double L, double a, double b, double fa, double target,
                  const SolveOptions& opt) {
    double fb = eval_Phi(path, L, b) - target;
    (void)fb;
    for (int it = 0; it < 200 && (b - a) > opt.sigma_rel_tol * a; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = eval_Phi(path, L, m) - target;
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Golden-section minimization of the folded angle; the n = 1 roots are
// kink-shaped touches of zero, so the minimizer localizes to full precision.
std::pair<double, double> minimize_phi(const PlanarPath& path, double L, double a, double b,
                                       const SolveOptions& opt) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = folded(eval_Phi(path, L, x1));
    double f2 = folded(eval_Phi(path, L, x2));
    for (int it = 0; it < 200 && (b - a) > opt.sigma_rel_tol * a; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = folded(eval_Phi(path, L, x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = folded(eval_Phi(path, L, x2));
        }
    }
    const double s = 0.5 * (a + b);
    return {s, folded(eval_Phi(path, L, s))};
}

bool trace_endpoints_antipodal(const PlanarPath& path, double sigma) {
    const Quat q = holonomy_at_sigma(path, sigma);
    const Vec3 down{0.0, 0.0, -1.0};
    return angle_between(q.conjugate().rotate(down), down) >= kPi - 1e-6;
}

std::optional<Solution> certify(const PlanarPath& path, int n, int k, double sigma,
                                const SolveOptions& opt) {
    Solution sol;
    sol.n = n;
    sol.k = k;
    sol.sigma = sigma;
    sol.r = sigma_to_radius(path.total_length(), sigma);
    const Quat q = holonomy_at_sigma(path, sigma);
    const double target = (n == 1) ? 0.0 : kTwoPi * k / n;
    sol.residual_angle = std::fabs(rotation_angle(q) - target);
    sol.residual_identity = rotation_angle(quat_pow(q, n));
    if (sol.residual_identity > opt.identity_tol) return std::nullopt;
    if (n == 2) {
        if (trace_endpoints_antipodal(path, sigma)) return std::nullopt;  // non-generic
        const AreaValue area = normalized_area(path, sigma);
        sol.area_deviation = mod_distance(area.reduced, kPi, kTwoPi);
        sol.area_check_pass = !area.antipodal && *sol.area_deviation <= opt.area_tol;
    }
    return sol;
}

}  // namespace

ScanTable scan(const PlanarPath& path, double sigma_min, double sigma_max, int samples) {
    if (!(sigma_min > 0.0) || !(sigma_max > sigma_min)) throw Error("bad sigma range");
    if (samples < 2) throw Error("scan needs at least 2 samples");
    ScanTable table;
    table.rows.resize(samples);
    auto fill = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            const double s = sigma_min + (sigma_max - sigma_min) * double(i) / double(samples - 1);
            const Quat q = holonomy_at_sigma(path, s);
            ScanRow row;
            row.sigma = s;
            row.phi = rotation_angle(q);
            row.vertical_axis = fixes_contact_axis(q);
            const AreaValue area = normalized_area(path, s);
            row.area_norm = area.reduced;
            row.antipodal = area.antipodal;
            table.rows[i] = row;
        }
    };
    const unsigned workers =
        samples >= 64 ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
    if (workers <= 1) {
        fill(0, samples);
    } else {
        std::vector<std::future<void>> futs;
        const int chunk = (samples + int(workers) - 1) / int(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const int lo = int(w) * chunk;
            const int hi = std::min(samples, lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, fill, lo, hi));
        }
        for (auto& f : futs) f.get();
    }
    return table;
}

std::vector<Solution> solve_n(const PlanarPath& path, int n, double sigma_min, double sigma_max,
                              int grid, const SolveOptions& opt) {
    if (n < 1) throw Error("n must be >= 1");
    if (!(sigma_min > 0.0) || !(sigma_max > sigma_min)) throw Error("bad sigma range");
    if (grid < 2) throw Error("grid must be >= 2");

    const double L = path.total_length();
    const std::vector<AngleSample> g = refined_grid(path, sigma_min, sigma_max, grid, opt);
    std::vector<Solution> sols;

    if (n == 1) {
        // local minima of the folded angle, interior and boundary cells
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double phi_i = folded(g[i].Phi);
            const double prev = i > 0 ? folded(g[i - 1].Phi) : phi_i + 1.0;
            const double next = i + 1 < g.size() ? folded(g[i + 1].Phi) : phi_i + 1.0;
            if (phi_i > prev || phi_i > next) continue;
            if (phi_i > opt.phi_cell + 2e-2) continue;  // cannot reach zero within one cell
            const double a = i > 0 ? g[i - 1].sigma : g[i].sigma;
            const double b = i + 1 < g.size() ? g[i + 1].sigma : g[i].sigma;
            if (!(b > a)) continue;
            const auto [s, phi] = minimize_phi(path, L, a, b, opt);
            if (phi > opt.identity_tol) continue;
            if (auto sol = certify(path, 1, 0, s, opt)) sols.push_back(*sol);
        }
    } else {
        for (int k = 1; 2 * k <= n; ++k) {
            if (std::gcd(k, n) != 1) continue;
            const double t = kTwoPi * k / n;
            for (const double target : (t == kPi) ? std::vector<double>{t}
                                                  : std::vector<double>{t, kTwoPi - t}) {
                for (std::size_t i = 0; i + 1 < g.size(); ++i) {
                    const double fa = g[i].Phi - target;
                    const double fb = g[i + 1].Phi - target;
                    if (fa == 0.0) {
                        if (auto sol = certify(path, n, k, g[i].sigma, opt)) sols.push_back(*sol);
                        continue;
                    }
                    if ((fa < 0.0) == (fb < 0.0)) continue;
                    if (std::fabs(g[i + 1].Phi - g[i].Phi) > kPi) continue;  // fold cell
                    const double s =
                        bisect_Phi(path, L, g[i].sigma, g[i + 1].sigma, fa, target, opt);
                    if (auto sol = certify(path, n, k, s, opt)) sols.push_back(*sol);
                }
            }
        }
    }

    std::sort(sols.begin(), sols.end(),
              [](const Solution& a, const Solution& b) { return a.sigma < b.sigma; });
    std::vector<Solution> unique;
    for (const Solution& s : sols) {
        if (!unique.empty() && s.k == unique.back().k &&
            std::fabs(s.sigma - unique.back().sigma) <= 1e-9 * s.sigma)
            continue;
        unique.push_back(s);
    }
    return unique;
}

MinimalResult minimal_n(const PlanarPath& path, double sigma_min, double sigma_max, int grid,
                        int n_max, const SolveOptions& opt) {
    if (n_max < 1) throw Error("n_max must be >= 1");
    MinimalResult res;
    const std::vector<AngleSample> g = refined_grid(path, sigma_min, sigma_max, grid, opt);
    res.phi_min = kTwoPi;
    res.phi_max = 0.0;
    for (const AngleSample& s : g) {
        const double phi = folded(s.Phi);
        res.phi_min = std::min(res.phi_min, phi);
        res.phi_max = std::max(res.phi_max, phi);
    }
    res.phi_constant = (res.phi_max - res.phi_min) <= 1e-9;
    for (int n = 1; n <= n_max; ++n) {
        auto sols = solve_n(path, n, sigma_min, sigma_max, grid, opt);
        if (!sols.empty()) {
            res.n = n;
            res.solutions = std::move(sols);
            break;
        }
    }
    return res;
}

double rodrigues_angle(double beta, double axis_dot) {
    if (std::fabs(axis_dot) > 1.0 + 1e-12) throw Error("axis_dot must be in [-1, 1]");
    const double u = std::clamp(axis_dot, -1.0, 1.0);
    const double h = 0.5 * beta;
    const double c = std::cos(h), s = std::sin(h);
    const double scalar = c * c + u * s * s;  // cos(gamma/2), sign-aware
    const double v = std::sqrt(std::max(0.0, 1.0 - scalar * scalar));
    return 2.0 * std::atan2(v, std::fabs(scalar));
}

double wedge_axis_dot(const PlanarPath& w, double sigma) {
    const double r = sigma_to_radius(w.total_length(), sigma);
    const Vec3 up{0.0, 0.0, 1.0};
    return std::clamp(dot(up, holonomy(w, r).rotate(up)), -1.0, 1.0);
}

}  // namespace trajectoid
