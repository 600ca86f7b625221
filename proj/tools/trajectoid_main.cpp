// trajectoid: find ball radii that make a solid roll exactly along repeated
// copies of a planar path, carve the solid, and verify it.
//
// Exit codes: 0 success, 1 verification failure, 2 input error,
//             3 no solution found where one was required.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "trajectoid/errors.hpp"
#include "trajectoid/mesh.hpp"
#include "trajectoid/path.hpp"
#include "trajectoid/rolling.hpp"
#include "trajectoid/solver.hpp"
#include "trajectoid/sphere_area.hpp"
#include "trajectoid/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace trajectoid;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitNoSolution = 3;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& data) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path.string());
    os.write(data.data(), std::streamsize(data.size()));
}

PlanarPath load_input(const std::string& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw Error("cannot read " + file);
    std::stringstream ss;
    ss << is.rdbuf();
    return load_path_csv(ss.str(), fs::path(file).stem().string());
}

std::string path_to_csv(const PlanarPath& path) {
    std::string out = "x,y\n";
    for (const Vec2& v : path.vertices()) out += g17(v.x) + "," + g17(v.y) + "\n";
    return out;
}

std::string trace_to_csv(const SphereTrace& trace) {
    std::string out = "t,x,y,z\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const Vec3 p = trace.point_scaled(i);
        out += g17(trace.arc_length[i]) + "," + g17(p.x) + "," + g17(p.y) + "," + g17(p.z) + "\n";
    }
    return out;
}

std::string scan_to_csv(const ScanTable& table) {
    std::string out = "sigma,phi,area_norm,antipodal,vertical_axis\n";
    for (const ScanRow& r : table.rows) {
        out += g17(r.sigma) + "," + g17(r.phi) + "," + g17(r.area_norm) + "," +
               (r.antipodal ? "1" : "0") + "," + (r.vertical_axis ? "1" : "0") + "\n";
    }
    return out;
}

json solution_to_json(const Solution& s) {
    json j{{"n", s.n},
           {"k", s.k},
           {"sigma", s.sigma},
           {"r", s.r},
           {"residual_angle", s.residual_angle},
           {"residual_identity", s.residual_identity}};
    if (s.area_deviation) {
        j["area_deviation"] = *s.area_deviation;
        j["area_check_pass"] = s.area_check_pass;
    }
    return j;
}

json report_to_json(const VerificationReport& rep) {
    json j{{"holonomy_residual", rep.holonomy_residual},
           {"holonomy_tol", rep.holonomy_tol},
           {"holonomy_pass", rep.holonomy_pass},
           {"orientation_residual_per_period", rep.orientation_residual_per_period},
           {"minimality_pass", rep.minimality_pass},
           {"replay_deviation", rep.replay_deviation},
           {"replay_tol", rep.replay_tol},
           {"replay_pass", rep.replay_pass},
           {"period_translation_error", rep.period_translation_error},
           {"all_pass", rep.all_pass()}};
    if (rep.has_support) {
        j["support"] = {{"max_trace_deviation", rep.support.max_trace_deviation},
                        {"trace_tol", rep.support.trace_tol},
                        {"pass_trace", rep.support.pass_trace},
                        {"min_off_trace_margin", rep.support.min_off_trace_margin},
                        {"off_trace_samples", rep.support.off_trace_samples},
                        {"delta", rep.support.delta},
                        {"pass_margin", rep.support.pass_margin}};
    }
    return j;
}

// --- minimal self-contained SVG plot ----------------------------------------

struct SvgPlot {
    double x0, x1, y0, y1;  // data ranges
    double left = 55, top = 20, w = 700, h = 180;
    double voffset = 0;
    std::string body;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * w; }
    double py(double y) const { return voffset + top + h - (y - y0) / (y1 - y0) * h; }

    void line(double xa, double ya, double xb, double yb, const std::string& style) {
        body += "<line x1='" + std::to_string(px(xa)) + "' y1='" + std::to_string(py(ya)) +
                "' x2='" + std::to_string(px(xb)) + "' y2='" + std::to_string(py(yb)) + "' " +
                style + "/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
        if (pts.size() < 2) return;
        body += "<polyline fill='none' stroke='" + color + "' stroke-width='1' points='";
        for (const auto& [x, y] : pts)
            body += std::to_string(px(x)) + "," + std::to_string(py(y)) + " ";
        body += "'/>\n";
    }
    void dot(double x, double y, const std::string& color) {
        body += "<circle cx='" + std::to_string(px(x)) + "' cy='" + std::to_string(py(y)) +
                "' r='3' fill='" + color + "'/>\n";
    }
    void text(double x, double y, const std::string& s) {
        body += "<text x='" + std::to_string(x) + "' y='" + std::to_string(y) +
                "' font-size='11' font-family='sans-serif'>" + s + "</text>\n";
    }
    void frame(const std::string& ylabel) {
        const std::string axis = "stroke='black' stroke-width='1'";
        line(x0, y0, x1, y0, axis);
        line(x0, y0, x0, y1, axis);
        text(left - 45, voffset + top + 10, ylabel);
    }
};

std::string scan_svg(const ScanTable& table, const std::vector<Solution>& roots, int n_max) {
    const double smin = table.rows.front().sigma, smax = table.rows.back().sigma;
    std::string out = "<svg xmlns='http://www.w3.org/2000/svg' width='800' height='460'>\n";

    SvgPlot top{smin, smax, 0.0, kPi};
    top.frame("phi");
    for (int n = 2; n <= n_max; ++n)
        top.line(smin, kTwoPi / n, smax, kTwoPi / n,
                 "stroke='#bbbbbb' stroke-width='0.6' stroke-dasharray='4 3'");
    std::vector<std::pair<double, double>> phi_pts;
    for (const ScanRow& r : table.rows) phi_pts.push_back({r.sigma, r.phi});
    top.polyline(phi_pts, "#1f66ad");
    for (const Solution& s : roots)
        top.dot(s.sigma, s.n == 1 ? 0.0 : kTwoPi * s.k / s.n, "#cc2222");
    top.text(400, 15, "phi(sigma) with 2*pi/n levels");
    out += top.body;

    SvgPlot bottom{smin, smax, 0.0, kTwoPi};
    bottom.voffset = 230;
    bottom.frame("S/r^2");
    std::vector<std::pair<double, double>> seg;
    for (const ScanRow& r : table.rows) {
        if (r.antipodal || std::isnan(r.area_norm)) {  // gap across the jump
            bottom.polyline(seg, "#2e8540");
            seg.clear();
            continue;
        }
        if (!seg.empty() && std::fabs(r.area_norm - seg.back().second) > kPi) {
            bottom.polyline(seg, "#2e8540");
            seg.clear();
        }
        seg.push_back({r.sigma, r.area_norm});
    }
    bottom.polyline(seg, "#2e8540");
    bottom.text(400, 245, "normalized enclosed area mod 2*pi");
    out += bottom.body;
    out += "</svg>\n";
    return out;
}

// --- shared options ----------------------------------------------------------

struct CommonOpts {
    std::string input;
    double sigma_min = 0.05;
    double sigma_max = 6.0;
    int grid = 800;
    int n = 0;
    int n_max = 8;
    double shell_ratio = 1.4;
    int subdiv = 5;
    std::string out_dir = ".";
    int periods = 0;
    bool no_verify = false;
    double sigma_override = 0.0;
    int max_cuts = 2000;
    double cavity_ratio = 0.0;
};

void add_sigma_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--sigma-min", o.sigma_min, "lower end of the sigma sweep")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--sigma-max", o.sigma_max, "upper end of the sigma sweep")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--grid", o.grid, "sweep grid size")->check(CLI::Range(2, 2000000));
}

std::vector<Solution> pick_solutions(const PlanarPath& path, const CommonOpts& o, int* n_used) {
    if (o.sigma_override > 0.0) {
        const int n = o.n > 0 ? o.n : 1;
        SolveOptions sopt;
        // certify the user-provided sigma directly
        const double width = 1e-6 * o.sigma_override;
        auto sols = solve_n(path, n, o.sigma_override - width, o.sigma_override + width, 8, sopt);
        *n_used = n;
        return sols;
    }
    if (o.n > 0) {
        *n_used = o.n;
        return solve_n(path, o.n, o.sigma_min, o.sigma_max, o.grid);
    }
    const MinimalResult res = minimal_n(path, o.sigma_min, o.sigma_max, o.grid, o.n_max);
    if (!res.n) return {};
    *n_used = *res.n;
    return res.solutions;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trajectoid: solids that roll along prescribed planar paths"};
    app.require_subcommand(1);
    CommonOpts o;

    // analyze
    auto* analyze = app.add_subcommand("analyze", "path length, turning and index");
    analyze->add_option("--input", o.input, "path CSV file")->required();

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "sweep sigma; CSV table and SVG plot");
    scan_cmd->add_option("--input", o.input)->required();
    add_sigma_opts(scan_cmd, o);
    scan_cmd->add_option("--n-max", o.n_max, "level lines / root markers up to this n");
    scan_cmd->add_option("--out", o.out_dir, "output directory");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "find n-path solutions");
    solve_cmd->add_option("--input", o.input)->required();
    add_sigma_opts(solve_cmd, o);
    solve_cmd->add_option("--n", o.n, "solve for exactly this n");
    solve_cmd->add_option("--n-max", o.n_max, "search smallest n up to this bound");
    solve_cmd->add_option("--out", o.out_dir);

    // mesh
    auto* mesh_cmd = app.add_subcommand("mesh", "carve the solid and export STL");
    mesh_cmd->add_option("--input", o.input)->required();
    add_sigma_opts(mesh_cmd, o);
    mesh_cmd->add_option("--n", o.n, "periods of the target solution");
    mesh_cmd->add_option("--n-max", o.n_max);
    mesh_cmd->add_option("--sigma", o.sigma_override, "use this sigma directly (with --n)");
    mesh_cmd->add_option("--shell-ratio", o.shell_ratio, "r_shell / r")
        ->check(CLI::Range(1.0001, 100.0));
    mesh_cmd->add_option("--subdiv", o.subdiv, "shell subdivision level")->check(CLI::Range(1, 8));
    mesh_cmd->add_option("--max-cuts", o.max_cuts)->check(CLI::Range(2, 1000000));
    mesh_cmd->add_option("--cavity", o.cavity_ratio,
                         "add a core cavity of this radius ratio (0 < ratio <= 1)")
        ->check(CLI::Range(0.0, 1.0));
    mesh_cmd->add_flag("--no-verify", o.no_verify, "emit the STL even if verification fails");
    mesh_cmd->add_option("--out", o.out_dir);
    std::string export_trace_file;
    mesh_cmd->add_option("--export-trace", export_trace_file, "also write the contact trace CSV");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "verification report for a solution");
    verify_cmd->add_option("--input", o.input)->required();
    add_sigma_opts(verify_cmd, o);
    verify_cmd->add_option("--n", o.n);
    verify_cmd->add_option("--n-max", o.n_max);
    verify_cmd->add_option("--sigma", o.sigma_override);
    verify_cmd->add_option("--periods", o.periods, "replay this many periods");
    verify_cmd->add_option("--shell-ratio", o.shell_ratio);
    verify_cmd->add_option("--subdiv", o.subdiv)->check(CLI::Range(1, 8));
    verify_cmd->add_option("--out", o.out_dir);
    std::string export_loop_file;
    verify_cmd->add_option("--export-loop", export_loop_file,
                           "write the doubled closed trace as CSV");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate a path CSV");
    gen_cmd->require_subcommand(1);
    double gx = 1.0, gy = 1.0, gbeta = 0.785398163397448279, galpha = 2.356194490192345,
           gk = 0.70710678118654752, gscale = 0.6;
    std::uint64_t gseed = 1;
    int gmodes = 4, gsamples = 1024;
    std::string gout = "path.csv";
    std::string wedge_base;
    auto* gen_v = gen_cmd->add_subcommand("v", "V path");
    gen_v->add_option("--x", gx)->check(CLI::PositiveNumber);
    gen_v->add_option("--y", gy)->check(CLI::PositiveNumber);
    gen_v->add_option("--out", gout);
    auto* gen_wedge = gen_cmd->add_subcommand("wedge", "base path plus its reversed rotated copy");
    gen_wedge->add_option("--input", wedge_base, "base path CSV")->required();
    gen_wedge->add_option("--beta", gbeta, "wedge angle in (0, pi/2)");
    gen_wedge->add_option("--out", gout);
    auto* gen_zig = gen_cmd->add_subcommand("zigzag", "four-segment zigzag family");
    gen_zig->add_option("--k", gk, "length ratio");
    gen_zig->add_option("--alpha", galpha, "interior angle");
    gen_zig->add_option("--beta", gbeta, "family parameter");
    gen_zig->add_option("--out", gout);
    auto* gen_fourier = gen_cmd->add_subcommand("fourier", "random smooth curve");
    gen_fourier->add_option("--seed", gseed);
    gen_fourier->add_option("--modes", gmodes)->check(CLI::Range(1, 64));
    gen_fourier->add_option("--scale", gscale)->check(CLI::PositiveNumber);
    gen_fourier->add_option("--samples", gsamples)->check(CLI::Range(2, 1000000));
    gen_fourier->add_option("--out", gout);

    // probe-conjecture
    auto* probe = app.add_subcommand("probe-conjecture",
                                     "fraction of random curves admitting a 2-path solution");
    int seeds = 100;
    probe->add_option("--seeds", seeds)->check(CLI::Range(1, 100000));
    probe->add_option("--modes", gmodes)->check(CLI::Range(1, 64));
    probe->add_option("--scale", gscale)->check(CLI::PositiveNumber);
    probe->add_option("--samples", gsamples)->check(CLI::Range(2, 1000000));
    add_sigma_opts(probe, o);
    probe->add_option("--out", o.out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        const fs::path out_dir(o.out_dir);

        if (*analyze) {
            const PlanarPath path = load_input(o.input);
            const TurningProfile tp = turning_profile(path);
            json j{{"name", path.name()},
                   {"vertex_count", path.vertices().size()},
                   {"length", path.total_length()},
                   {"total_turning", tp.total_turning},
                   {"index", tp.index()},
                   {"index_mod1", tp.index_mod1()}};
            std::cout << j.dump(2) << "\n";
            return kExitOk;
        }

        if (*scan_cmd) {
            const PlanarPath path = load_input(o.input);
            const ScanTable table = scan(path, o.sigma_min, o.sigma_max, o.grid);
            std::vector<Solution> roots;
            for (int n = 1; n <= o.n_max; ++n)
                for (const Solution& s : solve_n(path, n, o.sigma_min, o.sigma_max, o.grid))
                    roots.push_back(s);
            write_file(out_dir / "scan.csv", scan_to_csv(table));
            write_file(out_dir / "scan.svg", scan_svg(table, roots, o.n_max));
            std::cout << "wrote " << (out_dir / "scan.csv").string() << " and "
                      << (out_dir / "scan.svg").string() << "\n";
            return kExitOk;
        }

        if (*solve_cmd) {
            const PlanarPath path = load_input(o.input);
            json out = json::array();
            if (o.n > 0) {
                for (const Solution& s : solve_n(path, o.n, o.sigma_min, o.sigma_max, o.grid))
                    out.push_back(solution_to_json(s));
            } else {
                const MinimalResult res =
                    minimal_n(path, o.sigma_min, o.sigma_max, o.grid, o.n_max);
                for (const Solution& s : res.solutions) out.push_back(solution_to_json(s));
                json j{{"solutions", out},
                       {"minimal_n", res.n ? json(*res.n) : json(nullptr)},
                       {"phi_constant", res.phi_constant},
                       {"phi_min", res.phi_min},
                       {"phi_max", res.phi_max},
                       {"note", "empirical classification, bounded by the sigma range, the "
                                "grid, and n_max"}};
                std::cout << j.dump(2) << "\n";
                return kExitOk;
            }
            std::cout << json{{"solutions", out}}.dump(2) << "\n";
            return kExitOk;
        }

        if (*mesh_cmd) {
            const PlanarPath path = load_input(o.input);
            int n_used = 0;
            const auto sols = pick_solutions(path, o, &n_used);
            if (sols.empty()) {
                std::cerr << "no solution in range\n";
                return kExitNoSolution;
            }
            const Solution sol = sols.front();
            const SphereTrace trace = sphere_trace(repeat_path(path, sol.n), sol.r);
            CarveOptions copt;
            copt.max_cuts = o.max_cuts;
            TrajectoidSolid solid = carve(trace, o.shell_ratio * sol.r, o.subdiv, copt);
            const VerificationReport rep = verify_solution(path, sol, &solid, &trace);
            if (!rep.all_pass() && !o.no_verify) {
                std::cerr << "verification failed; rerun with --no-verify to force output\n"
                          << report_to_json(rep).dump(2) << "\n";
                return kExitVerifyFail;
            }
            if (o.cavity_ratio > 0.0) {
                CavityOptions cav;
                cav.r_ball = o.cavity_ratio * sol.r;
                solid = core_cavity(solid, cav);
            }
            write_file(out_dir / "trajectoid.stl", export_stl(solid));
            json sidecar{{"r", sol.r},
                         {"r_shell", o.shell_ratio * sol.r},
                         {"n", sol.n},
                         {"k", sol.k},
                         {"sigma", sol.sigma},
                         {"cut_count", solid.cuts.size()},
                         {"triangles", solid.mesh.faces.size()},
                         {"verification", report_to_json(rep)}};
            if (o.no_verify && !rep.all_pass()) sidecar["warning"] = "verification failed";
            write_file(out_dir / "trajectoid.json", sidecar.dump(2) + "\n");
            if (!export_trace_file.empty())
                write_file(out_dir / export_trace_file, trace_to_csv(trace));
            std::cout << "wrote " << (out_dir / "trajectoid.stl").string() << "\n";
            return kExitOk;
        }

        if (*verify_cmd) {
            const PlanarPath path = load_input(o.input);
            int n_used = 0;
            const auto sols = pick_solutions(path, o, &n_used);
            if (sols.empty()) {
                std::cerr << "no solution in range\n";
                return kExitNoSolution;
            }
            const Solution sol = sols.front();
            const VerificationReport rep = verify_solution(path, sol);
            json j = report_to_json(rep);
            j["solution"] = solution_to_json(sol);
            const int periods = o.periods > 0 ? o.periods : sol.n;
            const PlanarPath replayed = replay(path, sol, periods);
            write_file(out_dir / "replay.csv", path_to_csv(replayed));
            if (!export_loop_file.empty()) {
                const DoubledTrace doubled = double_trace(sphere_trace(path, sol.r));
                write_file(out_dir / export_loop_file, trace_to_csv(doubled.trace));
            }
            write_file(out_dir / "verify.json", j.dump(2) + "\n");
            std::cout << j.dump(2) << "\n";
            return rep.all_pass() ? kExitOk : kExitVerifyFail;
        }

        if (*gen_cmd) {
            PlanarPath path = PlanarPath::from_vertices({{0, 0}, {1, 0}});
            if (*gen_v) {
                path = gen_v_path(gx, gy);
            } else if (*gen_wedge) {
                path = gen_wedge_path(load_input(wedge_base), gbeta);
            } else if (*gen_zig) {
                if (zigzag_ratio_suspicious(gk))
                    std::cerr << "warning: k is (close to) rational; the base pair degenerates "
                                 "at radii where both segments complete full turns\n";
                path = gen_zigzag(gk, galpha, gbeta);
            } else if (*gen_fourier) {
                path = gen_fourier_random(gseed, gmodes, gscale, gsamples);
            }
            write_file(gout, path_to_csv(path));
            std::cout << "wrote " << gout << " (" << path.vertices().size()
                      << " vertices, L = " << g17(path.total_length()) << ")\n";
            return kExitOk;
        }

        if (*probe) {
            std::string csv = "seed,found,sigma,r\n";
            int found = 0;
            for (int s = 0; s < seeds; ++s) {
                const PlanarPath path = gen_fourier_random(std::uint64_t(s), gmodes, gscale,
                                                           gsamples);
                const auto sols = solve_n(path, 2, o.sigma_min, o.sigma_max, o.grid);
                if (!sols.empty()) {
                    ++found;
                    csv += std::to_string(s) + ",1," + g17(sols.front().sigma) + "," +
                           g17(sols.front().r) + "\n";
                } else {
                    csv += std::to_string(s) + ",0,,\n";
                }
            }
            const double fraction = double(found) / double(seeds);
            csv += "# fraction," + g17(fraction) + "\n";
            write_file(fs::path(o.out_dir) / "probe.csv", csv);
            std::cout << json{{"seeds", seeds}, {"found", found}, {"fraction", fraction}}.dump(2)
                      << "\n";
            return kExitOk;
        }
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
