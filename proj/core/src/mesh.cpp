#include "trajectoid/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "trajectoid/errors.hpp"

namespace trajectoid {

double mesh_volume(const Mesh& mesh) {
    double v = 0.0;
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.positions[f[0]];
        const Vec3& b = mesh.positions[f[1]];
        const Vec3& c = mesh.positions[f[2]];
        v += dot(a, cross(b, c));
    }
    return v / 6.0;
}

double mesh_area(const Mesh& mesh) {
    double s = 0.0;
    for (const auto& f : mesh.faces) {
        const Vec3& a = mesh.positions[f[0]];
        const Vec3& b = mesh.positions[f[1]];
        const Vec3& c = mesh.positions[f[2]];
        s += 0.5 * norm(cross(b - a, c - a));
    }
    return s;
}

bool is_watertight_manifold(const Mesh& mesh, std::string* why) {
    std::map<std::pair<int, int>, std::pair<int, int>> edges;  // (min,max) -> (fwd, rev)
    for (const auto& f : mesh.faces) {
        for (int e = 0; e < 3; ++e) {
            const int i = f[e], j = f[(e + 1) % 3];
            if (i == j) {
                if (why) *why = "degenerate edge";
                return false;
            }
            auto& rec = edges[{std::min(i, j), std::max(i, j)}];
            (i < j ? rec.first : rec.second) += 1;
        }
    }
    for (const auto& [k, rec] : edges) {
        if (rec.first != 1 || rec.second != 1) {
            if (why)
                *why = "edge " + std::to_string(k.first) + "-" + std::to_string(k.second) +
                       " has " + std::to_string(rec.first + rec.second) + " incident faces";
            return false;
        }
    }
    std::vector<char> used(mesh.positions.size(), 0);
    for (const auto& f : mesh.faces) used[f[0]] = used[f[1]] = used[f[2]] = 1;
    const long V = std::count(used.begin(), used.end(), 1);
    const long E = long(edges.size());
    const long F = long(mesh.faces.size());
    if (V - E + F != 2) {
        if (why) *why = "Euler characteristic " + std::to_string(V - E + F);
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// polygon-soup representation used while clipping

namespace {

constexpr int kTagShell = -1;
constexpr int kTagCavity = -2;
constexpr int kTagBore = -3;
constexpr int kTagFacet = -4;

struct PolyMesh {
    std::vector<Vec3> pos;
    std::vector<std::vector<int>> polys;
    std::vector<int> tags;
};

enum Side : int { kIn = -1, kOn = 0, kOut = 1 };

// Clip to the half space u . x <= d. Kept faces that cross the plane close
// across it; their on-plane edges, reversed, chain into one convex cap
// polygon tagged cap_tag. Intersection vertices are cached per undirected
// edge so neighboring faces share them exactly.
void clip_halfspace(PolyMesh& m, const Vec3& u, double d, int cap_tag, double eps) {
    const std::size_t nv = m.pos.size();
    std::vector<double> dist(nv);
    std::vector<int8_t> side(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        dist[i] = dot(u, m.pos[i]) - d;
        side[i] = dist[i] > eps ? kOut : (dist[i] < -eps ? kIn : kOn);
    }

    std::map<std::pair<int, int>, int> cut_cache;
    auto cut_point = [&](int i, int j) {
        const auto key = std::minmax(i, j);
        auto it = cut_cache.find(key);
        if (it != cut_cache.end()) return it->second;
        const double da = dist[key.first], db = dist[key.second];
        const double t = da / (da - db);
        const Vec3 p = m.pos[key.first] + t * (m.pos[key.second] - m.pos[key.first]);
        const int idx = int(m.pos.size());
        m.pos.push_back(p);
        cut_cache.emplace(key, idx);
        return idx;
    };

    std::vector<std::vector<int>> out_polys;
    std::vector<int> out_tags;
    out_polys.reserve(m.polys.size() + 1);
    out_tags.reserve(m.tags.size() + 1);
    std::unordered_map<int, int> cap_next;  // entry vertex -> exit vertex
    bool touched = false;

    for (std::size_t p = 0; p < m.polys.size(); ++p) {
        const std::vector<int>& poly = m.polys[p];
        bool any_out = false, any_keep = false;
        for (int v : poly) {
            if (side[v] == kOut)
                any_out = true;
            else
                any_keep = true;
        }
        if (!any_out) {
            out_polys.push_back(poly);
            out_tags.push_back(m.tags[p]);
            continue;
        }
        touched = true;
        if (!any_keep) continue;  // fully shaved away

        std::vector<int> kept;
        kept.reserve(poly.size() + 2);
        int entry = -1, exit = -1;
        const std::size_t n = poly.size();
        for (std::size_t k = 0; k < n; ++k) {
            const int cur = poly[k];
            const int prv = poly[(k + n - 1) % n];
            if (side[cur] != kOut) {
                if (side[prv] == kOut) {
                    if (side[cur] == kOn) {
                        entry = cur;
                    } else {
                        entry = cut_point(prv, cur);
                        kept.push_back(entry);
                    }
                }
                kept.push_back(cur);
            } else {
                if (side[prv] == kIn) {
                    exit = cut_point(prv, cur);
                    kept.push_back(exit);
                } else if (side[prv] == kOn) {
                    exit = prv;
                }
            }
        }
        if (kept.size() >= 3) {
            out_polys.push_back(std::move(kept));
            out_tags.push_back(m.tags[p]);
        }
        if (entry >= 0 && exit >= 0 && entry != exit) cap_next[entry] = exit;
    }

    if (!touched) return;
    if (out_polys.empty()) throw Error("cut removed the entire mesh");

    if (!cap_next.empty()) {
        int start = cap_next.begin()->first;
        for (const auto& [k, v] : cap_next) start = std::min(start, k);
        std::vector<int> cap;
        cap.reserve(cap_next.size());
        int v = start;
        do {
            cap.push_back(v);
            const auto it = cap_next.find(v);
            if (it == cap_next.end())
                throw Error("non-manifold cut: open cross-section chain (tolerance failure)");
            const int next = it->second;
            cap_next.erase(it);
            v = next;
        } while (v != start);
        if (!cap_next.empty())
            throw Error("non-manifold cut: multiple cross-section loops (tolerance failure)");
        if (cap.size() >= 3) {
            out_polys.push_back(std::move(cap));
            out_tags.push_back(cap_tag);
        }
    }

    m.polys = std::move(out_polys);
    m.tags = std::move(out_tags);
}

// Fan-triangulate (every stored polygon is convex) and drop stale vertices.
void triangulate_compact(const PolyMesh& pm, Mesh& mesh, std::vector<int>& face_tags) {
    std::vector<int> remap(pm.pos.size(), -1);
    mesh.positions.clear();
    mesh.faces.clear();
    face_tags.clear();
    auto mapped = [&](int i) {
        if (remap[i] < 0) {
            remap[i] = int(mesh.positions.size());
            mesh.positions.push_back(pm.pos[i]);
        }
        return remap[i];
    };
    for (std::size_t p = 0; p < pm.polys.size(); ++p) {
        const auto& poly = pm.polys[p];
        for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
            mesh.faces.push_back({mapped(poly[0]), mapped(poly[k]), mapped(poly[k + 1])});
            face_tags.push_back(pm.tags[p]);
        }
    }
}

PolyMesh to_polymesh(const TrajectoidSolid& solid) {
    PolyMesh pm;
    pm.pos = solid.mesh.positions;
    pm.polys.reserve(solid.mesh.faces.size());
    pm.tags.reserve(solid.mesh.faces.size());
    for (std::size_t i = 0; i < solid.mesh.faces.size(); ++i) {
        const auto& f = solid.mesh.faces[i];
        pm.polys.push_back({f[0], f[1], f[2]});
        pm.tags.push_back(solid.face_cut_id.empty() ? kTagShell : solid.face_cut_id[i]);
    }
    return pm;
}

}  // namespace

// ---------------------------------------------------------------------------

Mesh build_shell(double r_shell, int subdivisions) {
    if (!(r_shell > 0.0)) throw Error("shell radius must be positive");
    if (subdivisions < 1 || subdivisions > 8) throw Error("subdivisions must be in [1, 8]");

    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> pos = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                             {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                             {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const int idx = int(pos.size());
            pos.push_back(normalized(pos[a] + pos[b]));
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    Mesh mesh;
    mesh.positions.reserve(pos.size());
    for (const Vec3& p : pos) mesh.positions.push_back(r_shell * normalized(p));
    mesh.faces = std::move(faces);
    return mesh;
}

std::vector<CutPlane> decimate_cuts(const SphereTrace& trace, const CarveOptions& opt) {
    if (opt.max_cuts < 2) throw Error("max_cuts must be >= 2");
    double total_angle = 0.0;
    for (std::size_t i = 0; i + 1 < trace.points.size(); ++i)
        total_angle += angle_between(trace.points[i], trace.points[i + 1]);
    const double sep = std::max(opt.min_normal_sep, total_angle / double(opt.max_cuts));

    std::vector<CutPlane> cuts;
    Vec3 last = trace.points.front();
    cuts.push_back({last, trace.radius});
    for (std::size_t i = 1; i < trace.points.size(); ++i) {
        const Vec3& p = trace.points[i];
        if (angle_between(p, last) < sep) continue;
        bool dup = false;  // periods can revisit the same tangent plane
        for (const CutPlane& c : cuts) {
            if (dot(c.normal, p) >= 1.0 - 1e-10) {
                dup = true;
                break;
            }
        }
        if (!dup) cuts.push_back({p, trace.radius});
        last = p;
    }
    return cuts;
}

TrajectoidSolid carve_with_cuts(const std::vector<CutPlane>& cuts, double r_inner, double r_shell,
                                int subdivisions) {
    if (!(r_shell > r_inner)) throw Error("shell radius must exceed the inner radius");
    const Mesh shell = build_shell(r_shell, subdivisions);
    PolyMesh pm;
    pm.pos = shell.positions;
    pm.polys.reserve(shell.faces.size());
    pm.tags.assign(shell.faces.size(), kTagShell);
    for (const auto& f : shell.faces) pm.polys.push_back({f[0], f[1], f[2]});

    const double eps = 1e-9 * r_shell;
    for (std::size_t i = 0; i < cuts.size(); ++i)
        clip_halfspace(pm, cuts[i].normal, cuts[i].offset, int(i), eps);

    TrajectoidSolid solid;
    solid.cuts = cuts;
    solid.radius_inner = r_inner;
    solid.radius_shell = r_shell;
    triangulate_compact(pm, solid.mesh, solid.face_cut_id);
    std::string why;
    if (!is_watertight_manifold(solid.mesh, &why))
        throw Error("carve produced a non-manifold mesh: " + why);
    return solid;
}

TrajectoidSolid carve(const SphereTrace& trace, double r_shell, int subdivisions,
                      const CarveOptions& opt) {
    return carve_with_cuts(decimate_cuts(trace, opt), trace.radius, r_shell, subdivisions);
}

double support_height(const TrajectoidSolid& solid, const Vec3& direction) {
    double h = -std::numeric_limits<double>::infinity();
    for (const Vec3& p : solid.mesh.positions) h = std::max(h, dot(p, direction));
    return h;
}

double min_face_plane_offset(const TrajectoidSolid& solid) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& f : solid.mesh.faces) {
        const Vec3& a = solid.mesh.positions[f[0]];
        const Vec3 n = cross(solid.mesh.positions[f[1]] - a, solid.mesh.positions[f[2]] - a);
        const double len = norm(n);
        if (len < 1e-30) continue;
        m = std::min(m, dot(n, a) / len);
    }
    return m;
}

namespace {

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(char(v & 0xff));
    out.push_back(char(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

}  // namespace

std::string export_stl(const TrajectoidSolid& solid) {
    std::string out;
    out.reserve(84 + 50 * solid.mesh.faces.size());
    std::string header = "trajectoid binary STL";
    header.resize(80, '\0');
    out += header;
    put_u32(out, std::uint32_t(solid.mesh.faces.size()));
    for (const auto& f : solid.mesh.faces) {
        const Vec3& a = solid.mesh.positions[f[0]];
        const Vec3& b = solid.mesh.positions[f[1]];
        const Vec3& c = solid.mesh.positions[f[2]];
        Vec3 n = cross(b - a, c - a);
        const double len = norm(n);
        n = len > 1e-30 ? n / len : Vec3{0, 0, 0};
        for (const Vec3& v : {n, a, b, c}) {
            put_f32(out, float(v.x));
            put_f32(out, float(v.y));
            put_f32(out, float(v.z));
        }
        put_u16(out, 0);
    }
    return out;
}

std::string export_obj(const TrajectoidSolid& solid) {
    std::ostringstream os;
    os.precision(17);
    for (const Vec3& p : solid.mesh.positions) os << "v " << p.x << " " << p.y << " " << p.z << "\n";
    for (const auto& f : solid.mesh.faces)
        os << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// cavity and access bore

namespace {

// Triangulate the planar region between a convex outer loop and a convex
// inner hole, both star-shaped about the same axis point, by merging the two
// loops in angular order. Emits exactly outer.size() + inner.size()
// triangles whose boundary edges run forward along the outer loop and
// backward along the inner one.
void zip_annulus(PolyMesh& pm, const std::vector<int>& outer, const std::vector<int>& inner,
                 const Vec3& center, const Vec3& e1, const Vec3& e2, int tag) {
    auto angle_of = [&](int idx) {
        const Vec3 v = pm.pos[idx] - center;
        return std::atan2(dot(v, e2), dot(v, e1));
    };
    const std::size_t m = outer.size(), n = inner.size();
    std::vector<double> ao(m), ai(n);
    for (std::size_t i = 0; i < m; ++i) ao[i] = angle_of(outer[i]);
    for (std::size_t j = 0; j < n; ++j) ai[j] = angle_of(inner[j]);
    // unwrap both to ascending sequences
    for (std::size_t i = 1; i < m; ++i)
        while (ao[i] < ao[i - 1]) ao[i] += kTwoPi;
    for (std::size_t j = 1; j < n; ++j)
        while (ai[j] < ai[j - 1]) ai[j] += kTwoPi;
    // shift the inner start just below the outer start
    std::size_t j0 = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        double a = ai[j];
        while (a > ao[0]) a -= kTwoPi;
        if (a > best) {
            best = a;
            j0 = j;
        }
    }
    std::vector<int> in2(n);
    std::vector<double> ai2(n);
    for (std::size_t j = 0; j < n; ++j) in2[j] = inner[(j0 + j) % n];
    ai2[0] = best;
    for (std::size_t j = 1; j < n; ++j) {
        ai2[j] = angle_of(in2[j]);
        while (ai2[j] < ai2[j - 1]) ai2[j] += kTwoPi;
    }

    std::size_t i = 0, j = 0;
    while (i < m || j < n) {
        const double next_o = i < m ? (i + 1 < m ? ao[i + 1] : ao[0] + kTwoPi)
                                    : std::numeric_limits<double>::infinity();
        const double next_i = j < n ? (j + 1 < n ? ai2[j + 1] : ai2[0] + kTwoPi)
                                    : std::numeric_limits<double>::infinity();
        if (next_o <= next_i) {
            pm.polys.push_back({outer[i % m], outer[(i + 1) % m], in2[j % n]});
            ++i;
        } else {
            pm.polys.push_back({in2[(j + 1) % n], in2[j % n], outer[i % m]});
            ++j;
        }
        pm.tags.push_back(tag);
    }
}

}  // namespace

TrajectoidSolid core_cavity(const TrajectoidSolid& solid, const CavityOptions& opt) {
    const double r = solid.radius_inner;
    const double r_ball = opt.r_ball > 0.0 ? opt.r_ball : r;
    if (r_ball > r * (1.0 + 1e-12)) throw Error("cavity radius exceeds the inner ball radius");
    if (opt.segments < 8 || opt.rings < 4) throw Error("cavity needs >= 8 segments and >= 4 rings");

    Vec3 axis = opt.axis;
    if (norm(axis) < 1e-12) {
        // least-shaved direction: the farthest surviving vertex
        double best = -1.0;
        for (const Vec3& p : solid.mesh.positions) {
            const double d = norm(p);
            if (d > best) {
                best = d;
                axis = p;
            }
        }
    }
    axis = normalized(axis);

    const double c = 1.02 * r;  // entry facet offset
    if (support_height(solid, axis) < 1.05 * r)
        throw Error("bore axis points at a thin shell region");
    const Vec3 entry_center = c * axis;
    for (const CutPlane& cut : solid.cuts) {
        if (dot(cut.normal, entry_center) > cut.offset - 1e-9 * r)
            throw Error("bore axis points at a thin shell region (entry facet blocked by a cut)");
    }

    PolyMesh pm = to_polymesh(solid);
    clip_halfspace(pm, axis, c, kTagFacet, 1e-9 * solid.radius_shell);

    // locate and detach the entry facet polygon
    int facet_idx = -1;
    for (std::size_t p = 0; p < pm.polys.size(); ++p)
        if (pm.tags[p] == kTagFacet) facet_idx = int(p);
    if (facet_idx < 0) throw Error("entry facet cut missed the solid");
    std::vector<int> facet = pm.polys[facet_idx];
    pm.polys.erase(pm.polys.begin() + facet_idx);
    pm.tags.erase(pm.tags.begin() + facet_idx);

    double facet_inradius = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < facet.size(); ++i) {
        const Vec3 a = pm.pos[facet[i]] - entry_center;
        const Vec3 b = pm.pos[facet[(i + 1) % facet.size()]] - entry_center;
        const Vec3 ab = b - a;
        const double t = std::clamp(-dot(a, ab) / dot(ab, ab), 0.0, 1.0);
        facet_inradius = std::min(facet_inradius, norm(a + t * ab));
    }

    double bore_r = opt.bore_radius > 0.0 ? opt.bore_radius : 0.35 * r_ball;
    bore_r = std::min(bore_r, 0.6 * facet_inradius);
    if (bore_r < 0.02 * r_ball) throw Error("entry facet too small for a bore");
    if (bore_r >= r_ball) throw Error("bore radius must be smaller than the cavity radius");

    // frame perpendicular to the axis
    const Vec3 seed = std::fabs(axis.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    const Vec3 e1 = normalized(cross(seed, axis));
    const Vec3 e2 = cross(axis, e1);

    const int N = opt.segments;
    const double theta_b = std::asin(bore_r / r_ball);  // cavity polar angle of the bore rim
    const double z0 = r_ball * std::cos(theta_b);

    std::vector<int> top(N), bottom(N);
    for (int j = 0; j < N; ++j) {
        const double ph = kTwoPi * j / N;
        const Vec3 radial = std::cos(ph) * e1 + std::sin(ph) * e2;
        top[j] = int(pm.pos.size());
        pm.pos.push_back(entry_center + bore_r * radial);
        bottom[j] = int(pm.pos.size());
        pm.pos.push_back(bore_r * radial + z0 * axis);
    }
    // wall material must clear every remaining cut plane
    for (int j = 0; j < N; ++j) {
        for (const CutPlane& cut : solid.cuts) {
            if (dot(cut.normal, pm.pos[top[j]]) > cut.offset + 1e-9 * r)
                throw Error("bore axis points at a thin shell region (wall crosses a cut)");
        }
    }

    zip_annulus(pm, facet, top, entry_center, e1, e2, kTagFacet);

    for (int j = 0; j < N; ++j) {
        const int jn = (j + 1) % N;
        pm.polys.push_back({top[j], top[jn], bottom[jn], bottom[j]});
        pm.tags.push_back(kTagBore);
    }

    // inward-facing cavity sphere from the bore rim down to the far pole
    std::vector<int> prev_row = bottom;
    for (int i = 1; i < opt.rings; ++i) {
        const double th = theta_b + (kPi - theta_b) * double(i) / double(opt.rings);
        std::vector<int> row(N);
        for (int j = 0; j < N; ++j) {
            const double ph = kTwoPi * j / N;
            const Vec3 radial = std::cos(ph) * e1 + std::sin(ph) * e2;
            row[j] = int(pm.pos.size());
            pm.pos.push_back(r_ball * (std::sin(th) * radial + std::cos(th) * axis));
        }
        for (int j = 0; j < N; ++j) {
            const int jn = (j + 1) % N;
            pm.polys.push_back({prev_row[jn], row[jn], row[j], prev_row[j]});
            pm.tags.push_back(kTagCavity);
        }
        prev_row = row;
    }
    const int pole = int(pm.pos.size());
    pm.pos.push_back(-r_ball * axis);
    for (int j = 0; j < N; ++j) {
        const int jn = (j + 1) % N;
        pm.polys.push_back({prev_row[jn], pole, prev_row[j]});
        pm.tags.push_back(kTagCavity);
    }

    TrajectoidSolid out;
    out.cuts = solid.cuts;
    out.cuts.push_back({axis, c});
    out.radius_inner = solid.radius_inner;
    out.radius_shell = solid.radius_shell;
    triangulate_compact(pm, out.mesh, out.face_cut_id);
    std::string why;
    if (!is_watertight_manifold(out.mesh, &why))
        throw Error("cavity construction produced a non-manifold mesh: " + why);
    return out;
}

}  // namespace trajectoid
