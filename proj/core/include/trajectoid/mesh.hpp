#pragma once

#include <array>
#include <string>
#include <vector>

#include "trajectoid/geom.hpp"
#include "trajectoid/rolling.hpp"

namespace trajectoid {

/// Indexed triangle mesh, outward-oriented faces.
struct Mesh {
    std::vector<Vec3> positions;
    std::vector<std::array<int, 3>> faces;
};

double mesh_volume(const Mesh& mesh);
double mesh_area(const Mesh& mesh);

/// Combinatorial closedness: every undirected edge shared by exactly two
/// faces with opposite directions, Euler characteristic 2 per shell.
bool is_watertight_manifold(const Mesh& mesh, std::string* why = nullptr);

/// Geodesic sphere by icosahedral subdivision; level s has 20 * 4^s faces.
/// Requires 1 <= subdivisions <= 8.
Mesh build_shell(double r_shell, int subdivisions);

/// Half space u . x <= offset, tangent to the inner ball when offset = r.
struct CutPlane {
    Vec3 normal;       ///< unit, outward
    double offset = 0.0;
};

/// Convex solid: shell ball intersected with all cut half-spaces.
/// face_cut_id maps each triangle to the cut that produced it (-1 original
/// shell, -2 cavity sphere, -3 bore wall, -4 bore entry annulus).
struct TrajectoidSolid {
    Mesh mesh;
    std::vector<CutPlane> cuts;
    std::vector<int> face_cut_id;
    double radius_inner = 1.0;
    double radius_shell = 1.4;
};

struct CarveOptions {
    double min_normal_sep = 1e-3;  ///< decimation: consecutive cut normals differ at least this
    int max_cuts = 2000;
};

/// Decimated tangent cuts along the trace: normals are trace points, offsets
/// the inner radius; near-coincident planes are deduplicated.
std::vector<CutPlane> decimate_cuts(const SphereTrace& trace, const CarveOptions& opt = {});

/// Shave the shell ball by every cut half-space in sequence. Clipping is
/// robust here because the result is an intersection of convex sets; each
/// cut introduces exact intersection vertices shared across neighboring
/// faces, so the mesh stays watertight by construction.
TrajectoidSolid carve(const SphereTrace& trace, double r_shell, int subdivisions,
                      const CarveOptions& opt = {});

/// Same, with an explicit cut list (used for ablation experiments).
TrajectoidSolid carve_with_cuts(const std::vector<CutPlane>& cuts, double r_inner, double r_shell,
                                int subdivisions);

/// Height of the center above the plane when resting with `direction`
/// pointing down. The solid is convex, so the vertex maximum is exact.
double support_height(const TrajectoidSolid& solid, const Vec3& direction);

/// Smallest supporting-plane offset over all faces; the inner ball is
/// contained iff this is >= r (up to tolerance).
double min_face_plane_offset(const TrajectoidSolid& solid);

/// Binary STL: 80-byte header, uint32 triangle count, then per triangle a
/// float32 normal, three float32 vertices and a zero uint16 attribute.
/// Little-endian regardless of host order.
std::string export_stl(const TrajectoidSolid& solid);

/// Wavefront OBJ text, for quick inspection.
std::string export_obj(const TrajectoidSolid& solid);

struct CavityOptions {
    double r_ball = 0.0;       ///< cavity radius; 0 means the inner radius
    double bore_radius = 0.0;  ///< 0 picks 0.35 * r_ball, capped by the entry facet size
    Vec3 axis{0.0, 0.0, 0.0};  ///< bore direction; 0 picks the least-shaved direction
    int segments = 64;         ///< bore prism sides and cavity rings per row
    int rings = 48;            ///< cavity latitude rows
};

/// Add an inward-facing spherical cavity plus an access bore: a flat entry
/// facet is cut at 1.02 * r along the axis, an N-gon prism runs from that
/// facet to the cavity sphere, and all rings share vertices so the result
/// stays manifold. Throws when the axis points at a region too thin for the
/// bore.
TrajectoidSolid core_cavity(const TrajectoidSolid& solid, const CavityOptions& opt = {});

}  // namespace trajectoid
