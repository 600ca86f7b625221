#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "trajectoid/geom.hpp"

namespace trajectoid {

/// An open planar polyline, arc-length parameterized. At least two vertices,
/// consecutive vertices distinct. Immutable after construction.
class PlanarPath {
  public:
    static PlanarPath from_vertices(std::vector<Vec2> vertices, std::string name = "");

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::string& name() const { return name_; }

    std::size_t segment_count() const { return vertices_.size() - 1; }
    double segment_length(std::size_t i) const { return seg_length_[i]; }
    Vec2 segment_direction(std::size_t i) const { return seg_dir_[i]; }
    /// Cumulative arc length up to vertex i (0 at the first vertex).
    double arc_length_at(std::size_t i) const { return cum_length_[i]; }
    double total_length() const { return cum_length_.back(); }

    Vec2 start() const { return vertices_.front(); }
    Vec2 end() const { return vertices_.back(); }
    /// Displacement of one period (end - start).
    Vec2 period_vector() const { return end() - start(); }

  private:
    PlanarPath() = default;
    std::vector<Vec2> vertices_;
    std::vector<double> seg_length_;
    std::vector<Vec2> seg_dir_;
    std::vector<double> cum_length_;
    std::string name_;
};

/// Signed turning data of a path. Exterior angles are positive for
/// counterclockwise (left) turns; this convention fixes the sign of the
/// index and of enclosed areas everywhere downstream.
struct TurningProfile {
    std::vector<double> exterior_angles;  ///< one per interior vertex, each in (-pi, pi)
    double total_turning = 0.0;           ///< sum of exterior angles

    double index() const { return total_turning / kTwoPi; }
    double index_mod1() const { return positive_fmod(index(), 1.0); }
};

/// Parse a two-column (x,y) CSV. Comma separator, decimal point only, an
/// optional single header row detected by a non-numeric first line.
/// Consecutive duplicate points are collapsed. Throws ParseError with the
/// offending line number, or Error if fewer than two distinct points remain.
PlanarPath load_path_csv(std::string_view text, std::string name = "");

/// Split segments evenly so that every segment length is <= max_seg.
/// Original vertices are preserved exactly.
PlanarPath resample(const PlanarPath& path, double max_seg);

/// Exterior turning angles at interior vertices. Throws on a +-pi turn
/// (cusp / exact back-tracking), which is rejected as degenerate.
TurningProfile turning_profile(const PlanarPath& path);

/// The V path (-x, y), (0, 0), (x, y); requires x > 0 and y > 0.
PlanarPath gen_v_path(double x, double y);

/// Wedge family: w followed by the reversed copy of w rotated by beta about
/// w's endpoint. Rolling the second piece undoes the first in a frame turned
/// by beta, so the net rotation angle never exceeds 2*beta for any ball
/// radius. Requires 0 < beta < pi/2.
PlanarPath gen_wedge_path(const PlanarPath& w, double beta);

/// Four-segment zigzag: the wedge construction applied to a two-segment base
/// (lengths 1 and k, interior angle alpha). Requires k > 0 and
/// alpha, beta in (0, pi).
PlanarPath gen_zigzag(double k, double alpha, double beta);

/// True when k is (close to) a small-denominator rational, in which case the
/// two-segment base degenerates for radii where both segments complete full
/// revolutions simultaneously.
bool zigzag_ratio_suspicious(double k);

/// Smooth-looking random open curve sampled to a polyline: a unit drift plus
/// a random trigonometric polynomial with 1/k^2 coefficient decay. The
/// derivative is periodic, so start and end tangents coincide and the total
/// turning is a multiple of 2*pi. Deterministic for a fixed seed.
PlanarPath gen_fourier_random(std::uint64_t seed, int modes, double scale, int samples = 1024);

/// Concatenation of `periods` translated copies of the path.
PlanarPath repeat_path(const PlanarPath& path, int periods);

}  // namespace trajectoid
