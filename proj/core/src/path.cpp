#include "trajectoid/path.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "trajectoid/errors.hpp"

namespace trajectoid {

PlanarPath PlanarPath::from_vertices(std::vector<Vec2> vertices, std::string name) {
    if (vertices.size() < 2) throw Error("path needs at least 2 vertices");
    PlanarPath p;
    p.vertices_ = std::move(vertices);
    p.name_ = std::move(name);
    const std::size_t n = p.vertices_.size();
    p.seg_length_.resize(n - 1);
    p.seg_dir_.resize(n - 1);
    p.cum_length_.resize(n);
    p.cum_length_[0] = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Vec2 d = p.vertices_[i + 1] - p.vertices_[i];
        const double len = norm(d);
        if (!(len > 0.0)) throw Error("zero-length segment at vertex " + std::to_string(i));
        p.seg_length_[i] = len;
        p.seg_dir_[i] = {d.x / len, d.y / len};
        p.cum_length_[i + 1] = p.cum_length_[i] + len;
    }
    return p;
}

namespace {

bool parse_double(std::string_view field, double& out) {
    // trim spaces and an optional trailing \r
    std::size_t b = field.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return false;
    std::size_t e = field.find_last_not_of(" \t\r");
    field = field.substr(b, e - b + 1);
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_row(std::string_view line, Vec2& out) {
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) return false;
    if (line.find(',', comma + 1) != std::string_view::npos) return false;
    return parse_double(line.substr(0, comma), out.x) &&
           parse_double(line.substr(comma + 1), out.y);
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

PlanarPath load_path_csv(std::string_view text, std::string name) {
    std::vector<Vec2> pts;
    int line_no = 0;
    bool header_allowed = true;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (is_blank(line)) continue;
        Vec2 v;
        if (!parse_row(line, v)) {
            if (header_allowed) {
                header_allowed = false;  // a single non-numeric first row is a header
                continue;
            }
            throw ParseError("malformed CSV row", line_no);
        }
        header_allowed = false;
        if (!pts.empty() && pts.back().x == v.x && pts.back().y == v.y) continue;
        pts.push_back(v);
    }
    if (pts.size() < 2) throw Error("CSV contains fewer than 2 distinct points");
    return PlanarPath::from_vertices(std::move(pts), std::move(name));
}

PlanarPath resample(const PlanarPath& path, double max_seg) {
    if (!(max_seg > 0.0)) throw Error("max_seg must be positive");
    std::vector<Vec2> out;
    out.reserve(path.vertices().size());
    out.push_back(path.vertices().front());
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        const Vec2 a = path.vertices()[i];
        const Vec2 b = path.vertices()[i + 1];
        const double len = path.segment_length(i);
        // tolerate ~1e-9 relative overshoot so an exact divisor is not split
        const int parts = std::max(1, (int)std::ceil(len / max_seg - 1e-9));
        for (int j = 1; j < parts; ++j) {
            const double t = double(j) / double(parts);
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
        out.push_back(b);
    }
    return PlanarPath::from_vertices(std::move(out), path.name());
}

TurningProfile turning_profile(const PlanarPath& path) {
    TurningProfile tp;
    const std::size_t segs = path.segment_count();
    tp.exterior_angles.reserve(segs > 0 ? segs - 1 : 0);
    for (std::size_t i = 0; i + 1 < segs; ++i) {
        const Vec2 d0 = path.segment_direction(i);
        const Vec2 d1 = path.segment_direction(i + 1);
        const double ang = std::atan2(cross(d0, d1), dot(d0, d1));
        if (kPi - std::fabs(ang) < 1e-12)
            throw Error("cusp (back-tracking turn of +-pi) at vertex " + std::to_string(i + 1));
        tp.exterior_angles.push_back(ang);
        tp.total_turning += ang;
    }
    return tp;
}

PlanarPath gen_v_path(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw Error("V path requires x > 0 and y > 0");
    return PlanarPath::from_vertices({{-x, y}, {0.0, 0.0}, {x, y}}, "v-path");
}

namespace {

// w followed by the reversed copy of w rotated by beta about w's endpoint.
PlanarPath wedge_construct(const PlanarPath& w, double beta, std::string name) {
    const auto& v = w.vertices();
    const Vec2 pivot = v.back();
    std::vector<Vec2> out(v);
    out.reserve(2 * v.size() - 1);
    for (std::size_t i = v.size() - 1; i-- > 0;) out.push_back(pivot + rotated(v[i] - pivot, beta));
    return PlanarPath::from_vertices(std::move(out), std::move(name));
}

}  // namespace

PlanarPath gen_wedge_path(const PlanarPath& w, double beta) {
    if (!(beta > 0.0) || !(beta < kPi / 2.0)) throw Error("wedge angle must be in (0, pi/2)");
    return wedge_construct(w, beta, w.name().empty() ? "wedge" : "wedge(" + w.name() + ")");
}

PlanarPath gen_zigzag(double k, double alpha, double beta) {
    if (!(k > 0.0)) throw Error("zigzag ratio k must be positive");
    if (!(alpha > 0.0) || !(alpha < kPi)) throw Error("zigzag alpha must be in (0, pi)");
    if (!(beta > 0.0) || !(beta < kPi)) throw Error("zigzag beta must be in (0, pi)");
    const double turn = kPi - alpha;  // interior angle alpha <=> exterior turn pi - alpha
    const Vec2 v1{1.0, 0.0};
    const Vec2 v2 = v1 + k * Vec2{std::cos(turn), std::sin(turn)};
    const PlanarPath base = PlanarPath::from_vertices({{0.0, 0.0}, v1, v2});
    return wedge_construct(base, beta, "zigzag");
}

bool zigzag_ratio_suspicious(double k) {
    for (int q = 1; q <= 64; ++q) {
        const double p = std::round(k * q);
        if (p > 0 && std::fabs(k - p / q) < 1e-12) return true;
    }
    return false;
}

PlanarPath gen_fourier_random(std::uint64_t seed, int modes, double scale, int samples) {
    if (modes < 1) throw Error("modes must be >= 1");
    if (samples < 2) throw Error("samples must be >= 2");
    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng] {
        return (rng() >> 11) * 0x1.0p-53;  // 53-bit mantissa in [0, 1)
    };
    // Box-Muller keeps the stream identical across standard libraries.
    auto gauss = [&] {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    };
    std::vector<Vec2> a(modes), b(modes);
    for (int m = 0; m < modes; ++m) {
        const double decay = scale / double((m + 1) * (m + 1));
        a[m] = {gauss() * decay, gauss() * decay};
        b[m] = {gauss() * decay, gauss() * decay};
    }
    std::vector<Vec2> raw;
    raw.reserve(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        const double t = double(i) / double(samples);
        Vec2 p{t, 0.0};
        for (int m = 0; m < modes; ++m) {
            const double ph = kTwoPi * (m + 1) * t;
            p = p + a[m] * std::sin(ph) + b[m] * (std::cos(ph) - 1.0);
        }
        raw.push_back(p);
    }
    // Seam mid-segment: the first and last chord share one direction vector,
    // so repeated copies join without a corner and the total turning is an
    // exact multiple of 2*pi.
    const Vec2 half = 0.5 * (raw[1] - raw[0]);
    std::vector<Vec2> pts;
    pts.reserve(samples + 2);
    pts.push_back(raw[0] + half);
    for (int i = 1; i <= samples; ++i) pts.push_back(raw[i]);
    pts.push_back(raw[samples] + half);
    return PlanarPath::from_vertices(std::move(pts), "fourier-" + std::to_string(seed));
}

PlanarPath repeat_path(const PlanarPath& path, int periods) {
    if (periods < 1) throw Error("periods must be >= 1");
    const Vec2 shift = path.period_vector();
    std::vector<Vec2> out(path.vertices());
    out.reserve(path.vertices().size() * periods);
    for (int p = 1; p < periods; ++p) {
        const Vec2 offset = double(p) * shift;
        // the first vertex of each copy coincides with the previous end
        for (std::size_t i = 1; i < path.vertices().size(); ++i)
            out.push_back(path.vertices()[i] + offset);
    }
    return PlanarPath::from_vertices(std::move(out), path.name());
}

}  // namespace trajectoid
