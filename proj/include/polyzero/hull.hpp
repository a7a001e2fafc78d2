#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "polyzero/errors.hpp"
#include "polyzero/mesh.hpp"
#include "polyzero/rng.hpp"
#include "polyzero/vec3.hpp"

namespace polyzero {

namespace detail {

struct HullFace {
    int v[3];
    bool alive = true;
};

/// (p - a) . ((b - a) ^ (c - a)); positive when p is on the outward side.
inline double face_side(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p) {
    return triple(p - a, b - a, c - a);
}

inline bool try_build_hull(const std::vector<Vec3>& pts, double tol,
                           std::vector<HullFace>& out_faces) {
    const int n = static_cast<int>(pts.size());

    // Initial tetrahedron: spread-out quadruple.
    int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
    double best = -1.0;
    for (int i = 1; i < n; ++i) {
        const double d = norm2(pts[i] - pts[i0]);
        if (d > best) {
            best = d;
            i1 = i;
        }
    }
    best = -1.0;
    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1) continue;
        const double d = norm2(cross(pts[i1] - pts[i0], pts[i] - pts[i0]));
        if (d > best) {
            best = d;
            i2 = i;
        }
    }
    if (i2 < 0) return false;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || i == i2) continue;
        const double d = std::abs(face_side(pts[i0], pts[i1], pts[i2], pts[i]));
        if (d > best) {
            best = d;
            i3 = i;
        }
    }
    if (i3 < 0 || best <= tol) return false;  // coplanar input

    const Vec3 inner = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) * 0.25;
    auto add_face = [&](int a, int b, int c) {
        if (face_side(pts[a], pts[b], pts[c], inner) > 0.0) std::swap(b, c);
        out_faces.push_back({{a, b, c}, true});
    };
    out_faces.clear();
    add_face(i0, i1, i2);
    add_face(i0, i1, i3);
    add_face(i0, i2, i3);
    add_face(i1, i2, i3);

    for (int p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        std::vector<int> visible;
        bool ambiguous = false;
        for (std::size_t f = 0; f < out_faces.size(); ++f) {
            if (!out_faces[f].alive) continue;
            const auto& fc = out_faces[f];
            const double d = face_side(pts[fc.v[0]], pts[fc.v[1]], pts[fc.v[2]], pts[p]);
            if (std::abs(d) <= tol)
                ambiguous = true;
            else if (d > 0.0)
                visible.push_back(static_cast<int>(f));
        }
        if (ambiguous) return false;  // resolved by the caller with jitter
        if (visible.empty()) continue;  // interior point

        // Horizon: directed edges of visible faces whose reverse is not in a
        // visible face.
        std::set<std::pair<int, int>> directed;
        for (int f : visible)
            for (int e = 0; e < 3; ++e)
                directed.insert({out_faces[f].v[e], out_faces[f].v[(e + 1) % 3]});
        for (int f : visible) out_faces[f].alive = false;
        for (const auto& [u, v] : directed) {
            if (directed.count({v, u})) continue;
            out_faces.push_back({{u, v, p}, true});
        }
    }
    return true;
}

}  // namespace detail

/// Convex hull of a 3d point set as an outward-oriented triangle mesh over
/// the input indices. Incremental insertion with visible-face conflict sets;
/// near-coplanar ties are resolved by a deterministic 1e-12 relative jitter
/// (combinatorics from the jittered points, coordinates from the originals).
inline EmbeddedMesh convex_hull(const std::vector<Vec3>& points, std::uint64_t jitter_seed = 0) {
    const int n = static_cast<int>(points.size());
    if (n < 4) throw DegenerateInput("convex hull needs at least 4 points");

    Vec3 lo = points[0], hi = points[0];
    for (const auto& p : points) {
        if (!p.finite()) throw DegenerateInput("non-finite input point");
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const double diam = norm(hi - lo);
    if (diam <= 0.0) throw DegenerateInput("all points coincide");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (norm(points[i] - points[j]) < 1e-9 * diam)
                throw DegenerateInput("duplicate points");

    const double tol = 1e-12 * diam * diam * diam;
    std::vector<detail::HullFace> faces;
    bool ok = detail::try_build_hull(points, tol, faces);
    for (int round = 1; !ok && round <= 4; ++round) {
        std::mt19937_64 rng(derive_seed(jitter_seed, round));
        std::vector<Vec3> jittered = points;
        for (auto& p : jittered) p += uniform_sphere_point(rng) * (1e-12 * diam * round);
        ok = detail::try_build_hull(jittered, tol, faces);
    }
    if (!ok) throw DegenerateInput("points are coplanar or degenerate after jitter");

    EmbeddedMesh mesh;
    mesh.vertices = points;
    for (const auto& f : faces)
        if (f.alive) mesh.faces.push_back({f.v[0], f.v[1], f.v[2]});
    return mesh;
}

}  // namespace polyzero
