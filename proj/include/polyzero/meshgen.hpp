#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyzero/errors.hpp"
#include "polyzero/geometry.hpp"
#include "polyzero/hull.hpp"
#include "polyzero/mesh.hpp"
#include "polyzero/rng.hpp"

namespace polyzero {

enum class Distribution { uniform, pole_weighted };

inline const char* distribution_name(Distribution d) {
    return d == Distribution::uniform ? "uniform" : "pole-weighted";
}

struct SamplerConfig {
    int n_points = 4;
    Distribution distribution = Distribution::uniform;
    std::uint64_t seed = 1;
};

struct RescaleConfig {
    double lo = 1.0;
    double hi = 4.0;
    std::uint64_t seed = 1;
};

/// Random seeds on the unit 2-sphere; all points exactly unit norm.
inline std::vector<Vec3> sample_sphere(const SamplerConfig& config) {
    if (config.n_points < 4) throw InvalidParameters("need at least 4 sample points");
    std::mt19937_64 rng(config.seed);
    std::vector<Vec3> pts;
    pts.reserve(config.n_points);
    for (int i = 0; i < config.n_points; ++i) {
        const Vec3 p = config.distribution == Distribution::uniform
                           ? uniform_sphere_point(rng)
                           : pole_weighted_sphere_point(rng);
        pts.push_back(normalized(p));
    }
    return pts;
}

/// Spherical Delaunay triangulation: for points on a sphere it coincides with
/// the 3d convex hull, which is what gets built. All faces are triangles and
/// the mesh comes out outward-oriented.
inline EmbeddedMesh delaunay_sphere(const std::vector<Vec3>& points,
                                    std::uint64_t jitter_seed = 0) {
    if (points.size() < 4) throw DegenerateInput("need at least 4 points");
    EmbeddedMesh mesh = convex_hull(points, jitter_seed);
    mesh.genus_hint = 0;
    try {
        check_mesh(mesh);
    } catch (const Error& e) {
        throw DegenerateInput(std::string("hull is not a closed triangulated sphere: ") +
                              e.what());
    }
    return mesh;
}

/// Multiplies each vertex by an independent random factor from the configured
/// range. Face combinatorics and orientation are untouched, so the outward
/// orientation fixed on the convex input is inherited.
inline EmbeddedMesh radial_rescale(const EmbeddedMesh& mesh, const RescaleConfig& config) {
    if (!(config.lo > 0.0 && config.lo <= config.hi))
        throw InvalidParameters("rescale range must satisfy 0 < lo <= hi");
    std::mt19937_64 rng(config.seed);
    EmbeddedMesh out = mesh;
    for (auto& v : out.vertices) v *= uniform_range(rng, config.lo, config.hi);
    return out;
}

/// Outcome of the closed-polyhedron validity check. Star-shapedness about the
/// origin stands in for "the rescaling did not break the closed polyhedron";
/// it is only required for genus-0 meshes.
struct ValidationReport {
    bool manifold = false;
    bool oriented = false;
    bool euler_ok = false;
    bool star_shaped = false;
    std::vector<int> degenerate_faces;
    bool has_zero_edge = false;
    bool accepted = false;
    std::string reason;
};

inline ValidationReport validate_closed(const EmbeddedMesh& mesh) {
    ValidationReport rep;
    auto fail = [&](const std::string& why) {
        if (rep.reason.empty()) rep.reason = why;
    };

    std::vector<MeshEdge> edges;
    try {
        edges = collect_edges(mesh);
        rep.manifold = true;
        rep.oriented = true;
    } catch (const Error& e) {
        fail(e.what());
        return rep;
    }

    const int chi = mesh.vertex_count() - static_cast<int>(edges.size()) + mesh.face_count();
    rep.euler_ok = chi == 2 - 2 * mesh.genus_hint;
    if (!rep.euler_ok) fail("Euler characteristic mismatch");

    for (const auto& e : edges)
        if (!(norm2(mesh.vertices[e.a] - mesh.vertices[e.b]) > 0.0)) {
            rep.has_zero_edge = true;
            fail("zero-length edge");
        }

    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& cycle = mesh.faces[f];
        double lmax = 0.0;
        for (std::size_t i = 0; i < cycle.size(); ++i)
            lmax = std::max(lmax, norm(mesh.vertices[cycle[i]] -
                                       mesh.vertices[cycle[(i + 1) % cycle.size()]]));
        if (norm(newell_normal(mesh, f)) < 1e-12 * lmax * lmax) {
            rep.degenerate_faces.push_back(f);
            fail("degenerate face " + std::to_string(f));
        }
    }

    // Every face plane must separate the origin from infinity along the
    // centroid ray: dot(outward normal, centroid) > 0.
    rep.star_shaped = true;
    for (int f = 0; f < mesh.face_count(); ++f) {
        const Vec3 n = newell_normal(mesh, f);
        const Vec3 c = face_centroid(mesh, f);
        if (!(dot(n, c) > 1e-12 * norm(n) * norm(c))) {
            rep.star_shaped = false;
            if (mesh.genus_hint == 0) fail("not star-shaped about the origin");
            break;
        }
    }

    rep.accepted = rep.manifold && rep.oriented && rep.euler_ok && !rep.has_zero_edge &&
                   rep.degenerate_faces.empty() && (mesh.genus_hint != 0 || rep.star_shaped);
    return rep;
}

}  // namespace polyzero
