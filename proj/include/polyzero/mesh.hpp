#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "polyzero/errors.hpp"
#include "polyzero/vec3.hpp"

namespace polyzero {

/// A closed polygonal surface embedded in R^3. Face cycles are stored in
/// outward order (anti-clockwise as seen from outside the enclosed solid).
struct EmbeddedMesh {
    std::vector<Vec3> vertices;
    std::vector<std::vector<int>> faces;
    int genus_hint = 0;
    /// Set for fixtures whose embedding is intentionally degenerate (the
    /// triangular pancake: two coincident faces, zero enclosed volume).
    bool degenerate_embedding = false;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }
};

/// One unordered mesh edge together with its two incident faces.
/// `face_ab` traverses the edge a->b in its cycle, `face_ba` traverses b->a.
struct MeshEdge {
    int a = -1;
    int b = -1;
    int face_ab = -1;
    int face_ba = -1;
};

namespace detail {

inline std::pair<int, int> edge_key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

struct EdgeUse {
    int face;
    bool forward;  // true when the face traverses key.first -> key.second
};

inline std::map<std::pair<int, int>, std::vector<EdgeUse>> collect_edge_uses(
    const EmbeddedMesh& mesh) {
    std::map<std::pair<int, int>, std::vector<EdgeUse>> uses;
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& cycle = mesh.faces[f];
        const int n = static_cast<int>(cycle.size());
        if (n < 3) throw InvalidMesh("face " + std::to_string(f) + " has fewer than 3 vertices");
        for (int i = 0; i < n; ++i) {
            const int u = cycle[i];
            const int v = cycle[(i + 1) % n];
            if (u < 0 || v < 0 || u >= mesh.vertex_count() || v >= mesh.vertex_count())
                throw InvalidMesh("face vertex index out of range");
            if (u == v) throw InvalidMesh("zero-length edge in face " + std::to_string(f));
            uses[edge_key(u, v)].push_back({f, u < v});
        }
    }
    return uses;
}

}  // namespace detail

/// Extracts the edge list. Throws NonManifoldEdge unless every edge is shared
/// by exactly two faces traversing it in opposite directions.
inline std::vector<MeshEdge> collect_edges(const EmbeddedMesh& mesh) {
    std::vector<MeshEdge> edges;
    for (const auto& [key, uses] : detail::collect_edge_uses(mesh)) {
        if (uses.size() != 2)
            throw NonManifoldEdge("edge (" + std::to_string(key.first) + "," +
                                  std::to_string(key.second) + ") has " +
                                  std::to_string(uses.size()) + " incident faces");
        if (uses[0].forward == uses[1].forward)
            throw NonManifoldEdge("edge (" + std::to_string(key.first) + "," +
                                  std::to_string(key.second) +
                                  ") traversed twice in the same direction");
        MeshEdge e;
        e.a = key.first;
        e.b = key.second;
        e.face_ab = uses[0].forward ? uses[0].face : uses[1].face;
        e.face_ba = uses[0].forward ? uses[1].face : uses[0].face;
        edges.push_back(e);
    }
    return edges;
}

inline int euler_characteristic(const EmbeddedMesh& mesh) {
    return mesh.vertex_count() - static_cast<int>(collect_edges(mesh).size()) + mesh.face_count();
}

/// Face normal by Newell's formula (translation invariant, exact area vector
/// for planar faces; half the cross product for triangles).
inline Vec3 newell_normal(const EmbeddedMesh& mesh, int face) {
    const auto& cycle = mesh.faces[face];
    Vec3 n{};
    const int k = static_cast<int>(cycle.size());
    for (int i = 0; i < k; ++i) {
        const Vec3& p = mesh.vertices[cycle[i]];
        const Vec3& q = mesh.vertices[cycle[(i + 1) % k]];
        n += cross(p, q);
    }
    return n * 0.5;
}

inline Vec3 face_centroid(const EmbeddedMesh& mesh, int face) {
    Vec3 c{};
    for (int v : mesh.faces[face]) c += mesh.vertices[v];
    return c / static_cast<double>(mesh.faces[face].size());
}

/// Volume enclosed by the surface, signed by orientation (positive when face
/// cycles are outward). Valid for any closed oriented surface.
inline double enclosed_volume(const EmbeddedMesh& mesh) {
    double six_v = 0.0;
    for (const auto& cycle : mesh.faces) {
        const Vec3& v0 = mesh.vertices[cycle[0]];
        for (std::size_t i = 1; i + 1 < cycle.size(); ++i)
            six_v += triple(v0, mesh.vertices[cycle[i]], mesh.vertices[cycle[i + 1]]);
    }
    return six_v / 6.0;
}

/// Makes face orientations mutually consistent by propagating from face 0,
/// then fixes the global flip so the enclosed volume is positive. The global
/// step is skipped when the volume vanishes (degenerate embeddings).
inline void repair_orientation(EmbeddedMesh& mesh) {
    const auto uses = detail::collect_edge_uses(mesh);
    for (const auto& [key, u] : uses)
        if (u.size() != 2)
            throw NonManifoldEdge("edge (" + std::to_string(key.first) + "," +
                                  std::to_string(key.second) + ") has " +
                                  std::to_string(u.size()) + " incident faces");

    const int nf = mesh.face_count();
    std::vector<int> flip(nf, -1);  // -1 unvisited, 0 keep, 1 reverse
    std::vector<int> stack;
    for (int start = 0; start < nf; ++start) {
        if (flip[start] != -1) continue;
        flip[start] = 0;
        stack.push_back(start);
        while (!stack.empty()) {
            const int f = stack.back();
            stack.pop_back();
            const auto& cycle = mesh.faces[f];
            const int k = static_cast<int>(cycle.size());
            for (int i = 0; i < k; ++i) {
                const auto key = detail::edge_key(cycle[i], cycle[(i + 1) % k]);
                const bool fwd = (cycle[i] < cycle[(i + 1) % k]) != (flip[f] == 1);
                for (const auto& use : uses.at(key)) {
                    if (use.face == f) continue;
                    // Consistent orientation: the neighbour must traverse the
                    // shared edge in the opposite direction.
                    const int want = (use.forward == fwd) ? 1 : 0;
                    if (flip[use.face] == -1) {
                        flip[use.face] = want;
                        stack.push_back(use.face);
                    } else if (flip[use.face] != want) {
                        throw InvalidMesh("mesh is not orientable");
                    }
                }
            }
        }
    }
    for (int f = 0; f < nf; ++f)
        if (flip[f] == 1) std::reverse(mesh.faces[f].begin(), mesh.faces[f].end());

    const double vol = enclosed_volume(mesh);
    double scale = 0.0;
    for (const auto& v : mesh.vertices) scale = std::max(scale, norm(v));
    if (std::abs(vol) > 1e-12 * scale * scale * scale && vol < 0.0)
        for (auto& cycle : mesh.faces) std::reverse(cycle.begin(), cycle.end());
}

/// Reorders face cycles so every face normal, computed from the reference
/// vertex positions, points away from `center`. The reference must be convex
/// or star-shaped about `center`; the typical use is fixing the orientation
/// on a convex mesh and letting a radial rescale inherit it.
inline EmbeddedMesh orient_outward(EmbeddedMesh mesh, const std::vector<Vec3>& reference,
                                   const Vec3& center = {}) {
    if (reference.size() != mesh.vertices.size())
        throw InvalidMesh("reference vertex count mismatch");
    EmbeddedMesh ref_mesh = mesh;
    ref_mesh.vertices = reference;
    for (int f = 0; f < mesh.face_count(); ++f) {
        const Vec3 n = newell_normal(ref_mesh, f);
        const Vec3 c = face_centroid(ref_mesh, f) - center;
        const double d = dot(n, c);
        if (std::abs(d) <= 1e-12 * norm(n) * norm(c))
            throw OrientationAmbiguous("face " + std::to_string(f) +
                                       " normal orthogonal to its centroid ray");
        if (d < 0.0) {
            std::reverse(mesh.faces[f].begin(), mesh.faces[f].end());
            std::reverse(ref_mesh.faces[f].begin(), ref_mesh.faces[f].end());
        }
    }
    collect_edges(mesh);  // verifies the orientation-consistency invariant
    return mesh;
}

/// Structural validity: manifold edges, consistent orientation, Euler
/// characteristic matching genus_hint. Throws on the first violation.
inline void check_mesh(const EmbeddedMesh& mesh) {
    if (mesh.vertex_count() < 3) throw InvalidMesh("fewer than 3 vertices");
    for (const auto& v : mesh.vertices)
        if (!v.finite()) throw InvalidMesh("non-finite vertex coordinate");
    const auto edges = collect_edges(mesh);
    const int chi = mesh.vertex_count() - static_cast<int>(edges.size()) + mesh.face_count();
    if (chi != 2 - 2 * mesh.genus_hint)
        throw InvalidMesh("Euler characteristic " + std::to_string(chi) +
                          " does not match genus " + std::to_string(mesh.genus_hint));
    for (const auto& e : edges) {
        const double len2 = norm2(mesh.vertices[e.a] - mesh.vertices[e.b]);
        if (!(len2 > 0.0)) throw InvalidMesh("zero-length edge");
    }
}

}  // namespace polyzero
