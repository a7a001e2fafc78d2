#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "polyzero/errors.hpp"
#include "polyzero/mesh.hpp"
#include "polyzero/vec3.hpp"

namespace polyzero {

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * norm(cross(b - a, c - a));
}

/// Interior angles of triangle ABC, returned in vertex order (at A, B, C).
/// Uses the half-angle tangent formula in its factored length form, which
/// stays accurate for needle triangles where acos of a dot product does not.
inline std::array<double, 3> triangle_angles(const Vec3& A, const Vec3& B, const Vec3& C) {
    const double a = norm(B - C);
    const double b = norm(C - A);
    const double c = norm(A - B);
    const double lmax = std::max({a, b, c});
    if (triangle_area(A, B, C) < 1e-12 * lmax * lmax)
        throw DegenerateTriangle("triangle is collinear within tolerance");

    auto half_tan_sq = [](double opp, double s1, double s2) {
        // tan^2(angle/2) between sides s1, s2, opposite side opp
        const double num = (opp + s1 - s2) * (opp + s2 - s1);
        const double den = (s1 + s2 + opp) * (s1 + s2 - opp);
        return std::max(0.0, num) / den;
    };
    const double alpha = 2.0 * std::atan(std::sqrt(half_tan_sq(a, b, c)));
    const double beta = 2.0 * std::atan(std::sqrt(half_tan_sq(b, c, a)));
    const double gamma = 2.0 * std::atan(std::sqrt(half_tan_sq(c, a, b)));
    return {alpha, beta, gamma};
}

/// Outward (non-unit) face normal; its norm is the face area. Polygonal
/// faces must be planar within a relative tolerance of 1e-9.
inline Vec3 face_normal(const EmbeddedMesh& mesh, int face) {
    const Vec3 n = newell_normal(mesh, face);
    const auto& cycle = mesh.faces[face];
    if (cycle.size() > 3) {
        const Vec3 c = face_centroid(mesh, face);
        double diameter = 0.0;
        for (int v : cycle) diameter = std::max(diameter, norm(mesh.vertices[v] - c));
        const double nn = norm(n);
        if (nn <= 0.0) throw ZeroAreaFace("face " + std::to_string(face) + " has zero area");
        const Vec3 nhat = n / nn;
        for (int v : cycle)
            if (std::abs(dot(mesh.vertices[v] - c, nhat)) > 1e-9 * (2.0 * diameter))
                throw NonPlanarFace("face " + std::to_string(face) + " deviates from a plane");
    }
    return n;
}

namespace detail {

inline const MeshEdge& find_edge(const std::vector<MeshEdge>& edges, int u, int v) {
    const auto key = edge_key(u, v);
    for (const auto& e : edges)
        if (e.a == key.first && e.b == key.second) return e;
    throw NonManifoldEdge("edge (" + std::to_string(u) + "," + std::to_string(v) +
                          ") not found in mesh");
}

/// Circumcenter of three points (must be non-collinear). The Gram
/// determinant is taken as |a x b|^2 and the numerators as direct dot
/// products, which stay accurate for needle-shaped triples (tall rectangle
/// faces) where aa*bb - ab^2 cancels catastrophically.
inline Vec3 circumcenter3(const Vec3& p1, const Vec3& p2, const Vec3& p3) {
    const Vec3 a = p2 - p1;
    const Vec3 b = p3 - p1;
    const double det = norm2(cross(a, b));
    if (det <= 1e-24 * norm2(a) * norm2(b))
        throw DegenerateTriangle("collinear points have no circumcenter");
    const double alpha = norm2(b) * dot(a, a - b) / (2.0 * det);
    const double beta = norm2(a) * dot(b, b - a) / (2.0 * det);
    return p1 + a * alpha + b * beta;
}

/// Checks that all face vertices lie on a common circle (relative tolerance
/// 1e-9) and returns its center.
inline Vec3 require_concyclic(const EmbeddedMesh& mesh, int face) {
    const auto& cycle = mesh.faces[face];
    const Vec3 c =
        circumcenter3(mesh.vertices[cycle[0]], mesh.vertices[cycle[1]], mesh.vertices[cycle[2]]);
    const double rho = norm(mesh.vertices[cycle[0]] - c);
    for (int v : cycle)
        if (std::abs(norm(mesh.vertices[v] - c) - rho) > 1e-9 * rho)
            throw NotConcyclic("face " + std::to_string(face) +
                               " is not inscribed in a circle within tolerance");
    return c;
}

/// Inscribed angle subtended by edge (a,b) of `face`, seen from the other
/// face vertices. For a triangle this is the plain opposite angle; for a
/// concyclic polygon it equals half the circumcircle center angle, and all
/// vertex choices must agree within 1e-9.
inline double inscribed_angle(const EmbeddedMesh& mesh, int face, int a, int b) {
    const auto& cycle = mesh.faces[face];
    if (cycle.size() == 3) {
        int v = -1;
        for (int u : cycle)
            if (u != a && u != b) v = u;
        if (v < 0) throw InvalidMesh("edge vertices not distinct from face");
        // angle at v, computed through the half-tangent length formula
        const auto angs = triangle_angles(mesh.vertices[v], mesh.vertices[a], mesh.vertices[b]);
        return angs[0];
    }
    face_normal(mesh, face);  // planarity gate
    const Vec3 center = require_concyclic(mesh, face);
    const Vec3 A = mesh.vertices[a], B = mesh.vertices[b];

    // Consistency across opposite-vertex choices (and a sample angle).
    double lo = 4.0 * M_PI, hi = 0.0;
    const Vec3 side = cross(newell_normal(mesh, face), B - A);
    double vertex_side = 0.0;
    int count = 0;
    for (int v : cycle) {
        if (v == a || v == b) continue;
        const double ang = angle_between(A - mesh.vertices[v], B - mesh.vertices[v]);
        lo = std::min(lo, ang);
        hi = std::max(hi, ang);
        const double s = dot(side, mesh.vertices[v] - A);
        if (std::abs(s) > std::abs(vertex_side)) vertex_side = s;
        ++count;
    }
    if (count == 0) throw InvalidMesh("no opposite vertex for inscribed angle");
    if (hi - lo > 1e-9)
        throw NotConcyclic("inscribed angles disagree across vertex choices on face " +
                           std::to_string(face));

    // Chord against center-to-chord distance, uniformly well conditioned
    // where the vertex angles degrade on needle faces. The arc is reflex when
    // the other vertices and the circumcenter sit on opposite sides of the
    // chord, which flips the cosine leg.
    const double dist = norm((A + B) * 0.5 - center);
    const bool reflex = vertex_side * dot(side, center - A) < 0.0;
    const double result = std::atan2(0.5 * norm(B - A), reflex ? -dist : dist);
    if (std::abs(result - 0.5 * (lo + hi)) > 1e-9)
        throw NotConcyclic("center angle disagrees with the inscribed angles on face " +
                           std::to_string(face));
    return result;
}

}  // namespace detail

/// Center angle psi subtended by edge (u,v) on the circumcircle of `face`,
/// measured on the arc not containing the other face vertices; in (0, 2pi).
inline double circumcircle_center_angle(const EmbeddedMesh& mesh, int face, int u, int v) {
    detail::require_concyclic(mesh, face);
    return 2.0 * detail::inscribed_angle(mesh, face, u, v);
}

/// Dihedral angle across an edge together with the convexity sign.
struct DihedralResult {
    double theta = 0.0;  // in [0, pi]
    int sign = +1;       // +1 convex (flexed outward), -1 concave
};

namespace detail {

inline DihedralResult signed_dihedral_of(const EmbeddedMesh& mesh, const MeshEdge& e) {
    const Vec3 n1 = face_normal(mesh, e.face_ab);
    const Vec3 n2 = face_normal(mesh, e.face_ba);
    const double l1 = norm(n1), l2 = norm(n2);
    if (l1 <= 0.0 || l2 <= 0.0) throw ZeroAreaFace("zero-area face at edge");
    const Vec3 u1 = n1 / l1, u2 = n2 / l2;
    const Vec3 cr = cross(u1, u2);
    const double s = norm(cr);
    const double c = dot(u1, u2);
    DihedralResult r;
    r.theta = std::atan2(s, c);
    if (s <= 1e-12) {
        // Coplanar fold (theta = 0) or coincident opposite faces (theta = pi,
        // the pancake): the cross product carries no direction, store +1.
        r.sign = +1;
        return r;
    }
    // First face = the one traversing the chosen edge vector a->b; the cross
    // product of the unit normals is collinear with the edge, its direction
    // along a->b decides convex vs concave.
    const Vec3 ab = mesh.vertices[e.b] - mesh.vertices[e.a];
    r.sign = dot(cr, ab) > 0.0 ? +1 : -1;
    return r;
}

}  // namespace detail

/// Signed dihedral across the edge (u,v); the faces must be manifold.
inline DihedralResult signed_dihedral(const EmbeddedMesh& mesh, int u, int v) {
    const auto edges = collect_edges(mesh);
    return detail::signed_dihedral_of(mesh, detail::find_edge(edges, u, v));
}

/// Opposite angles (phi_s, phi_t) seen from the two faces incident to (u,v);
/// first the face traversing min(u,v)->max(u,v). For polygonal faces these
/// are half the center angles psi/2.
inline std::pair<double, double> opposite_angles(const EmbeddedMesh& mesh, int u, int v) {
    const auto edges = collect_edges(mesh);
    const MeshEdge& e = detail::find_edge(edges, u, v);
    return {detail::inscribed_angle(mesh, e.face_ab, e.a, e.b),
            detail::inscribed_angle(mesh, e.face_ba, e.a, e.b)};
}

/// Everything the coupling formula needs for one edge.
struct EdgeRecord {
    int a = -1, b = -1;                  // vertex pair, a < b
    int face_first = -1;                 // traverses a->b (first face of the sign rule)
    int face_second = -1;                // traverses b->a
    double length = 0.0;                 // L_e
    double phi_first = 0.0;              // inscribed angle in face_first, in (0, pi)
    double phi_second = 0.0;             // inscribed angle in face_second
    double dihedral = 0.0;               // theta in [0, pi]
    int convexity_sign = +1;             // +1 convex, -1 concave
};

/// Builds the per-edge geometric records for the whole mesh, in the canonical
/// edge order of collect_edges.
inline std::vector<EdgeRecord> build_edge_records(const EmbeddedMesh& mesh) {
    const auto edges = collect_edges(mesh);
    std::vector<EdgeRecord> records;
    records.reserve(edges.size());
    for (const auto& e : edges) {
        EdgeRecord r;
        r.a = e.a;
        r.b = e.b;
        r.face_first = e.face_ab;
        r.face_second = e.face_ba;
        r.length = norm(mesh.vertices[e.b] - mesh.vertices[e.a]);
        r.phi_first = detail::inscribed_angle(mesh, e.face_ab, e.a, e.b);
        r.phi_second = detail::inscribed_angle(mesh, e.face_ba, e.a, e.b);
        const auto d = detail::signed_dihedral_of(mesh, e);
        r.dihedral = d.theta;
        r.convexity_sign = d.sign;
        records.push_back(r);
    }
    return records;
}

/// Regge action: sum over edges of convexity_sign * theta * length, the
/// discrete total extrinsic curvature of the embedding.
inline double regge_action(const EmbeddedMesh& mesh) {
    double total = 0.0;
    for (const auto& r : build_edge_records(mesh))
        total += r.convexity_sign * r.dihedral * r.length;
    return total;
}

inline double regge_action(const std::vector<EdgeRecord>& records) {
    double total = 0.0;
    for (const auto& r : records) total += r.convexity_sign * r.dihedral * r.length;
    return total;
}

}  // namespace polyzero
