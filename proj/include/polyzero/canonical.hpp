#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "polyzero/errors.hpp"
#include "polyzero/geometry.hpp"
#include "polyzero/ising.hpp"
#include "polyzero/mesh.hpp"

namespace polyzero {

enum class CanonicalKind {
    pancake,              // two coincident unit equilateral triangles
    tetrahedron_regular,  // unit edge, centered at the origin
    tetrahedron_points,   // arbitrary four points
    pyramid,              // square base of edge 2, apex height h
    double_pyramid,       // flexible: height h, summit drift z
    cube,                 // axis-aligned, edge a
    prismatic_torus,      // radii r < R, height h
};

struct CanonicalSpec {
    CanonicalKind kind = CanonicalKind::tetrahedron_regular;
    double h = std::sqrt(2.0);  // pyramid / double pyramid / torus height
    double z = 1.0;             // double pyramid summit drift
    double a = 1.0;             // cube edge
    double r = 1.0;             // torus inner radius
    double R = 2.0;             // torus outer radius
    std::array<Vec3, 4> points{};  // tetrahedron_points
};

inline CanonicalSpec pancake_spec() { return {CanonicalKind::pancake}; }
inline CanonicalSpec tetrahedron_spec() { return {CanonicalKind::tetrahedron_regular}; }
inline CanonicalSpec tetrahedron_points_spec(const std::array<Vec3, 4>& pts) {
    CanonicalSpec s;
    s.kind = CanonicalKind::tetrahedron_points;
    s.points = pts;
    return s;
}
inline CanonicalSpec pyramid_spec(double h) {
    CanonicalSpec s;
    s.kind = CanonicalKind::pyramid;
    s.h = h;
    return s;
}
inline CanonicalSpec double_pyramid_spec(double h, double z) {
    CanonicalSpec s;
    s.kind = CanonicalKind::double_pyramid;
    s.h = h;
    s.z = z;
    return s;
}
inline CanonicalSpec cube_spec(double a = 1.0) {
    CanonicalSpec s;
    s.kind = CanonicalKind::cube;
    s.a = a;
    return s;
}
inline CanonicalSpec torus_spec(double r, double R, double h) {
    CanonicalSpec s;
    s.kind = CanonicalKind::prismatic_torus;
    s.r = r;
    s.R = R;
    s.h = h;
    return s;
}

inline EmbeddedMesh build_canonical(const CanonicalSpec& spec) {
    EmbeddedMesh mesh;
    switch (spec.kind) {
        case CanonicalKind::pancake: {
            mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2.0, 0}};
            mesh.faces = {{0, 1, 2}, {0, 2, 1}};
            mesh.degenerate_embedding = true;
            break;
        }
        case CanonicalKind::tetrahedron_regular: {
            const double s = 1.0 / (2.0 * std::sqrt(2.0));  // unit edge length
            mesh.vertices = {Vec3{1, 1, 1} * s, Vec3{1, -1, -1} * s, Vec3{-1, 1, -1} * s,
                             Vec3{-1, -1, 1} * s};
            mesh.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
            repair_orientation(mesh);
            break;
        }
        case CanonicalKind::tetrahedron_points: {
            mesh.vertices.assign(spec.points.begin(), spec.points.end());
            mesh.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
            repair_orientation(mesh);
            break;
        }
        case CanonicalKind::pyramid: {
            if (!(spec.h > 0.0)) throw InvalidParameters("pyramid height must be positive");
            mesh.vertices = {{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}, {0, 0, spec.h}};
            mesh.faces = {{0, 3, 2, 1}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
            repair_orientation(mesh);
            break;
        }
        case CanonicalKind::double_pyramid: {
            if (!(spec.h > 0.0)) throw InvalidParameters("double pyramid height must be positive");
            if (spec.z < 0.0) throw InvalidParameters("summit drift z must be non-negative");
            mesh.vertices = {{0, 0, 0},          {0, 0, 2},           {2, 0, 2},
                             {2, 0, 0},          {1, spec.h, spec.z}, {1, -spec.h, spec.z}};
            mesh.faces = {{1, 2, 4}, {0, 3, 4}, {0, 1, 4}, {2, 3, 4},
                          {1, 2, 5}, {0, 3, 5}, {0, 1, 5}, {2, 3, 5}};
            repair_orientation(mesh);
            break;
        }
        case CanonicalKind::cube: {
            if (!(spec.a > 0.0)) throw InvalidParameters("cube edge must be positive");
            const double s = spec.a / 2.0;
            for (int i = 0; i < 8; ++i)
                mesh.vertices.push_back({(i & 1) ? s : -s, (i & 2) ? s : -s, (i & 4) ? s : -s});
            mesh.faces = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                          {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
            repair_orientation(mesh);
            break;
        }
        case CanonicalKind::prismatic_torus: {
            if (!(spec.r > 0.0 && spec.r < spec.R && spec.h > 0.0))
                throw InvalidParameters("torus needs 0 < r < R and h > 0");
            // 0..2 inner bottom, 3..5 inner top, 6..8 outer bottom, 9..11 outer top
            for (int k = 0; k < 3; ++k) {
                const double c = std::cos(2.0 * M_PI * k / 3.0);
                const double s = std::sin(2.0 * M_PI * k / 3.0);
                mesh.vertices.push_back({spec.r * c, spec.r * s, 0.0});
            }
            for (int k = 0; k < 3; ++k)
                mesh.vertices.push_back({mesh.vertices[k].x, mesh.vertices[k].y, spec.h});
            for (int k = 0; k < 3; ++k) {
                const double f = spec.R / spec.r;
                mesh.vertices.push_back(
                    {mesh.vertices[k].x * f, mesh.vertices[k].y * f, 0.0});
            }
            for (int k = 0; k < 3; ++k)
                mesh.vertices.push_back({mesh.vertices[6 + k].x, mesh.vertices[6 + k].y, spec.h});
            auto nx = [](int k) { return (k + 1) % 3; };
            for (int k = 0; k < 3; ++k)  // top ring trapezoids
                mesh.faces.push_back({3 + k, 9 + k, 9 + nx(k), 3 + nx(k)});
            for (int k = 0; k < 3; ++k)  // bottom ring trapezoids
                mesh.faces.push_back({k, nx(k), 6 + nx(k), 6 + k});
            for (int k = 0; k < 3; ++k)  // outer wall
                mesh.faces.push_back({6 + k, 6 + nx(k), 9 + nx(k), 9 + k});
            for (int k = 0; k < 3; ++k)  // inner wall
                mesh.faces.push_back({k, 3 + k, 3 + nx(k), nx(k)});
            mesh.genus_hint = 1;
            break;
        }
    }
    check_mesh(mesh);
    return mesh;
}

/// Names of the coupling symmetry classes, in the argument order of the
/// matching reference polynomial.
inline std::vector<std::string> class_names(const CanonicalSpec& spec) {
    switch (spec.kind) {
        case CanonicalKind::pancake: return {"edge01", "edge02", "edge12"};
        case CanonicalKind::tetrahedron_regular: return {"edge"};
        case CanonicalKind::tetrahedron_points: return {"Y1", "Y2", "Y3", "Y4", "Y5", "Y6"};
        case CanonicalKind::pyramid: return {"base", "summit"};
        case CanonicalKind::double_pyramid: return {"u", "d", "s", "su", "sd"};
        case CanonicalKind::cube: return {"edge"};
        case CanonicalKind::prismatic_torus: return {"spoke", "hi", "he", "vi", "ve"};
    }
    throw InvalidParameters("unknown canonical kind");
}

/// Symmetry class of each edge record, indexing into class_names.
inline std::vector<int> edge_classes(const CanonicalSpec& spec,
                                     const std::vector<EdgeRecord>& records) {
    std::vector<int> cls(records.size(), 0);
    auto pair_is = [](const EdgeRecord& r, int u, int v) {
        return r.a == std::min(u, v) && r.b == std::max(u, v);
    };
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        switch (spec.kind) {
            case CanonicalKind::pancake:
                cls[i] = pair_is(r, 0, 1) ? 0 : pair_is(r, 0, 2) ? 1 : 2;
                break;
            case CanonicalKind::tetrahedron_regular:
            case CanonicalKind::cube:
                cls[i] = 0;
                break;
            case CanonicalKind::tetrahedron_points:
                // Labeling with three-cycles {126},{153},{423},{456} and
                // opposite-edge pairs (1,4),(2,5),(3,6).
                if (pair_is(r, 0, 1)) cls[i] = 0;
                else if (pair_is(r, 0, 2)) cls[i] = 1;
                else if (pair_is(r, 1, 2)) cls[i] = 2;
                else if (pair_is(r, 2, 3)) cls[i] = 3;
                else if (pair_is(r, 1, 3)) cls[i] = 4;
                else cls[i] = 5;  // (0,3)
                break;
            case CanonicalKind::pyramid:
                cls[i] = (r.a == 4 || r.b == 4) ? 1 : 0;
                break;
            case CanonicalKind::double_pyramid:
                if (pair_is(r, 1, 2)) cls[i] = 0;       // u: upper edge BC
                else if (pair_is(r, 0, 3)) cls[i] = 1;  // d: lower edge AD
                else if (pair_is(r, 0, 1) || pair_is(r, 2, 3)) cls[i] = 2;  // s
                else if (r.a == 1 || r.a == 2) cls[i] = 3;  // su: B/C to a summit
                else cls[i] = 4;                            // sd: A/D to a summit
                break;
            case CanonicalKind::prismatic_torus: {
                auto group = [](int v) { return v / 3; };  // 0 IB, 1 IT, 2 OB, 3 OT
                const int ga = group(r.a), gb = group(r.b);
                if (ga == gb) cls[i] = (ga == 0 || ga == 1) ? 1 : 2;        // hi / he
                else if (ga == 0 && gb == 1) cls[i] = 3;                    // vi
                else if (ga == 2 && gb == 3) cls[i] = 4;                    // ve
                else cls[i] = 0;                                            // spoke
                break;
            }
        }
    }
    return cls;
}

/// The paper's closed-form geometric couplings, one value per symmetry class.
inline CouplingVector reference_couplings(const CanonicalSpec& spec) {
    const Complex I{0.0, 1.0};
    switch (spec.kind) {
        case CanonicalKind::pancake: {
            const Complex y = I * std::tan(M_PI / 6.0);
            return {y, y, y};
        }
        case CanonicalKind::tetrahedron_regular:
            return {Complex{1.0 / 3.0, std::sqrt(2.0) / 3.0}};
        case CanonicalKind::tetrahedron_points:
            throw InvalidParameters("no closed-form couplings for arbitrary tetrahedra");
        case CanonicalKind::pyramid: {
            const double h = spec.h;
            const double hh1 = h * h + 1.0;
            const Complex y_sq = (Complex{-1.0, h} * (std::sqrt(2.0) - 1.0)) / hh1;
            const double w = std::sqrt(h * h + 2.0);
            const Complex yt = Complex{w, h} * (w - 1.0) / (hh1 * std::sqrt(2.0));
            return {std::sqrt(y_sq), yt};
        }
        case CanonicalKind::double_pyramid: {
            const double h = spec.h, z = spec.z;
            const double l2 = 1.0 + h * h + z * z;
            const double L2 = 1.0 + h * h + (2.0 - z) * (2.0 - z);
            const double l = std::sqrt(l2), L = std::sqrt(L2);
            const Complex yu = Complex{h, 2.0 - z} / (L2 - 1.0);
            const Complex yd = Complex{h, z} / (l2 - 1.0);
            const Complex ys = 4.0 * Complex{h, 1.0} / ((L + l + 2.0) * (L + l - 2.0));
            const Complex ysu_sq =
                4.0 * Complex{2.0 - z, h * L} / ((L + 1.0) * (l + L + 2.0) * (l - L + 2.0));
            const Complex ysd_sq =
                4.0 * Complex{z, h * l} / ((l + 1.0) * (L + l + 2.0) * (L - l + 2.0));
            return {yu, yd, ys, std::sqrt(ysu_sq), std::sqrt(ysd_sq)};
        }
        case CanonicalKind::cube:
            return {std::polar(std::tan(M_PI / 8.0), M_PI / 4.0)};
        case CanonicalKind::prismatic_torus: {
            // Each difference of square roots is evaluated through its
            // difference-of-squares form, which stays accurate in the
            // r -> 0 and R, h -> infinity asymptotics:
            //   2 sqrt(r^2+rR+R^2) - sqrt(3)(R+r) = (R-r)^2 / (2 rho + sqrt(3)(R+r))
            //   sqrt(h^2+3a^2) - sqrt(3) a       = h^2 / (d_a + sqrt(3) a)
            //   sqrt(h^2+3a^2) - h               = 3a^2 / (d_a + h)
            //   2 rho - (r+2R)                   = 3r^2 / (2 rho + r + 2R)
            const double r = spec.r, R = spec.R, h = spec.h;
            const double rho = std::sqrt(r * r + r * R + R * R);
            const double dr = std::sqrt(h * h + 3.0 * r * r);
            const double dR = std::sqrt(h * h + 3.0 * R * R);
            const double y = (R - r) / (2.0 * rho + std::sqrt(3.0) * (R + r));
            const Complex yvi = std::polar(h / (dr + std::sqrt(3.0) * r), -M_PI / 3.0);
            const Complex yve = std::polar(h / (dR + std::sqrt(3.0) * R), M_PI / 3.0);
            const Complex yhi = std::polar(
                std::sqrt(3.0 * r * r / (dr + h) * (3.0 * r * r / (2.0 * rho + r + 2.0 * R))) /
                    (std::sqrt(3.0) * r),
                M_PI / 4.0);
            const Complex yhe = std::polar(
                std::sqrt(3.0 * R * R / (dR + h) * (2.0 * r + R + 2.0 * rho)) /
                    (std::sqrt(3.0) * R),
                M_PI / 4.0);
            return {Complex{y, 0.0}, yhi, yhe, yvi, yve};
        }
    }
    throw InvalidParameters("unknown canonical kind");
}

/// Per-link couplings obtained by broadcasting the class values onto the
/// mesh's edge records.
inline CouplingVector reference_couplings_per_link(const CanonicalSpec& spec,
                                                   const std::vector<EdgeRecord>& records) {
    const CouplingVector per_class = reference_couplings(spec);
    const auto cls = edge_classes(spec, records);
    CouplingVector Y(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) Y[i] = per_class[cls[i]];
    return Y;
}

// --- closed-form loop polynomials -----------------------------------------

inline Complex theta_poly(Complex y1, Complex y2, Complex y3) {
    return Complex{1, 0} + y1 * y2 + y2 * y3 + y3 * y1;
}

/// Tetrahedral-graph loop polynomial; argument order matches the labeling in
/// edge_classes(tetrahedron_points).
inline Complex tetra_poly(const std::array<Complex, 6>& q) {
    auto y = [&](int i) { return q[i - 1]; };
    return Complex{1, 0} + y(1) * y(2) * y(6) + y(1) * y(5) * y(3) + y(4) * y(2) * y(3) +
           y(4) * y(5) * y(6) + y(1) * y(2) * y(4) * y(5) + y(2) * y(3) * y(5) * y(6) +
           y(1) * y(3) * y(4) * y(6);
}

inline Complex tetra_poly_homogeneous(Complex y) {
    const Complex y3 = y * y * y;
    return Complex{1, 0} + 4.0 * y3 + 3.0 * y3 * y;
}

inline Complex pyramid_poly(Complex y, Complex yt) {
    const Complex y2 = y * y, yt2 = yt * yt;
    return Complex{1, 0} + yt2 * yt2 + 4.0 * yt * y2 * (Complex{1, 0} + yt2) +
           2.0 * yt2 * y2 * (Complex{2, 0} + y2);
}

/// Loop polynomial of the double-pyramidal graph (dual of the cube geometry)
/// at homogeneous coupling.
inline Complex double_pyramid_graph_poly(Complex y) {
    const Complex one{1, 0};
    const Complex p1 = one + y;
    const Complex p2 = one + y * y;
    const Complex q = one - 4.0 * y + 8.0 * y * y - 4.0 * y * y * y + y * y * y * y;
    return p1 * p1 * p1 * p1 * p2 * p2 * q;
}

inline Complex cube_graph_poly_homogeneous(Complex y) {
    const Complex y2 = y * y, y4 = y2 * y2;
    return Complex{1, 0} + 6.0 * y4 + 16.0 * y4 * y2 + 9.0 * y4 * y4;
}

/// Cube-graph loop polynomial in the five symmetry-class couplings of the
/// flexible double pyramid.
inline Complex cube_graph_poly(Complex yu, Complex yd, Complex ys, Complex ysu, Complex ysd) {
    const Complex one{1, 0};
    const Complex su2 = ysu * ysu, sd2 = ysd * ysd, s2 = ys * ys;
    const Complex t1 = s2 * (sd2 + su2) * (sd2 + su2);
    const Complex t2 = (one + sd2 * su2) * (one + sd2 * su2);
    const Complex t3 = 2.0 * ys * yu * su2 * (one + sd2) * (one + sd2);
    const Complex t4 = 2.0 * ys * yd * sd2 * (one + su2) * (one + su2);
    const Complex t5 = 4.0 * yu * yd * su2 * sd2;
    const Complex t6 = 4.0 * yu * yd * s2 * su2 * sd2;
    return t1 + t2 + t3 + t4 + t5 + t6;
}

/// Prismatic-torus loop polynomial (normalized: constant term 1, i.e. the
/// raw spin sum divided by 2^12).
inline Complex torus_poly(Complex Y, Complex hi, Complex he, Complex vi, Complex ve) {
    const Complex one{1, 0};
    auto q = [&](Complex y) { return (y - one) * y + one; };       // y^2 - y + 1
    auto p = [&](Complex y) { return y * y + y + one; };           // y^2 + y + 1
    const Complex A = Y * (Y * ((Y - 2.0) * Y + 5.0) - 2.0) + one;  // Y^4-2Y^3+5Y^2-2Y+1
    const Complex B = ((Y - 5.0) * Y + one) * q(Y);

    const Complex hi2 = hi * hi, hi4 = hi2 * hi2, hi6 = hi4 * hi2;
    const Complex he2 = he * he, he4 = he2 * he2, he6 = he4 * he2;
    const Complex qY = q(Y);

    // shared quartic packet in (ve, vi)
    const Complex quart = ve * ve * (vi * (A * vi - B) + A) +
                          ve * (vi * (-B * vi + 5.0 * A) - B) + vi * (A * vi - B) + A;
    const Complex mixed = ve * (vi * (ve + vi + 2.0) + one) + vi;

    const Complex packet1 =
        he6 * hi2 * q(ve) * (qY * qY * hi4 * q(vi) + 6.0 * Y * qY * hi2 * vi + 3.0 * Y * Y * p(vi));
    const Complex packet2 =
        3.0 * he4 *
        (2.0 * Y * p(Y) * hi2 * mixed + 2.0 * Y * qY * hi6 * ve * q(vi) + hi4 * quart +
         Y * Y * p(ve) * q(vi));
    const Complex packet3 =
        3.0 * he2 *
        (Y * Y * hi6 * p(ve) * q(vi) + 2.0 * Y * p(Y) * hi4 * mixed + hi2 * quart +
         2.0 * Y * qY * ve * q(vi));
    const Complex packet4 =
        q(ve) * (3.0 * Y * Y * hi4 * p(vi) + 6.0 * Y * qY * hi2 * vi + qY * qY * q(vi));

    return (Y + one) * (Y + one) * (ve + one) * (vi + one) *
           (packet1 + packet2 + packet3 + packet4);
}

/// Evaluates the closed-form loop polynomial for a canonical configuration on
/// couplings shaped per symmetry class.
inline Complex reference_polynomial(const CanonicalSpec& spec, const CouplingVector& v) {
    const std::size_t want = class_names(spec).size();
    if (v.size() != want)
        throw ShapeMismatch("expected " + std::to_string(want) + " class couplings, got " +
                            std::to_string(v.size()));
    switch (spec.kind) {
        case CanonicalKind::pancake: return theta_poly(v[0], v[1], v[2]);
        case CanonicalKind::tetrahedron_regular: return tetra_poly_homogeneous(v[0]);
        case CanonicalKind::tetrahedron_points:
            return tetra_poly({v[0], v[1], v[2], v[3], v[4], v[5]});
        case CanonicalKind::pyramid: return pyramid_poly(v[0], v[1]);
        case CanonicalKind::double_pyramid: return cube_graph_poly(v[0], v[1], v[2], v[3], v[4]);
        case CanonicalKind::cube: return double_pyramid_graph_poly(v[0]);
        case CanonicalKind::prismatic_torus: return torus_poly(v[0], v[1], v[2], v[3], v[4]);
    }
    throw InvalidParameters("unknown canonical kind");
}

}  // namespace polyzero
