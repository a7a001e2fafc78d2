#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "polyzero/canonical.hpp"
#include "polyzero/graph.hpp"
#include "polyzero/ising.hpp"
#include "polyzero/meshgen.hpp"

namespace polyzero {

// --- random-mesh zero campaign ---------------------------------------------

struct CampaignConfig {
    int n_meshes = 10;            // independent seed distributions
    int n_vertices = 11;
    int rescalings_per_mesh = 9;  // non-convex variants per distribution
    std::uint64_t seed = 1;
    double tolerance = 1e-9;      // normalized-residual acceptance bound
    double rescale_lo = 1.0;
    double rescale_hi = 4.0;
    Distribution distribution = Distribution::uniform;
    EvalOptions eval{};
};

struct CampaignRow {
    std::string mesh_id;
    int vertices = 0;
    int faces = 0;
    bool accepted = false;
    std::string reject_reason;
    Complex value{};
    double abs_value = 0.0;
    double normalized = 0.0;
    double regge = 0.0;
    bool convex = false;
    double oracle_delta = 0.0;  // |P_spin - P_even| / magnitude scale
};

struct CampaignResult {
    std::vector<CampaignRow> rows;
    int accepted_count = 0;
    int rejected_count = 0;
    double max_normalized = 0.0;
    double max_oracle_delta = 0.0;
};

namespace detail {

inline std::string campaign_mesh_id(int vertices, int dist_index, int rescale_index) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "v%02d_s%03d_r%02d", vertices, dist_index, rescale_index);
    return buf;
}

}  // namespace detail

/// The random-mesh protocol: for each seed distribution, one convex Delaunay
/// polyhedron plus `rescalings_per_mesh` radially rescaled variants; every
/// accepted mesh is evaluated at the geometric couplings by both methods.
/// Per-mesh failures are recorded and the campaign continues.
inline CampaignResult run_zero_campaign(const CampaignConfig& config) {
    if (config.n_meshes <= 0 || config.n_vertices < 4 || config.rescalings_per_mesh < 0 ||
        !(config.tolerance > 0.0))
        throw InvalidParameters("bad campaign configuration");

    CampaignResult result;
    for (int i = 0; i < config.n_meshes; ++i) {
        SamplerConfig sampler;
        sampler.n_points = config.n_vertices;
        sampler.distribution = config.distribution;
        sampler.seed = derive_seed(config.seed, (static_cast<std::uint64_t>(i) << 8) | 0);
        EmbeddedMesh convex;
        try {
            convex = delaunay_sphere(sample_sphere(sampler),
                                     derive_seed(config.seed, (static_cast<std::uint64_t>(i) << 8) | 1));
        } catch (const Error& e) {
            CampaignRow row;
            row.mesh_id = detail::campaign_mesh_id(config.n_vertices, i, 0);
            row.reject_reason = e.what();
            result.rows.push_back(row);
            ++result.rejected_count;
            continue;
        }

        for (int j = 0; j <= config.rescalings_per_mesh; ++j) {
            CampaignRow row;
            row.mesh_id = detail::campaign_mesh_id(config.n_vertices, i, j);
            EmbeddedMesh mesh = convex;
            if (j > 0) {
                RescaleConfig rc;
                rc.lo = config.rescale_lo;
                rc.hi = config.rescale_hi;
                rc.seed = derive_seed(config.seed,
                                      (static_cast<std::uint64_t>(i) << 8) | (8 + j));
                mesh = radial_rescale(convex, rc);
            }
            row.vertices = mesh.vertex_count();
            row.faces = mesh.face_count();

            const auto validation = validate_closed(mesh);
            if (!validation.accepted) {
                row.reject_reason = validation.reason;
                result.rows.push_back(row);
                ++result.rejected_count;
                continue;
            }

            auto [graph, records] = build_dual(mesh);
            const auto Y = geometric_couplings(graph, records, +1);
            const auto spin = loop_polynomial_spin_sum(graph, Y, config.eval);
            const auto even = loop_polynomial_even_subgraphs(graph, Y, config.eval);

            row.accepted = true;
            row.value = spin.value;
            row.abs_value = spin.abs_value;
            row.normalized = spin.normalized_residual;
            row.regge = regge_action(records);
            row.convex = std::all_of(records.begin(), records.end(),
                                     [](const EdgeRecord& r) { return r.convexity_sign > 0; });
            row.oracle_delta = std::abs(spin.value - even.value) / spin.magnitude_scale;
            result.rows.push_back(row);
            ++result.accepted_count;
            result.max_normalized = std::max(result.max_normalized, row.normalized);
            result.max_oracle_delta = std::max(result.max_oracle_delta, row.oracle_delta);
        }
    }
    return result;
}

/// Campaign table in CSV form; accepted rows only, no timing columns, so a
/// replay with the same manifest is byte-identical for any worker count.
inline void write_campaign_csv(std::ostream& os, const CampaignResult& result) {
    os << "mesh_id,vertices,faces,re,im,abs,normalized,regge,convex\n";
    for (const auto& row : result.rows) {
        if (!row.accepted) continue;
        os << row.mesh_id << "," << row.vertices << "," << row.faces << ","
           << fmt_g17(row.value.real()) << "," << fmt_g17(row.value.imag()) << ","
           << fmt_g17(row.abs_value) << "," << fmt_g17(row.normalized) << ","
           << fmt_g17(row.regge) << "," << (row.convex ? 1 : 0) << "\n";
    }
}

// --- perturbation scan ------------------------------------------------------

struct PerturbationRow {
    double amplitude = 0.0;
    double abs_value = 0.0;
};

struct PerturbationScan {
    std::vector<PerturbationRow> rows;
    double loglog_slope = 0.0;  // fitted over the positive-amplitude rows
};

/// Shifts every geometric coupling by an independent uniform perturbation in
/// [-a, a] and records |P| per amplitude. Near a zero the growth is linear,
/// so the log-log slope sits close to 1.
inline PerturbationScan run_perturbation_scan(const EmbeddedMesh& mesh,
                                              const std::vector<double>& amplitudes,
                                              std::uint64_t seed = 1,
                                              const EvalOptions& eval = {}) {
    auto [graph, records] = build_dual(mesh);
    const auto Y0 = geometric_couplings(graph, records, +1);
    PerturbationScan scan;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t k = 0; k < amplitudes.size(); ++k) {
        const double a = amplitudes[k];
        if (a < 0.0) throw InvalidParameters("amplitudes must be non-negative");
        std::mt19937_64 rng(derive_seed(seed, k));
        const auto Y = a == 0.0 ? Y0 : perturb_couplings(Y0, a, rng);
        const auto rep = loop_polynomial_spin_sum(graph, Y, eval);
        scan.rows.push_back({a, rep.abs_value});
        if (a > 0.0 && rep.abs_value > 0.0) {
            const double x = std::log(a), y = std::log(rep.abs_value);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
    }
    if (n >= 2) scan.loglog_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return scan;
}

// --- exhaustive dihedral-sign search ----------------------------------------

struct SignSearchResult {
    std::vector<std::vector<int>> best_configs;  // sign vectors over edges, +-1
    double best_value = 0.0;                     // minimal |P|
    std::vector<int> geometric_signs;
    bool matches_geometric = false;  // minimizers == {geometric, -geometric}
    std::vector<double> full_table;  // |P| per sign-vector index, opt-in
};

/// Evaluates |P| for all 2^E assignments of dihedral-angle signs and returns
/// the minimizers. Gray-code order: each step conjugates one link's phase.
inline SignSearchResult run_sign_search(const EmbeddedMesh& mesh, bool keep_table = false,
                                        const EvalOptions& eval = {}, int max_edges = 24) {
    auto [graph, records] = build_dual(mesh);
    const int E = graph.link_count();
    if (E > max_edges)
        throw SignSpaceTooLarge("sign search over " + std::to_string(E) + " edges exceeds limit " +
                                std::to_string(max_edges));

    CouplingVector Y = geometric_couplings(graph, records, +1);
    // Rebase to the all-(+1) sign assignment.
    for (int l = 0; l < E; ++l)
        if (records[l].convexity_sign < 0) Y[l] = std::conj(Y[l]);

    const std::uint64_t total = 1ull << E;
    SignSearchResult result;
    if (keep_table) result.full_table.assign(total, 0.0);

    double best_norm = -1.0;
    std::vector<std::uint64_t> best_masks;
    std::uint64_t gray = 0;
    for (std::uint64_t i = 0; i < total; ++i) {
        if (i > 0) {
            const int flip = std::countr_zero(i);
            gray ^= (1ull << flip);
            Y[flip] = std::conj(Y[flip]);
        }
        const auto rep = loop_polynomial_spin_sum(graph, Y, eval);
        const double nrm = std::norm(rep.value);
        if (keep_table) result.full_table[gray] = rep.abs_value;
        if (best_norm < 0.0 || nrm < best_norm) {
            best_norm = nrm;
            best_masks.assign(1, gray);
        } else if (nrm == best_norm) {
            best_masks.push_back(gray);
        }
    }
    result.best_value = std::sqrt(best_norm);

    std::sort(best_masks.begin(), best_masks.end());
    for (std::uint64_t m : best_masks) {
        std::vector<int> signs(E);
        for (int l = 0; l < E; ++l) signs[l] = (m >> l) & 1 ? -1 : +1;
        result.best_configs.push_back(std::move(signs));
    }

    result.geometric_signs.resize(E);
    std::uint64_t geo_mask = 0;
    for (int l = 0; l < E; ++l) {
        result.geometric_signs[l] = records[l].convexity_sign;
        if (records[l].convexity_sign < 0) geo_mask |= (1ull << l);
    }
    const std::uint64_t flip_all = total - 1;
    result.matches_geometric =
        best_masks.size() == 2 &&
        ((best_masks[0] == geo_mask && best_masks[1] == (geo_mask ^ flip_all)) ||
         (best_masks[1] == geo_mask && best_masks[0] == (geo_mask ^ flip_all)));
    return result;
}

// --- prismatic-torus sweeps ---------------------------------------------------

enum class TorusAxis { r, R, h };

struct TorusSweepRow {
    double value = 0.0;      // swept parameter
    Complex closed{};        // closed-form loop polynomial
    double abs_closed = 0.0;
    Complex mesh{};          // full pipeline: mesh -> dual -> couplings -> evaluator
    double abs_mesh = 0.0;
};

inline std::vector<TorusSweepRow> run_torus_sweep(TorusAxis axis, const std::vector<double>& grid,
                                                  CanonicalSpec base = torus_spec(1.0, 2.0, 1.0),
                                                  const EvalOptions& eval = {}) {
    std::vector<TorusSweepRow> rows;
    for (double v : grid) {
        CanonicalSpec spec = base;
        (axis == TorusAxis::r ? spec.r : axis == TorusAxis::R ? spec.R : spec.h) = v;
        if (!(spec.r > 0.0 && spec.r < spec.R && spec.h > 0.0))
            throw InvalidParameters("torus sweep point violates 0 < r < R, h > 0");
        TorusSweepRow row;
        row.value = v;
        row.closed = reference_polynomial(spec, reference_couplings(spec));
        row.abs_closed = std::abs(row.closed);
        const auto mesh = build_canonical(spec);
        auto [graph, records] = build_dual(mesh);
        const auto rep = loop_polynomial_even_subgraphs(
            graph, geometric_couplings(graph, records, +1), eval);
        row.mesh = rep.value;
        row.abs_mesh = rep.abs_value;
        rows.push_back(row);
    }
    return rows;
}

// --- timing / accuracy scaling study -----------------------------------------

struct ScalingRow {
    int vertices = 0;
    int faces = 0;
    double median_normalized = 0.0;
    double median_seconds = 0.0;
};

struct ScalingStudy {
    std::vector<ScalingRow> rows;
    double log_time_slope = 0.0;
    double log_time_r2 = 0.0;
};

/// Spin-sum cost and accuracy versus vertex count on convex Delaunay meshes.
/// Small sizes are re-run until the timing window is wide enough for a stable
/// median.
inline ScalingStudy run_scaling_study(const std::vector<int>& vertex_counts,
                                      std::uint64_t seed = 1, int meshes_per_count = 3,
                                      const EvalOptions& eval = {}) {
    ScalingStudy study;
    for (int n : vertex_counts) {
        std::vector<double> secs, residuals;
        for (int i = 0; i < meshes_per_count; ++i) {
            SamplerConfig sampler;
            sampler.n_points = n;
            sampler.seed = derive_seed(seed, (static_cast<std::uint64_t>(n) << 8) | i);
            const auto mesh = delaunay_sphere(sample_sphere(sampler),
                                              derive_seed(seed, (static_cast<std::uint64_t>(n) << 8) | (64 + i)));
            auto [graph, records] = build_dual(mesh);
            const auto Y = geometric_couplings(graph, records, +1);

            auto first = loop_polynomial_spin_sum(graph, Y, eval);
            int reps = 1;
            double total = first.elapsed_seconds;
            while (total < 0.02 && reps < 64) {
                total += loop_polynomial_spin_sum(graph, Y, eval).elapsed_seconds;
                ++reps;
            }
            secs.push_back(total / reps);
            residuals.push_back(first.normalized_residual);
        }
        auto median = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            return v[v.size() / 2];
        };
        study.rows.push_back({n, 2 * n - 4, median(residuals), median(secs)});
    }

    // least squares of log(median seconds) against n
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int m = 0;
    for (const auto& row : study.rows) {
        if (!(row.median_seconds > 0.0)) continue;
        const double x = row.vertices, y = std::log(row.median_seconds);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        ++m;
    }
    if (m >= 2) {
        const double vxy = m * sxy - sx * sy;
        const double vxx = m * sxx - sx * sx;
        const double vyy = m * syy - sy * sy;
        study.log_time_slope = vxy / vxx;
        study.log_time_r2 = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
    }
    return study;
}

// --- stored random fixtures ---------------------------------------------------

/// 6-vertex rescaled Delaunay polyhedron with exactly two concave edges
/// (12 edges, so the sign search runs 4096 evaluations). Seeds frozen.
inline EmbeddedMesh concave_pair_fixture() {
    SamplerConfig sampler;
    sampler.n_points = 6;
    sampler.seed = 2007;
    RescaleConfig rescale;
    rescale.seed = 2010;
    return radial_rescale(delaunay_sphere(sample_sphere(sampler), 0), rescale);
}

/// 9-vertex non-convex fixture used for the perturbation scan. Seeds frozen.
inline EmbeddedMesh perturbation_fixture() {
    SamplerConfig sampler;
    sampler.n_points = 9;
    sampler.seed = 900;
    RescaleConfig rescale;
    rescale.seed = 901;
    return radial_rescale(delaunay_sphere(sample_sphere(sampler), 0), rescale);
}

}  // namespace polyzero
