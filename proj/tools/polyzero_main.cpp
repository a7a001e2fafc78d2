// Command-line front end: verification, generation, campaigns, sign search,
// torus sweeps, scaling studies and canonical example fixtures.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyzero/canonical.hpp"
#include "polyzero/experiments.hpp"
#include "polyzero/graph.hpp"
#include "polyzero/ising.hpp"
#include "polyzero/mesh_io.hpp"

namespace pz = polyzero;

namespace {

struct RescaleRange {
    double lo = 1.0;
    double hi = 4.0;
};

RescaleRange parse_rescale(const std::string& text) {
    RescaleRange r;
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--rescale expects lo:hi");
    r.lo = std::stod(text.substr(0, colon));
    r.hi = std::stod(text.substr(colon + 1));
    if (!(r.lo > 0.0 && r.lo <= r.hi)) throw CLI::ValidationError("--rescale needs 0 < lo <= hi");
    return r;
}

std::vector<double> parse_grid(const std::string& text) {
    // "lo:hi:n" linear, "lo:hi:n:log" logarithmic, or comma-separated values
    std::vector<double> out;
    if (text.find(':') == std::string::npos) {
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() < 3) throw CLI::ValidationError("grid expects lo:hi:n[:log]");
    const double lo = std::stod(parts[0]);
    const double hi = std::stod(parts[1]);
    const int n = std::stoi(parts[2]);
    const bool logspace = parts.size() > 3 && parts[3] == "log";
    if (n < 1) throw CLI::ValidationError("grid needs at least one point");
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        out.push_back(logspace ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
    return out;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw pz::IoError("cannot write " + path);
    return file;
}

int verify_mesh(const pz::EmbeddedMesh& mesh, const std::string& id, double tolerance,
                const std::string& out_path, const std::string& format, unsigned threads) {
    pz::EvalOptions eval;
    eval.threads = threads;
    auto [graph, records] = pz::build_dual(mesh);
    const auto Y = pz::geometric_couplings(graph, records, +1);
    const auto spin = pz::loop_polynomial_spin_sum(graph, Y, eval);
    const auto even = pz::loop_polynomial_even_subgraphs(graph, Y, eval);
    const double oracle_delta = std::abs(spin.value - even.value) / spin.magnitude_scale;

    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    if (format == "csv") {
        os << pz::evaluation_csv_header() << "\n";
        pz::append_evaluation_csv(os, id, mesh.vertex_count(), mesh.face_count(), spin);
        pz::append_evaluation_csv(os, id, mesh.vertex_count(), mesh.face_count(), even);
    } else {
        pz::write_report(os, id, spin);
        os << "\n";
        pz::write_report(os, id, even);
        os << "\nregge_action: " << pz::fmt_g17(pz::regge_action(records)) << "\n";
        os << "oracle_delta: " << pz::fmt_g17(oracle_delta) << "\n";
    }

    if (spin.normalized_residual > tolerance) {
        std::cerr << "FAIL: normalized residual " << spin.normalized_residual << " > tolerance "
                  << tolerance << "\n";
        return 1;
    }
    if (oracle_delta > 1e-10) {
        std::cerr << "FAIL: spin-sum and even-subgraph evaluations disagree (" << oracle_delta
                  << ")\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polyzero: geometric Ising zeros on embedded 2d triangulations"};
    app.set_help_flag("--help", "print help");  // frees -h / --h for the height option
    app.require_subcommand(1);

    // --- verify ---
    std::string verify_path, verify_out, verify_format = "structured-text";
    double verify_tol = 1e-9;
    unsigned threads = 0;
    auto* cmd_verify = app.add_subcommand(
        "verify", "evaluate the loop polynomial of a mesh at its geometric couplings");
    cmd_verify->add_option("mesh", verify_path, "mesh file (.json canonical or .off)")->required();
    cmd_verify->add_option("--tolerance", verify_tol, "normalized residual bound");
    cmd_verify->add_option("--out", verify_out, "write the report here instead of stdout");
    cmd_verify->add_option("--format", verify_format)
        ->check(CLI::IsMember({"csv", "structured-text"}));
    cmd_verify->add_option("--threads", threads, "evaluation threads (0 = auto)");

    // --- generate ---
    int gen_vertices = 11, gen_count = 1, gen_rescalings = 0;
    std::uint64_t gen_seed = 1;
    std::string gen_rescale, gen_dist = "uniform", gen_out = ".";
    auto* cmd_generate =
        app.add_subcommand("generate", "emit random sphere meshes plus a replay manifest");
    cmd_generate->add_option("--vertices", gen_vertices)->required();
    cmd_generate->add_option("--seed", gen_seed);
    cmd_generate->add_option("--count", gen_count, "independent seed distributions");
    cmd_generate->add_option("--rescalings", gen_rescalings, "rescaled variants per distribution");
    cmd_generate->add_option("--rescale", gen_rescale, "radial rescale range lo:hi");
    cmd_generate->add_option("--distribution", gen_dist)
        ->check(CLI::IsMember({"uniform", "pole-weighted"}));
    cmd_generate->add_option("--out", gen_out, "output directory");

    // --- campaign ---
    pz::CampaignConfig campaign;
    std::string campaign_rescale, campaign_out;
    auto* cmd_campaign = app.add_subcommand(
        "campaign", "batch zero verification over random convex and rescaled meshes");
    cmd_campaign->add_option("--vertices", campaign.n_vertices)->required();
    cmd_campaign->add_option("--meshes", campaign.n_meshes, "seed distributions");
    cmd_campaign->add_option("--rescalings", campaign.rescalings_per_mesh);
    cmd_campaign->add_option("--seed", campaign.seed);
    cmd_campaign->add_option("--tolerance", campaign.tolerance);
    cmd_campaign->add_option("--rescale", campaign_rescale, "radial rescale range lo:hi");
    cmd_campaign->add_option("--threads", threads);
    cmd_campaign->add_option("--out", campaign_out, "campaign CSV path");

    // --- perturb ---
    std::string perturb_path, perturb_grid = "1e-6:1e-1:11:log", perturb_out;
    std::uint64_t perturb_seed = 1;
    auto* cmd_perturb =
        app.add_subcommand("perturb", "scan |P| against coupling perturbation amplitude");
    cmd_perturb->add_option("mesh", perturb_path)->required();
    cmd_perturb->add_option("--amplitudes", perturb_grid, "lo:hi:n[:log] or comma list");
    cmd_perturb->add_option("--seed", perturb_seed);
    cmd_perturb->add_option("--out", perturb_out);

    // --- signsearch ---
    std::string sign_path, sign_out, sign_table;
    auto* cmd_sign = app.add_subcommand(
        "signsearch", "exhaustive dihedral-sign search over all 2^E configurations");
    cmd_sign->add_option("mesh", sign_path)->required();
    cmd_sign->add_option("--out", sign_out);
    cmd_sign->add_option("--full-table", sign_table, "write |P| for every sign vector");

    // --- torus-sweep ---
    std::string torus_param = "r", torus_grid_text = "0.1:1.9:19", torus_out;
    double torus_r = 1.0, torus_R = 2.0, torus_h = 1.0;
    auto* cmd_torus =
        app.add_subcommand("torus-sweep", "prismatic-torus loop polynomial over a parameter grid");
    cmd_torus->add_option("--param", torus_param)->check(CLI::IsMember({"r", "R", "h"}));
    cmd_torus->add_option("--grid", torus_grid_text, "lo:hi:n[:log] or comma list");
    cmd_torus->add_option("--r", torus_r);
    cmd_torus->add_option("--R", torus_R);
    cmd_torus->add_option("--h", torus_h);
    cmd_torus->add_option("--out", torus_out);

    // --- scaling ---
    std::string scaling_counts = "8,9,10,11,12", scaling_out;
    std::uint64_t scaling_seed = 1;
    auto* cmd_scaling =
        app.add_subcommand("scaling", "timing and accuracy versus vertex count");
    cmd_scaling->add_option("--vertices", scaling_counts, "comma-separated vertex counts");
    cmd_scaling->add_option("--seed", scaling_seed);
    cmd_scaling->add_option("--out", scaling_out);

    // --- example ---
    std::string example_name, example_out;
    double ex_h = std::sqrt(2.0), ex_z = 1.0, ex_a = 1.0, ex_r = 1.0, ex_R = 2.0,
           ex_height = 1.0;
    auto* cmd_example = app.add_subcommand(
        "example", "emit a canonical configuration and its fixture report");
    cmd_example
        ->add_option("name", example_name,
                     "pancake|tetrahedron|pyramid|double-pyramid|cube|torus|concave6|nonconvex9")
        ->required();
    cmd_example->add_option("--h", ex_h, "pyramid / double-pyramid height");
    cmd_example->add_option("--z", ex_z, "double-pyramid summit drift");
    cmd_example->add_option("--a", ex_a, "cube edge");
    cmd_example->add_option("--r", ex_r, "torus inner radius");
    cmd_example->add_option("--R", ex_R, "torus outer radius");
    cmd_example->add_option("--height", ex_height, "torus height");
    cmd_example->add_option("--out", example_out, "write the mesh file here");

    // --- dual ---
    std::string dual_path, dual_out;
    auto* cmd_dual = app.add_subcommand("dual", "export the dual Ising graph of a mesh");
    cmd_dual->add_option("mesh", dual_path)->required();
    cmd_dual->add_option("--out", dual_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_verify->parsed()) {
            const auto mesh = pz::load_mesh(verify_path);
            return verify_mesh(mesh, std::filesystem::path(verify_path).stem().string(),
                               verify_tol, verify_out, verify_format, threads);
        }

        if (cmd_generate->parsed()) {
            RescaleRange range;
            if (!gen_rescale.empty()) range = parse_rescale(gen_rescale);
            std::filesystem::create_directories(gen_out);
            pz::GenerateManifest manifest;
            manifest.seed = gen_seed;
            manifest.n_vertices = gen_vertices;
            manifest.count = gen_count;
            manifest.distribution = gen_dist;
            manifest.rescale_lo = range.lo;
            manifest.rescale_hi = range.hi;
            manifest.rescalings_per_mesh = gen_rescalings;
            int written = 0, rejected = 0;
            for (int i = 0; i < gen_count; ++i) {
                pz::SamplerConfig sampler;
                sampler.n_points = gen_vertices;
                sampler.seed = pz::derive_seed(gen_seed, (std::uint64_t(i) << 8) | 0);
                sampler.distribution = gen_dist == "uniform" ? pz::Distribution::uniform
                                                             : pz::Distribution::pole_weighted;
                const auto convex = pz::delaunay_sphere(
                    pz::sample_sphere(sampler),
                    pz::derive_seed(gen_seed, (std::uint64_t(i) << 8) | 1));
                for (int j = 0; j <= gen_rescalings; ++j) {
                    pz::EmbeddedMesh mesh = convex;
                    if (j > 0) {
                        pz::RescaleConfig rc;
                        rc.lo = range.lo;
                        rc.hi = range.hi;
                        rc.seed = pz::derive_seed(gen_seed, (std::uint64_t(i) << 8) | (8 + j));
                        mesh = pz::radial_rescale(convex, rc);
                    }
                    const auto validation = pz::validate_closed(mesh);
                    char name[64];
                    std::snprintf(name, sizeof(name), "mesh_s%03d_r%02d.json", i, j);
                    if (!validation.accepted) {
                        ++rejected;
                        std::cout << name << ": rejected (" << validation.reason << ")\n";
                        continue;
                    }
                    pz::save_mesh((std::filesystem::path(gen_out) / name).string(), mesh);
                    ++written;
                }
            }
            std::ofstream mf(std::filesystem::path(gen_out) / "manifest.json");
            mf << pz::manifest_to_json(manifest).dump(1) << "\n";
            std::cout << "wrote " << written << " meshes, rejected " << rejected << ", manifest in "
                      << gen_out << "\n";
            return 0;
        }

        if (cmd_campaign->parsed()) {
            if (!campaign_rescale.empty()) {
                const auto range = parse_rescale(campaign_rescale);
                campaign.rescale_lo = range.lo;
                campaign.rescale_hi = range.hi;
            }
            campaign.eval.threads = threads;
            const auto result = pz::run_zero_campaign(campaign);
            std::ofstream file;
            std::ostream& os = open_out(file, campaign_out);
            pz::write_campaign_csv(os, result);
            std::cerr << "accepted " << result.accepted_count << ", rejected "
                      << result.rejected_count << ", max normalized residual "
                      << pz::fmt_g17(result.max_normalized) << ", max oracle delta "
                      << pz::fmt_g17(result.max_oracle_delta) << "\n";
            if (result.accepted_count == 0 || result.max_normalized > campaign.tolerance ||
                result.max_oracle_delta > 1e-10) {
                std::cerr << "FAIL: campaign bounds violated\n";
                return 1;
            }
            return 0;
        }

        if (cmd_perturb->parsed()) {
            const auto mesh = pz::load_mesh(perturb_path);
            const auto scan =
                pz::run_perturbation_scan(mesh, parse_grid(perturb_grid), perturb_seed);
            std::ofstream file;
            std::ostream& os = open_out(file, perturb_out);
            os << "amplitude,abs\n";
            for (const auto& row : scan.rows)
                os << pz::fmt_g17(row.amplitude) << "," << pz::fmt_g17(row.abs_value) << "\n";
            std::cerr << "log-log slope " << pz::fmt_g17(scan.loglog_slope) << "\n";
            if (scan.loglog_slope < 0.8 || scan.loglog_slope > 1.2) {
                std::cerr << "FAIL: slope outside [0.8, 1.2]\n";
                return 1;
            }
            return 0;
        }

        if (cmd_sign->parsed()) {
            const auto mesh = pz::load_mesh(sign_path);
            const auto result = pz::run_sign_search(mesh, !sign_table.empty());
            std::ofstream file;
            std::ostream& os = open_out(file, sign_out);
            os << "minimizers: " << result.best_configs.size() << "\n";
            os << "best_abs: " << pz::fmt_g17(result.best_value) << "\n";
            for (const auto& config : result.best_configs) {
                os << "config:";
                for (int s : config) os << " " << (s > 0 ? "+1" : "-1");
                os << "\n";
            }
            os << "geometric:";
            for (int s : result.geometric_signs) os << " " << (s > 0 ? "+1" : "-1");
            os << "\nmatches_geometric: " << (result.matches_geometric ? "yes" : "no") << "\n";
            if (!sign_table.empty()) {
                std::ofstream tf(sign_table);
                tf << "config,abs\n";
                for (std::size_t i = 0; i < result.full_table.size(); ++i)
                    tf << i << "," << pz::fmt_g17(result.full_table[i]) << "\n";
            }
            return result.matches_geometric ? 0 : 1;
        }

        if (cmd_torus->parsed()) {
            const pz::TorusAxis axis = torus_param == "r"   ? pz::TorusAxis::r
                                       : torus_param == "R" ? pz::TorusAxis::R
                                                            : pz::TorusAxis::h;
            const auto rows = pz::run_torus_sweep(axis, parse_grid(torus_grid_text),
                                                  pz::torus_spec(torus_r, torus_R, torus_h));
            std::ofstream file;
            std::ostream& os = open_out(file, torus_out);
            os << torus_param << ",re,im,abs,abs_mesh\n";
            double worst = 0.0;
            for (const auto& row : rows) {
                os << pz::fmt_g17(row.value) << "," << pz::fmt_g17(row.closed.real()) << ","
                   << pz::fmt_g17(row.closed.imag()) << "," << pz::fmt_g17(row.abs_closed) << ","
                   << pz::fmt_g17(row.abs_mesh) << "\n";
                worst = std::max(worst, std::abs(row.closed - row.mesh));
            }
            if (worst > 1e-8) {
                std::cerr << "FAIL: closed form and mesh pipeline disagree (" << worst << ")\n";
                return 1;
            }
            return 0;
        }

        if (cmd_scaling->parsed()) {
            std::vector<int> counts;
            for (double v : parse_grid(scaling_counts)) counts.push_back(static_cast<int>(v));
            const auto study = pz::run_scaling_study(counts, scaling_seed);
            std::ofstream file;
            std::ostream& os = open_out(file, scaling_out);
            os << "vertices,faces,median_normalized,median_seconds\n";
            for (const auto& row : study.rows)
                os << row.vertices << "," << row.faces << ","
                   << pz::fmt_g17(row.median_normalized) << "," << pz::fmt_g17(row.median_seconds)
                   << "\n";
            std::cerr << "log-time slope " << pz::fmt_g17(study.log_time_slope) << ", R^2 "
                      << pz::fmt_g17(study.log_time_r2) << "\n";
            return 0;
        }

        if (cmd_example->parsed()) {
            pz::EmbeddedMesh mesh;
            std::optional<pz::CanonicalSpec> spec;
            if (example_name == "pancake") spec = pz::pancake_spec();
            else if (example_name == "tetrahedron") spec = pz::tetrahedron_spec();
            else if (example_name == "pyramid") spec = pz::pyramid_spec(ex_h);
            else if (example_name == "double-pyramid") spec = pz::double_pyramid_spec(ex_h, ex_z);
            else if (example_name == "cube") spec = pz::cube_spec(ex_a);
            else if (example_name == "torus") spec = pz::torus_spec(ex_r, ex_R, ex_height);
            else if (example_name == "concave6") mesh = pz::concave_pair_fixture();
            else if (example_name == "nonconvex9") mesh = pz::perturbation_fixture();
            else throw pz::InvalidParameters("unknown example '" + example_name + "'");
            if (spec) mesh = pz::build_canonical(*spec);
            if (!example_out.empty()) pz::save_mesh(example_out, mesh);

            auto [graph, records] = pz::build_dual(mesh);
            const auto Y = pz::geometric_couplings(graph, records, +1);
            if (spec) {
                const auto names = pz::class_names(*spec);
                const auto ref = pz::reference_couplings(*spec);
                std::cout << "couplings:\n";
                for (std::size_t c = 0; c < names.size(); ++c)
                    std::cout << "  " << names[c] << ": " << pz::fmt_g17(ref[c].real()) << " "
                              << pz::fmt_g17(ref[c].imag()) << "\n";
                const auto closed = pz::reference_polynomial(*spec, ref);
                std::cout << "closed_form: " << pz::fmt_g17(closed.real()) << " "
                          << pz::fmt_g17(closed.imag()) << "\n";
            }
            const auto rep = pz::loop_polynomial_spin_sum(graph, Y);
            pz::write_report(std::cout, example_name, rep);
            if (mesh.genus_hint == 0 && rep.normalized_residual > 1e-9) {
                std::cerr << "FAIL: expected a zero, normalized residual "
                          << rep.normalized_residual << "\n";
                return 1;
            }
            return 0;
        }

        if (cmd_dual->parsed()) {
            const auto mesh = pz::load_mesh(dual_path);
            auto [graph, records] = pz::build_dual(mesh);
            std::ofstream file;
            std::ostream& os = open_out(file, dual_out);
            pz::write_graph(os, graph);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
