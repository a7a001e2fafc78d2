#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyzero/errors.hpp"
#include "polyzero/mesh.hpp"
#include "polyzero/meshgen.hpp"

namespace polyzero {

/// Canonical mesh document: vertices as [x,y,z] triples, faces as 0-based
/// index cycles in outward order, optional genus (default 0).
inline nlohmann::json mesh_to_json(const EmbeddedMesh& mesh) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : mesh.vertices) j["vertices"].push_back({v.x, v.y, v.z});
    j["faces"] = mesh.faces;
    j["genus"] = mesh.genus_hint;
    return j;
}

inline EmbeddedMesh mesh_from_json(const nlohmann::json& j) {
    EmbeddedMesh mesh;
    if (!j.contains("vertices") || !j.contains("faces"))
        throw IoError("mesh document needs 'vertices' and 'faces'");
    for (const auto& v : j.at("vertices")) {
        if (!v.is_array() || v.size() != 3) throw IoError("vertex must be an [x,y,z] triple");
        mesh.vertices.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
    }
    mesh.faces = j.at("faces").get<std::vector<std::vector<int>>>();
    mesh.genus_hint = j.value("genus", 0);
    check_mesh(mesh);
    return mesh;
}

inline void write_mesh(std::ostream& os, const EmbeddedMesh& mesh) {
    os << mesh_to_json(mesh).dump(1) << "\n";
}

inline EmbeddedMesh read_mesh(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("bad mesh document: ") + e.what());
    }
    return mesh_from_json(j);
}

/// OFF import. Orientation repair runs on load: face orientations are made
/// mutually consistent and globally outward; genus comes from the Euler
/// characteristic.
inline EmbeddedMesh read_mesh_off(std::istream& is) {
    std::string tok;
    if (!(is >> tok)) throw IoError("empty OFF stream");
    long nv = 0, nf = 0, ne = 0;
    if (tok == "OFF") {
        if (!(is >> nv >> nf >> ne)) throw IoError("bad OFF counts");
    } else {
        nv = std::stol(tok);
        if (!(is >> nf >> ne)) throw IoError("bad OFF counts");
    }
    if (nv < 3 || nf < 2) throw IoError("OFF mesh too small");
    EmbeddedMesh mesh;
    mesh.vertices.resize(nv);
    for (long i = 0; i < nv; ++i)
        if (!(is >> mesh.vertices[i].x >> mesh.vertices[i].y >> mesh.vertices[i].z))
            throw IoError("bad OFF vertex line");
    mesh.faces.resize(nf);
    for (long f = 0; f < nf; ++f) {
        int k = 0;
        if (!(is >> k) || k < 3) throw IoError("bad OFF face line");
        mesh.faces[f].resize(k);
        for (int i = 0; i < k; ++i)
            if (!(is >> mesh.faces[f][i])) throw IoError("bad OFF face index");
    }
    repair_orientation(mesh);
    const int chi = euler_characteristic(mesh);
    if (chi % 2 != 0) throw IoError("OFF mesh has odd Euler characteristic");
    mesh.genus_hint = (2 - chi) / 2;
    check_mesh(mesh);
    return mesh;
}

inline EmbeddedMesh load_mesh(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".off") return read_mesh_off(is);
    return read_mesh(is);
}

inline void save_mesh(const std::string& path, const EmbeddedMesh& mesh) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path);
    write_mesh(os, mesh);
}

/// Replay manifest for a generation run.
struct GenerateManifest {
    std::uint64_t seed = 1;
    int n_vertices = 0;
    int count = 1;
    std::string distribution = "uniform";
    double rescale_lo = 1.0;
    double rescale_hi = 1.0;
    int rescalings_per_mesh = 0;
};

inline nlohmann::json manifest_to_json(const GenerateManifest& m) {
    return {{"seed", m.seed},
            {"n_vertices", m.n_vertices},
            {"count", m.count},
            {"distribution", m.distribution},
            {"rescale", {m.rescale_lo, m.rescale_hi}},
            {"rescalings_per_mesh", m.rescalings_per_mesh}};
}

inline GenerateManifest manifest_from_json(const nlohmann::json& j) {
    GenerateManifest m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.n_vertices = j.at("n_vertices").get<int>();
    m.count = j.value("count", 1);
    m.distribution = j.value("distribution", "uniform");
    if (j.contains("rescale")) {
        m.rescale_lo = j["rescale"][0].get<double>();
        m.rescale_hi = j["rescale"][1].get<double>();
    }
    m.rescalings_per_mesh = j.value("rescalings_per_mesh", 0);
    return m;
}

}  // namespace polyzero
