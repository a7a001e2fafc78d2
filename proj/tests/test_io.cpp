#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "polyzero/canonical.hpp"
#include "polyzero/mesh_io.hpp"

using namespace polyzero;
using Catch::Approx;

TEST_CASE("canonical mesh document round trip") {
    const auto mesh = build_canonical(double_pyramid_spec(1.3, 2.1));
    std::stringstream ss;
    write_mesh(ss, mesh);
    const auto back = read_mesh(ss);
    REQUIRE(back.vertex_count() == mesh.vertex_count());
    CHECK(back.faces == mesh.faces);
    CHECK(back.genus_hint == 0);
    for (int i = 0; i < mesh.vertex_count(); ++i)
        CHECK(norm(back.vertices[i] - mesh.vertices[i]) == 0.0);  // exact JSON doubles
}

TEST_CASE("torus document keeps its genus") {
    const auto torus = build_canonical(torus_spec(1, 2, 1));
    std::stringstream ss;
    write_mesh(ss, torus);
    CHECK(read_mesh(ss).genus_hint == 1);
}

TEST_CASE("bad documents are rejected") {
    std::stringstream missing("{\"vertices\": [[0,0,0]]}");
    CHECK_THROWS_AS(read_mesh(missing), IoError);
    std::stringstream broken("{\"vertices\": [[0,0,0],[1,0,0],[0,1,0]], \"faces\": [[0,1,2]]}");
    CHECK_THROWS_AS(read_mesh(broken), Error);  // open surface fails validation
    std::stringstream garbage("not json");
    CHECK_THROWS_AS(read_mesh(garbage), IoError);
}

TEST_CASE("OFF import with orientation repair") {
    // tetrahedron with one face wound the wrong way and globally inverted
    const std::string off =
        "OFF\n4 4 6\n"
        "0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
        "3 0 1 2\n3 0 1 3\n3 0 2 3\n3 1 2 3\n";
    std::stringstream ss(off);
    const auto mesh = read_mesh_off(ss);
    CHECK(mesh.vertex_count() == 4);
    CHECK(mesh.face_count() == 4);
    CHECK(mesh.genus_hint == 0);
    CHECK(enclosed_volume(mesh) == Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK_NOTHROW(collect_edges(mesh));
}

TEST_CASE("OFF import without the header keyword") {
    const std::string off =
        "4 4 6\n"
        "0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
        "3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n";
    std::stringstream ss(off);
    CHECK(read_mesh_off(ss).face_count() == 4);
}

TEST_CASE("generate manifest round trip") {
    GenerateManifest m;
    m.seed = 777;
    m.n_vertices = 13;
    m.count = 10;
    m.distribution = "pole-weighted";
    m.rescale_lo = 1.0;
    m.rescale_hi = 4.0;
    m.rescalings_per_mesh = 9;
    const auto back = manifest_from_json(manifest_to_json(m));
    CHECK(back.seed == 777);
    CHECK(back.n_vertices == 13);
    CHECK(back.count == 10);
    CHECK(back.distribution == "pole-weighted");
    CHECK(back.rescale_hi == 4.0);
    CHECK(back.rescalings_per_mesh == 9);
}
