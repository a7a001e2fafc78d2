#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "polyzero/errors.hpp"
#include "polyzero/geometry.hpp"
#include "polyzero/mesh.hpp"

namespace polyzero {

/// One Ising link; endpoints are unordered (the weight is symmetric in the
/// two spins). Parallel links are allowed and carry distinct link ids.
struct Link {
    int a = -1;
    int b = -1;
};

/// A finite graph carrying the Ising model: nodes are spins, links carry
/// couplings. Dual graphs of meshes have one node per face.
struct IsingGraph {
    int node_count = 0;
    std::vector<Link> links;

    int link_count() const { return static_cast<int>(links.size()); }
};

inline std::vector<int> node_degrees(const IsingGraph& g) {
    std::vector<int> deg(g.node_count, 0);
    for (const auto& l : g.links) {
        ++deg[l.a];
        ++deg[l.b];
        if (l.a == l.b) ++deg[l.a];  // a self-loop counts twice
    }
    return deg;
}

inline bool is_connected(const IsingGraph& g) {
    if (g.node_count == 0) return false;
    std::vector<std::vector<int>> adj(g.node_count);
    for (const auto& l : g.links) {
        adj[l.a].push_back(l.b);
        adj[l.b].push_back(l.a);
    }
    std::vector<char> seen(g.node_count, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    return count == g.node_count;
}

/// Builds the dual Ising graph of a mesh: one node per face, one link per
/// edge, links in collect_edges order so link i pairs with edge record i.
inline std::pair<IsingGraph, std::vector<EdgeRecord>> build_dual(const EmbeddedMesh& mesh) {
    check_mesh(mesh);
    const auto records = build_edge_records(mesh);
    IsingGraph g;
    g.node_count = mesh.face_count();
    g.links.reserve(records.size());
    for (const auto& r : records) g.links.push_back({r.face_first, r.face_second});
    if (!is_connected(g)) throw InvalidMesh("dual graph is not connected");
    return {g, records};
}

/// Basis of the binary cycle space as link bitmasks; dimension L - N + 1 for
/// a connected graph. Every element is an even subgraph.
inline std::vector<std::uint64_t> cycle_space_basis(const IsingGraph& g) {
    if (g.link_count() > 64) throw CycleSpaceTooLarge("more than 64 links");
    if (!is_connected(g)) throw Error("cycle space basis requires a connected graph");

    // BFS spanning tree; path_mask[v] = links along the tree path root -> v.
    std::vector<std::vector<std::pair<int, int>>> adj(g.node_count);  // (neighbour, link id)
    for (int i = 0; i < g.link_count(); ++i) {
        adj[g.links[i].a].push_back({g.links[i].b, i});
        if (g.links[i].a != g.links[i].b) adj[g.links[i].b].push_back({g.links[i].a, i});
    }
    std::vector<std::uint64_t> path_mask(g.node_count, 0);
    std::vector<char> in_tree_link(g.link_count(), 0);
    std::vector<char> seen(g.node_count, 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const int u = queue[qi];
        for (auto [v, l] : adj[u]) {
            if (seen[v]) continue;
            seen[v] = 1;
            in_tree_link[l] = 1;
            path_mask[v] = path_mask[u] ^ (1ull << l);
            queue.push_back(v);
        }
    }

    std::vector<std::uint64_t> basis;
    for (int l = 0; l < g.link_count(); ++l) {
        if (in_tree_link[l]) continue;
        basis.push_back((1ull << l) ^ path_mask[g.links[l].a] ^ path_mask[g.links[l].b]);
    }
    return basis;
}

/// Degree parity test for a link subset.
inline bool is_even_subgraph(const IsingGraph& g, std::uint64_t mask) {
    std::vector<int> deg(g.node_count, 0);
    for (int l = 0; l < g.link_count(); ++l)
        if (mask & (1ull << l)) {
            deg[g.links[l].a] ^= 1;
            deg[g.links[l].b] ^= 1;
        }
    for (int d : deg)
        if (d) return false;
    return true;
}

/// Lists all even subgraphs as link masks (2^dim of them); for small graphs
/// and tests. Throws CycleSpaceTooLarge past `max_dim`.
inline std::vector<std::uint64_t> enumerate_even_subgraphs(const IsingGraph& g, int max_dim = 24) {
    const auto basis = cycle_space_basis(g);
    if (static_cast<int>(basis.size()) > max_dim)
        throw CycleSpaceTooLarge("cycle space dimension " + std::to_string(basis.size()) +
                                 " exceeds limit " + std::to_string(max_dim));
    std::vector<std::uint64_t> out;
    out.reserve(std::size_t{1} << basis.size());
    out.push_back(0);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] ^ basis[k]);
    }
    return out;
}

/// Plain text export: node count plus one line per link.
inline void write_graph(std::ostream& os, const IsingGraph& g) {
    os << "polyzero-graph 1\n";
    os << "nodes " << g.node_count << "\n";
    os << "links " << g.link_count() << "\n";
    for (int i = 0; i < g.link_count(); ++i)
        os << i << " " << g.links[i].a << " " << g.links[i].b << "\n";
}

}  // namespace polyzero
