#pragma once

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "polyzero/errors.hpp"
#include "polyzero/geometry.hpp"
#include "polyzero/graph.hpp"
#include "polyzero/rng.hpp"

namespace polyzero {

using Complex = std::complex<double>;

/// Per-link complex couplings Y_l (Y = tanh y for raw couplings y).
using CouplingVector = std::vector<Complex>;

enum class Method { spin_sum, even_subgraph };

inline const char* method_name(Method m) {
    return m == Method::spin_sum ? "spin_sum" : "even_subgraph";
}

enum class Summation {
    pairwise,     // fixed binary-tree pairwise summation over the config index
    compensated,  // Neumaier accumulation in the same fixed index order
};

struct EvalOptions {
    int max_nodes = 32;
    int max_cycle_dim = 24;
    unsigned threads = 0;  // 0 = hardware concurrency
    Summation summation = Summation::pairwise;
};

/// Result of one loop-polynomial (or partition-function) evaluation.
/// magnitude_scale is the sum of absolute values of all contributing terms,
/// making normalized_residual = |value| / magnitude_scale scale-free.
struct EvaluationReport {
    Complex value{};
    double magnitude_scale = 0.0;
    double abs_value = 0.0;
    double normalized_residual = 0.0;
    Method method = Method::spin_sum;
    double elapsed_seconds = 0.0;
    int nodes = 0;
    int links = 0;
};

namespace detail {

struct Acc {
    Complex value{};
    double abs = 0.0;
    Acc& operator+=(const Acc& o) {
        value += o.value;
        abs += o.abs;
        return *this;
    }
};

// Binary-counter pairwise accumulator: adding 2^m leaves in index order
// produces exactly the complete-binary-tree sum, independent of call site.
struct PairwiseAcc {
    Acc level[64];
    std::uint64_t occupied = 0;

    void add(Acc x) {
        int k = 0;
        while (occupied & (1ull << k)) {
            x += level[k];
            occupied &= ~(1ull << k);
            ++k;
        }
        level[k] = x;
        occupied |= (1ull << k);
    }
    Acc total() const {
        Acc t{};
        for (int k = 0; k < 64; ++k)
            if (occupied & (1ull << k)) t += level[k];
        return t;
    }
};

struct NeumaierAcc {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double total() const { return sum + comp; }
};

struct CompensatedAcc {
    NeumaierAcc re, im, abs;
    void add(const Acc& x) {
        re.add(x.value.real());
        im.add(x.value.imag());
        abs.add(x.abs);
    }
    Acc total() const { return {{re.total(), im.total()}, abs.total()}; }
};

struct LevelFactor {
    int other = -1;  // higher endpoint of the link
    Complex plus{};  // factor when the two spins agree
    Complex minus{};  // factor when they differ
};

/// Sums prod_l f_l over all 2^N spin configurations, together with the sum of
/// absolute values of the products. f_l is `plus[l]` when the endpoint spins
/// agree and `minus[l]` otherwise.
///
/// Determinism contract: configurations are enumerated in index order (spin
/// of node k = bit k), summed pairwise over fixed power-of-two blocks whose
/// layout depends only on the node count. Threads only pick which block to
/// compute, so the result is bit-identical for any worker count.
inline Acc enumerate_spin_products(int n_nodes, const std::vector<Link>& links,
                                   const std::vector<Complex>& plus,
                                   const std::vector<Complex>& minus, const EvalOptions& opts) {
    for (const auto& l : links)
        if (l.a == l.b) throw Error("self-loops are not supported by the spin sum");

    // Spin of node 0 is folded analytically: one iteration handles the
    // bit-0 pair of configurations at once.
    std::vector<std::vector<LevelFactor>> levels(n_nodes);
    for (std::size_t i = 0; i < links.size(); ++i) {
        const int lo = std::min(links[i].a, links[i].b);
        const int hi = std::max(links[i].a, links[i].b);
        levels[lo].push_back({hi, plus[i], minus[i]});
    }

    const int qbits = n_nodes - 1;  // nodes 1..N-1 ride the pair index q
    // Block layout fixed by the node count alone.
    const int split = qbits <= 14 ? 0 : std::min(10, qbits - 14);
    const std::uint64_t n_blocks = 1ull << split;
    const std::uint64_t block_len = 1ull << (qbits - split);

    std::vector<Acc> block_sums(n_blocks);

    auto run_block = [&](std::uint64_t bi) {
        const std::uint64_t q0 = bi * block_len;
        std::vector<char> neg(n_nodes, 0);  // spin sign per node; node 0 folded
        for (int k = 1; k < n_nodes; ++k) neg[k] = (q0 >> (k - 1)) & 1;

        std::vector<Complex> parts(n_nodes + 1);
        parts[n_nodes] = Complex{1.0, 0.0};
        auto recompute = [&](int k) {
            Complex p = parts[k + 1];
            for (const auto& lf : levels[k])
                p *= (neg[k] ^ neg[lf.other]) ? lf.minus : lf.plus;
            parts[k] = p;
        };
        for (int k = n_nodes - 1; k >= 1; --k) recompute(k);

        PairwiseAcc pair_acc;
        CompensatedAcc comp_acc;
        const bool compensated = opts.summation == Summation::compensated;

        for (std::uint64_t q = q0; q < q0 + block_len; ++q) {
            // Both spin values of node 0 against the fixed rest.
            Complex gp{1.0, 0.0}, gm{1.0, 0.0};
            for (const auto& lf : levels[0]) {
                if (neg[lf.other]) {
                    gp *= lf.minus;
                    gm *= lf.plus;
                } else {
                    gp *= lf.plus;
                    gm *= lf.minus;
                }
            }
            const Complex base = parts[1];
            const double base_norm = std::norm(base);
            Acc leaf;
            leaf.value = base * (gp + gm);
            leaf.abs = std::sqrt(base_norm * std::norm(gp)) + std::sqrt(base_norm * std::norm(gm));
            if (compensated)
                comp_acc.add(leaf);
            else
                pair_acc.add(leaf);

            if (q + 1 < q0 + block_len) {
                const std::uint64_t diff = q ^ (q + 1);
                const int hb = 63 - std::countl_zero(diff);
                for (int bit = 0; bit <= hb; ++bit) neg[bit + 1] ^= 1;
                for (int k = hb + 1; k >= 1; --k) recompute(k);
            }
        }
        block_sums[bi] = compensated ? comp_acc.total() : pair_acc.total();
    };

    unsigned threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, n_blocks));
    if (threads == 1) {
        for (std::uint64_t bi = 0; bi < n_blocks; ++bi) run_block(bi);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::uint64_t bi = next.fetch_add(1); bi < n_blocks; bi = next.fetch_add(1))
                    run_block(bi);
            });
        for (auto& th : pool) th.join();
    }

    // Cross-block reduction in fixed index order.
    if (opts.summation == Summation::compensated) {
        CompensatedAcc total;
        for (const auto& b : block_sums) total.add(b);
        return total.total();
    }
    std::function<Acc(std::uint64_t, std::uint64_t)> combine =
        [&](std::uint64_t lo, std::uint64_t hi) -> Acc {
        if (hi - lo == 1) return block_sums[lo];
        const std::uint64_t mid = lo + (hi - lo) / 2;
        Acc l = combine(lo, mid);
        l += combine(mid, hi);
        return l;
    };
    return combine(0, n_blocks);
}

}  // namespace detail

/// Loop polynomial by exhaustive spin enumeration:
/// P = 2^-N sum_sigma prod_l (1 + sigma_a sigma_b Y_l).
inline EvaluationReport loop_polynomial_spin_sum(const IsingGraph& g, const CouplingVector& Y,
                                                 const EvalOptions& opts = {}) {
    if (g.node_count > opts.max_nodes)
        throw TooManyNodes("graph has " + std::to_string(g.node_count) +
                           " nodes, limit is " + std::to_string(opts.max_nodes));
    if (static_cast<int>(Y.size()) != g.link_count())
        throw ShapeMismatch("coupling vector length does not match link count");
    const auto t0 = std::chrono::steady_clock::now();

    EvaluationReport rep;
    rep.method = Method::spin_sum;
    rep.nodes = g.node_count;
    rep.links = g.link_count();
    if (g.node_count == 0) throw Error("empty graph");

    std::vector<Complex> plus(Y.size()), minus(Y.size());
    for (std::size_t i = 0; i < Y.size(); ++i) {
        plus[i] = Complex{1.0, 0.0} + Y[i];
        minus[i] = Complex{1.0, 0.0} - Y[i];
    }
    const auto acc = detail::enumerate_spin_products(g.node_count, g.links, plus, minus, opts);
    const double scale = std::ldexp(1.0, -g.node_count);
    rep.value = acc.value * scale;
    rep.magnitude_scale = acc.abs * scale;
    rep.abs_value = std::abs(rep.value);
    rep.normalized_residual = rep.abs_value / rep.magnitude_scale;
    rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Loop polynomial as the sum over all even subgraphs (the cycle-space
/// expansion): P = sum_G prod_{l in G} Y_l. Independent oracle for the spin
/// sum; single-threaded, pairwise summation over the subset index.
inline EvaluationReport loop_polynomial_even_subgraphs(const IsingGraph& g,
                                                       const CouplingVector& Y,
                                                       const EvalOptions& opts = {}) {
    if (static_cast<int>(Y.size()) != g.link_count())
        throw ShapeMismatch("coupling vector length does not match link count");
    const auto t0 = std::chrono::steady_clock::now();
    const auto basis = cycle_space_basis(g);
    if (static_cast<int>(basis.size()) > opts.max_cycle_dim)
        throw CycleSpaceTooLarge("cycle space dimension " + std::to_string(basis.size()) +
                                 " exceeds limit " + std::to_string(opts.max_cycle_dim));

    auto monomial = [&](std::uint64_t mask) {
        Complex p{1.0, 0.0};
        while (mask) {
            const int l = std::countr_zero(mask);
            mask &= mask - 1;
            p *= Y[l];
        }
        return p;
    };
    // Recursive pairwise sum over basis-subset indices (bit k = use basis[k]).
    std::function<detail::Acc(std::size_t, std::uint64_t)> sum_from =
        [&](std::size_t k, std::uint64_t mask) -> detail::Acc {
        if (k == basis.size()) {
            const Complex m = monomial(mask);
            return {m, std::abs(m)};
        }
        detail::Acc a = sum_from(k + 1, mask);
        a += sum_from(k + 1, mask ^ basis[k]);
        return a;
    };
    const auto acc = sum_from(0, 0);

    EvaluationReport rep;
    rep.method = Method::even_subgraph;
    rep.nodes = g.node_count;
    rep.links = g.link_count();
    rep.value = acc.value;
    rep.magnitude_scale = acc.abs;
    rep.abs_value = std::abs(rep.value);
    rep.normalized_residual = rep.abs_value / rep.magnitude_scale;
    rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Ising partition function Z = sum_sigma prod_l exp(y_l sigma_a sigma_b)
/// for raw complex couplings y.
inline Complex partition_function(const IsingGraph& g, const CouplingVector& y,
                                  const EvalOptions& opts = {}) {
    if (g.node_count > opts.max_nodes)
        throw TooManyNodes("graph has " + std::to_string(g.node_count) +
                           " nodes, limit is " + std::to_string(opts.max_nodes));
    if (static_cast<int>(y.size()) != g.link_count())
        throw ShapeMismatch("coupling vector length does not match link count");
    std::vector<Complex> plus(y.size()), minus(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        plus[i] = std::exp(y[i]);
        minus[i] = std::exp(-y[i]);
    }
    return detail::enumerate_spin_products(g.node_count, g.links, plus, minus, opts).value;
}

/// Geometric zero ansatz: Y_l = exp(i g s_l theta_l / 2) sqrt(tan(phi_s/2)
/// tan(phi_t/2)), with g the global sign and s_l the convexity sign. For
/// concyclic polygon faces phi holds psi/2, so the factor is tan(psi/4).
inline CouplingVector geometric_couplings(const IsingGraph& g,
                                          const std::vector<EdgeRecord>& records,
                                          int global_sign = +1) {
    if (static_cast<int>(records.size()) != g.link_count())
        throw ShapeMismatch("edge record count does not match link count");
    if (global_sign != +1 && global_sign != -1) throw InvalidParameters("global sign must be +-1");
    CouplingVector Y(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!(r.phi_first > 0.0 && r.phi_first < M_PI && r.phi_second > 0.0 &&
              r.phi_second < M_PI))
            throw AngleOutOfRange("opposite angle outside (0, pi) on edge " + std::to_string(i));
        const double mag = std::sqrt(std::tan(0.5 * r.phi_first) * std::tan(0.5 * r.phi_second));
        Y[i] = std::polar(mag, 0.5 * global_sign * r.convexity_sign * r.dihedral);
    }
    return Y;
}

/// Kramers-Wannier duality map D[Y] = (1 - Y) / (1 + Y); an involution.
inline Complex duality_map(Complex Y) {
    const Complex d = Complex{1.0, 0.0} + Y;
    if (d == Complex{0.0, 0.0}) throw PoleAtMinusOne("duality map has a pole at Y = -1");
    return (Complex{1.0, 0.0} - Y) / d;
}

/// Adds an independent uniform real perturbation in [-a, a] to every link.
inline CouplingVector perturb_couplings(CouplingVector Y, double amplitude, std::mt19937_64& rng) {
    if (amplitude < 0.0) throw InvalidParameters("perturbation amplitude must be >= 0");
    for (auto& y : Y) y += uniform_range(rng, -amplitude, amplitude);
    return Y;
}

inline CouplingVector tanh_couplings(const CouplingVector& y) {
    CouplingVector Y(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) Y[i] = std::tanh(y[i]);
    return Y;
}

inline CouplingVector atanh_couplings(const CouplingVector& Y) {
    CouplingVector y(Y.size());
    for (std::size_t i = 0; i < Y.size(); ++i) {
        if (Y[i] == Complex{1.0, 0.0} || Y[i] == Complex{-1.0, 0.0})
            throw InvalidParameters("atanh undefined at Y = +-1");
        y[i] = std::atanh(Y[i]);
    }
    return y;
}

inline std::string fmt_g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// Structured text report, one evaluation per stanza.
inline void write_report(std::ostream& os, const std::string& graph_id,
                         const EvaluationReport& rep) {
    os << "graph: " << graph_id << "\n"
       << "nodes: " << rep.nodes << "\n"
       << "links: " << rep.links << "\n"
       << "method: " << method_name(rep.method) << "\n"
       << "value: " << fmt_g17(rep.value.real()) << " " << fmt_g17(rep.value.imag()) << "\n"
       << "abs: " << fmt_g17(rep.abs_value) << "\n"
       << "magnitude_scale: " << fmt_g17(rep.magnitude_scale) << "\n"
       << "normalized_residual: " << fmt_g17(rep.normalized_residual) << "\n"
       << "seconds: " << fmt_g17(rep.elapsed_seconds) << "\n";
}

inline const char* evaluation_csv_header() {
    return "mesh_id,vertices,faces,method,re,im,abs,normalized,seconds";
}

inline void append_evaluation_csv(std::ostream& os, const std::string& mesh_id, int vertices,
                                  int faces, const EvaluationReport& rep) {
    os << mesh_id << "," << vertices << "," << faces << "," << method_name(rep.method) << ","
       << fmt_g17(rep.value.real()) << "," << fmt_g17(rep.value.imag()) << ","
       << fmt_g17(rep.abs_value) << "," << fmt_g17(rep.normalized_residual) << ","
       << fmt_g17(rep.elapsed_seconds) << "\n";
}

}  // namespace polyzero
