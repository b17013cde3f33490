#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dynflow/graph.hpp"

namespace dynflow {

// Gaussian elimination of one vertex: v is removed and every neighbor pair
// (a,b) gains conductance w_a*w_b/W, W being v's total incident conductance.
// The returned graph carries merged (summed) parallel conductances.
WeightedGraph eliminate_vertex(const WeightedGraph& g, VertexId v);

struct SchurResult {
    std::vector<VertexId> terminals;        // sorted
    WeightedGraph graph;                    // conductance mode, shared id space
    std::vector<VertexId> elimination_order;
};

// Eliminates all non-terminals (min-degree order, ties by vertex id).
// Terminal-pair effective resistances are preserved exactly; components
// containing no terminal vanish.
SchurResult exact_schur(const WeightedGraph& g, std::vector<VertexId> terminals);

// Edge-list core used by the dynamic engines (avoids per-call graph copies).
std::vector<Edge> schur_complement_edges(int n, std::span<const Edge> edges,
                                         std::span<const VertexId> terminals,
                                         std::vector<VertexId>* order = nullptr);

struct SparsifierCertificate {
    double eps = 0.0;
    double delta = 0.0;
    long long sample_count = 0;  // ceil(C_s * k * eps^-2 * ln(n/delta))
    uint64_t seed = 0;
    int input_edges = 0;         // after merging parallels
    int output_edges = 0;
};

struct SparsifyOptions {
    double sampling_constant = 4.0;  // C_s
    // k in the sample-count formula; <= 0 means "support size of the input".
    int budget_vertices = 0;
    // n in the ln(n/delta) term; <= 0 means "the graph's own vertex count".
    int ambient_vertices = 0;
};

// Spectral sparsification by effective-resistance sampling. Edges whose
// expected sample count is >= 1 are kept at their exact weight, the rest are
// drawn with replacement and merged; the output never exceeds the sample
// budget. Bridges (leverage 1) therefore survive exactly, so trees are
// reproduced verbatim.
std::pair<std::vector<Edge>, SparsifierCertificate> sparsify_edges(
    int n, std::span<const Edge> edges, double eps, double delta, uint64_t seed,
    const SparsifyOptions& opt = {});

std::pair<WeightedGraph, SparsifierCertificate> sparsify_spectral(
    const WeightedGraph& g, double eps, double delta, uint64_t seed,
    const SparsifyOptions& opt = {});

// sparsify_spectral(exact_schur(g, K)) with the edge budget driven by |K|.
std::pair<WeightedGraph, SparsifierCertificate> approx_schur(
    const WeightedGraph& g, std::vector<VertexId> terminals, double eps, double delta,
    uint64_t seed, const SparsifyOptions& opt = {});

std::pair<std::vector<Edge>, SparsifierCertificate> approx_schur_edges(
    int n, std::span<const Edge> edges, std::span<const VertexId> terminals, double eps,
    double delta, uint64_t seed, const SparsifyOptions& opt = {});

struct SpectralReport {
    double worst_low = 1.0;   // smallest observed ratio x^T L_b x / x^T L_a x
    double worst_high = 1.0;  // largest observed ratio
    int trials = 0;
    int skipped = 0;          // vectors with negligible quadratic form on both sides
    bool pass = false;
};

// Randomized empirical check of (1-eps) x^T L x <= x^T L~ x <= (1+eps) x^T L x.
SpectralReport verify_spectral(const WeightedGraph& a, const WeightedGraph& b, double eps,
                               int trials, uint64_t seed);
SpectralReport verify_spectral_edges(int n, std::span<const Edge> a, std::span<const Edge> b,
                                     double eps, int trials, uint64_t seed);

}  // namespace dynflow
