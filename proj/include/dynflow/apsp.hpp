#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dynflow/engine.hpp"
#include "dynflow/graph.hpp"

namespace dynflow {

// Single-source shortest path lengths (edge weights as lengths, parallel
// edges resolved by minimum automatically); unreachable -> +inf.
std::vector<double> dijkstra(int n, std::span<const Edge> edges, VertexId source);
double dijkstra_dist(int n, std::span<const Edge> edges, VertexId s, VertexId t);
double dijkstra_dist(const WeightedGraph& g, VertexId s, VertexId t);

// Removes v, adding for each neighbor pair (a,b) the candidate length
// w(a,v)+w(v,b); parallel edges keep only the smallest weight. Terminal
// distances are unaffected.
WeightedGraph eliminate_nonterminal_dist(const WeightedGraph& g, VertexId v);

// Eliminates every non-terminal; the resulting graph on K carries exactly
// the original pairwise terminal distances (disconnected pairs omitted).
WeightedGraph distance_closure(const WeightedGraph& g, std::vector<VertexId> terminals);
std::vector<Edge> distance_closure_edges(int n, std::span<const Edge> edges,
                                         std::span<const VertexId> terminals);

// Deterministic greedy (2q-1)-spanner: edges scanned in ascending weight,
// kept iff the current spanner distance exceeds (2q-1) times the weight.
WeightedGraph greedy_spanner(const WeightedGraph& h, int q);
std::vector<Edge> greedy_spanner_edges(int n, std::span<const Edge> edges, int q);

// greedy_spanner(distance_closure(g, K), q): terminal distances within
// [d_G, (2q-1) d_G].
WeightedGraph distance_sparsify(const WeightedGraph& g, std::vector<VertexId> terminals, int q);
std::vector<Edge> distance_sparsify_edges(int n, std::span<const Edge> edges,
                                          std::span<const VertexId> terminals, int q);

struct ApspConfig {
    int r = 64;
    int q = 1;
    uint64_t seed = 0;
    double c_t = 1.0;
    int t_div = 0;
    double c1 = 4.0, c2 = 8.0;
};

// Dynamic all-pairs shortest paths: per-region distance sparsifiers over
// the shared lifecycle; queries run Dijkstra on the assembled union graph.
class ApspStructure {
public:
    ApspStructure(WeightedGraph graph, ApspConfig cfg);

    void update(const EdgeAction& action) { engine_.apply(action); }
    double query(VertexId s, VertexId t, int* assembled_vertices = nullptr,
                 int* assembled_edges = nullptr) const;

    int stretch_q() const { return cfg_.q; }
    const RegionEngine& engine() const { return engine_; }
    const WeightedGraph& graph() const { return engine_.graph(); }

private:
    ApspConfig cfg_;
    RegionEngine engine_;
};

}  // namespace dynflow
