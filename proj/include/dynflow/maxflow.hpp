#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dynflow/engine.hpp"
#include "dynflow/graph.hpp"

namespace dynflow {

// Exact undirected s-t max flow (Dinic); 0 when disconnected.
double max_flow(int n, std::span<const Edge> edges, VertexId s, VertexId t);
double max_flow(const WeightedGraph& g, VertexId s, VertexId t);

// Minimum capacity over cuts (U, V\U) with U∩K in {S, K\S}; computed by
// contracting S and K\S and running max flow.
double terminal_cut_value(const WeightedGraph& g, const std::vector<VertexId>& K,
                          const std::vector<VertexId>& S);
double terminal_cut_value(int n, std::span<const Edge> edges, const std::vector<VertexId>& K,
                          const std::vector<VertexId>& S);

// All 2^{|K|-1}-1 terminal bipartition values; the mask's bit i means K[i]
// lies on the side of K[0] (bit 0 always set).
std::vector<std::pair<uint32_t, double>> terminal_cut_profile(int n, std::span<const Edge> edges,
                                                              const std::vector<VertexId>& K);

enum class CutStrategy { identity, contract_exact };

struct CutSparsifier {
    std::vector<VertexId> terminals;
    WeightedGraph graph;       // capacity mode, shared id space
    double quality = 1.0;      // declared q
    CutStrategy strategy = CutStrategy::identity;
    bool fell_back = false;    // contract-exact requested but |K| > k_max
};

// identity: the graph itself, q = 1. contract-exact: repeatedly contracts
// an edge with a non-terminal endpoint whenever doing so provably leaves
// every terminal cut value unchanged; q = 1 with certified exactness.
CutSparsifier cut_sparsify(const WeightedGraph& g, std::vector<VertexId> K, CutStrategy strategy,
                           int k_max = 10);

// Exhaustive audit: verifies mincut_G <= mincut_H for every bipartition
// (throws on violation) and returns the measured quality max mincut_H/mincut_G.
double cut_quality_audit(const WeightedGraph& g, const std::vector<VertexId>& K,
                         const CutSparsifier& h, double tol = 1e-9);

struct MaxFlowConfig {
    int r = 64;
    uint64_t seed = 0;
    double c_t = 1.0;
    int t_div = 0;
    CutStrategy strategy = CutStrategy::identity;
    int k_max = 10;
    double c1 = 4.0, c2 = 8.0;
};

// Dynamic all-pairs max flow: the electrical-flow lifecycle with per-region
// cut sparsifiers; queries run the exact solver on the assembled union.
class MaxFlowStructure {
public:
    MaxFlowStructure(WeightedGraph graph, MaxFlowConfig cfg);

    void update(const EdgeAction& action) { engine_.apply(action); }
    double query(VertexId s, VertexId t, int* assembled_vertices = nullptr,
                 int* assembled_edges = nullptr) const;

    // Largest declared quality among live region sparsifiers (1 for the
    // shipped strategies).
    double declared_quality() const { return 1.0; }
    const RegionEngine& engine() const { return engine_; }
    const WeightedGraph& graph() const { return engine_.graph(); }

private:
    MaxFlowConfig cfg_;
    RegionEngine engine_;
};

}  // namespace dynflow
