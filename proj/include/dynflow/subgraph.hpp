#pragma once

#include <cstdint>
#include <vector>

#include "dynflow/engine.hpp"
#include "dynflow/graph.hpp"
#include "dynflow/partition.hpp"

namespace dynflow {

struct SubgraphConfig {
    int r = 64;
    double eps = 0.3;
    uint64_t seed = 0;
    double delta = 0.0;             // 0 -> 1/n^3
    double sampling_constant = 4.0;
    double c1 = 4.0, c2 = 8.0;
};

// Incremental vertex-activation electrical flow: the r-division is built
// once over the full graph and never changes; activating a vertex refreshes
// the sparsifier of every region containing it. Region terminal sets are
// the active members of the static region boundaries, which keeps queries
// exact and the per-activation recomputation count at b(v).
class SubgraphEFlow {
public:
    SubgraphEFlow(WeightedGraph graph, SubgraphConfig cfg);

    void activate(VertexId v);
    bool active(VertexId v) const { return active_.at(v); }
    int active_count() const { return active_count_; }

    double query(VertexId s, VertexId t, int* assembled_vertices = nullptr,
                 int* assembled_edges = nullptr) const;

    // Number of regions whose vertex set contains v (b(v) in the activation
    // cost accounting; 0 for vertices with no edges).
    int regions_containing(VertexId v) const;
    long long sparsifier_calls() const { return sparsifier_calls_; }
    long long activations() const { return activations_; }

    const WeightedGraph& graph() const { return g_; }
    const RDivision& division() const { return division_; }
    double eps() const { return cfg_.eps; }

private:
    void refresh_region(int region);

    SubgraphConfig cfg_;
    WeightedGraph g_;
    RDivision division_;
    std::vector<bool> active_;
    std::vector<RegionArtifact> artifacts_;
    int active_count_ = 0;
    long long activations_ = 0;
    long long sparsifier_calls_ = 0;
    uint64_t refresh_counter_ = 0;
    double delta_ = 0.0;
};

// OMv hardness gadget: row vertices 0..n1-1, column vertices n1..n1+n2-1,
// s = n1+n2, t = n1+n2+1; unit edges s-r_i, c_j-t always, r_i-c_j iff
// M(i,j) = 1.
struct OMvInstance {
    int n1 = 0, n2 = 0;
    std::vector<std::vector<uint8_t>> matrix;
    WeightedGraph gadget;
    VertexId s = -1, t = -1;

    VertexId row_vertex(int i) const { return i; }
    VertexId col_vertex(int j) const { return n1 + j; }
};

OMvInstance omv_build(std::vector<std::vector<uint8_t>> matrix);

// Fresh activation engine over the gadget with s and t already active.
SubgraphEFlow make_omv_engine(const OMvInstance& inst, int r, double eps, uint64_t seed);

// Activates the rows/columns selected by u and v and decides u^T M v by the
// finiteness of the s-t energy query.
int omv_answer(const OMvInstance& inst, const std::vector<uint8_t>& u,
               const std::vector<uint8_t>& v, SubgraphEFlow& engine);

}  // namespace dynflow
