#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "dynflow/graph.hpp"

namespace dynflow {

// Connected subgraph handed to separator strategies: vertices carry their
// global ids, adjacency is over local indices.
struct LocalGraph {
    std::vector<VertexId> verts;
    std::vector<std::vector<int>> adj;
};

struct SeparatorResult {
    std::vector<int> separator;  // local indices
    std::vector<int> side_a;
    std::vector<int> side_b;
    bool used_fallback = false;
};

using SeparatorFn = std::function<SeparatorResult(const LocalGraph&, uint64_t seed)>;

// Default strategy: BFS levels from a min-degree root; the smallest level
// whose removal leaves both sides <= 2n/3 becomes the separator. Falls back
// to a BFS-order median split when no level qualifies.
SeparatorResult bfs_level_separator(const LocalGraph& lg, uint64_t seed);
// Fallback strategy: balanced bisection along the BFS order.
SeparatorResult bfs_bisection_separator(const LocalGraph& lg, uint64_t seed);

SeparatorResult find_separator(const WeightedGraph& g, uint64_t seed = 0);

struct DivisionConfig {
    int r = 64;
    double c1 = 4.0;    // region-count constant: ell <= c1 * n / r
    double c2 = 8.0;    // boundary constant: sum |bd| <= c2 * n / sqrt(r)
    double c_sep = 4.0; // advisory separator-size constant (validated only)
    uint64_t seed = 0;
    SeparatorFn separator;  // empty -> bfs_level_separator
};

struct Region {
    int id = -1;
    bool live = false;
    std::vector<EdgeId> edges;
    std::unordered_set<VertexId> verts;
    std::unordered_set<VertexId> boundary;
};

struct DivisionCheck {
    std::string name;
    bool pass = true;
    double measured = 0.0;
    double bound = 0.0;
    std::string note;
};

struct DivisionReport {
    bool pass = true;
    std::vector<DivisionCheck> checks;
    std::string to_json() const;
};

// Weak r-division: an exact edge partition into regions of at most r
// vertices, with boundary bookkeeping. A vertex is boundary in a region iff
// it also has edges in some other region.
class RDivision {
public:
    RDivision() = default;

    static RDivision build(const WeightedGraph& g, const DivisionConfig& cfg);

    // Applies a change produced by mutate_edge on the tracked graph and
    // returns the ids of every region whose edge set or boundary changed
    // (dead regions included so callers can drop their sparsifiers).
    std::vector<int> apply_change(const ChangeRecord& rec);

    DivisionReport validate(const WeightedGraph& g) const;

    const DivisionConfig& config() const { return cfg_; }
    int vertex_count() const { return n_; }
    int live_region_count() const { return live_regions_; }
    long long boundary_total() const { return boundary_total_; }
    int updates_since_build() const { return updates_; }
    int region_slots() const { return static_cast<int>(regions_.size()); }

    bool region_live(int id) const {
        return id >= 0 && id < region_slots() && regions_[id].live;
    }
    const Region& region(int id) const { return regions_.at(id); }
    int region_of_edge(EdgeId e) const {
        return e >= 0 && e < static_cast<EdgeId>(edge_region_.size()) ? edge_region_[e] : -1;
    }
    // (region id, incident edge count) pairs; empty for vertices with no edges.
    const std::vector<std::pair<int, int>>& regions_of_vertex(VertexId v) const {
        return vert_regions_.at(v);
    }
    // Lowest live region id containing v, or -1.
    int home_region(VertexId v) const;
    std::vector<int> live_region_ids() const;
    // Sorted boundary vertices of a region (the sparsifier terminal set).
    std::vector<VertexId> boundary_of(int id) const;

private:
    void ensure_edge_slot(EdgeId e);
    int new_region();
    void attach_edge(int region, EdgeId e, VertexId u, VertexId v,
                     std::vector<int>* touched);
    void detach_edge(EdgeId e, std::vector<int>* touched);
    // Membership count maintenance; records regions whose boundary changed.
    void inc_membership(VertexId v, int region, std::vector<int>* touched);
    void dec_membership(VertexId v, int region, std::vector<int>* touched);
    void add_boundary(int region, VertexId v);
    void remove_boundary(int region, VertexId v);

    DivisionConfig cfg_;
    int n_ = 0;
    std::vector<Region> regions_;
    std::vector<int> edge_region_;
    std::vector<int> edge_pos_;
    std::vector<std::vector<std::pair<int, int>>> vert_regions_;
    int live_regions_ = 0;
    long long boundary_total_ = 0;
    int updates_ = 0;
};

// Convenience wrappers matching the operational surface.
RDivision build_rdivision(const WeightedGraph& g, int r, uint64_t seed = 0);
DivisionReport validate_rdivision(const RDivision& d, const WeightedGraph& g);

}  // namespace dynflow
