#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "dynflow/graph.hpp"
#include "dynflow/partition.hpp"
#include "dynflow/schur.hpp"

namespace dynflow {

// Per-region compressed graph kept alongside the division.
struct RegionArtifact {
    bool valid = false;
    std::vector<Edge> edges;
    std::vector<VertexId> terminals;
    SparsifierCertificate cert;
};

// Builds a region's compressed stand-in; (base graph, region edge ids,
// terminal set, seed) -> (edges on the terminals, certificate).
using SparsifierFn = std::function<std::pair<std::vector<Edge>, SparsifierCertificate>(
    const WeightedGraph&, const std::vector<EdgeId>&, const std::vector<VertexId>&, uint64_t)>;

struct EngineConfig {
    DivisionConfig division;
    uint64_t seed = 0;
    double c_t = 1.0;   // rebuild period T_div = c_t * n / r, rounded to 4*Delta
    int t_div = 0;      // explicit override of the raw period (before rounding)
    bool auto_rebuild = true;  // false when a scheduler drives the lifecycle
};

// Region structure shared by the dynamic modes: a graph, its r-division,
// one artifact per live region, and the periodic-rebuild lifecycle. A
// rebuild reconstructs everything from the graph snapshot taken at the
// middle of the interval and replays the logged tail, which is exactly the
// state the two-copy worst-case scheduler swaps in.
class RegionEngine {
public:
    struct Stats {
        long long updates = 0;
        long long sparsifier_calls = 0;
        int last_update_sparsifier_calls = 0;
        long long rebuilds = 0;
    };

    RegionEngine(WeightedGraph graph, EngineConfig cfg, SparsifierFn sparsifier);

    // Full update: core change plus snapshot/rebuild bookkeeping.
    void apply(const EdgeAction& action);

    // Union of the two query regions' edges and all other artifacts.
    std::vector<Edge> assemble(VertexId s, VertexId t, int* vertices_out = nullptr) const;
    WeightedGraph assemble_graph(VertexId s, VertexId t, int* vertices_out = nullptr) const;

    const WeightedGraph& graph() const { return graph_; }
    const RDivision& division() const { return division_; }
    const RegionArtifact& artifact(int region) const { return artifacts_.at(region); }
    const Stats& stats() const { return stats_; }
    const EngineConfig& config() const { return cfg_; }
    uint64_t epoch() const { return epoch_; }
    int delta() const { return delta_; }
    int interval_length() const { return 4 * delta_; }
    int ops_in_interval() const { return ops_; }

    // --- staged construction / scheduler interface ---
    struct deferred_t {};
    // Does not build; the owner drives build_division() + sparsify steps.
    RegionEngine(WeightedGraph graph, EngineConfig cfg, SparsifierFn sparsifier, uint64_t epoch,
                 deferred_t);
    void build_division();
    int pending_region_count() const { return static_cast<int>(build_queue_.size()); }
    void sparsify_next_region();
    bool build_done() const { return division_built_ && build_queue_.empty(); }
    // Core update without lifecycle bookkeeping (scheduler catch-up path).
    void apply_update_core(const EdgeAction& action);
    // Teardown path: drops one region's artifact storage.
    void clear_artifact(int region);

private:
    void resparsify(int region);
    void rebuild_from_snapshot();

    EngineConfig cfg_;
    SparsifierFn sparsifier_;
    WeightedGraph graph_;
    RDivision division_;
    std::vector<RegionArtifact> artifacts_;
    uint64_t epoch_ = 0;
    uint64_t resparsify_counter_ = 0;
    int delta_ = 1;
    int ops_ = 0;
    Stats stats_;

    // staged build state
    bool division_built_ = false;
    std::deque<int> build_queue_;

    // snapshot for the lagged rebuild
    std::optional<WeightedGraph> snapshot_;
    std::vector<EdgeAction> log_;
};

// Two-copy global rebuild wrapper: D1 answers queries and absorbs every
// update; D2 is torn down, rebuilt from the mid-interval snapshot, and
// caught up in bounded per-call slices, then the copies swap. Fed the same
// seed, the serving engine's state matches the plain auto-rebuilding engine
// step for step.
class RebuildScheduler {
public:
    struct WorkStats {
        int last_call_units = 0;
        int max_call_units = 0;
        int budget = 0;
        long long calls = 0;
        long long swaps = 0;
    };

    RebuildScheduler(WeightedGraph graph, EngineConfig cfg, SparsifierFn sparsifier);

    void apply(const EdgeAction& action);
    const RegionEngine& serving() const { return *d1_; }
    const WorkStats& work_stats() const { return work_; }
    int interval_position() const { return j_; }

private:
    int run_teardown(int units);
    int run_build(int calls_left);

    EngineConfig cfg_;
    SparsifierFn sparsifier_;
    int delta_ = 1;
    int j_ = 0;  // position within the current interval, 1..4*Delta
    std::unique_ptr<RegionEngine> d1_;
    std::unique_ptr<RegionEngine> d2_;       // under construction
    std::unique_ptr<RegionEngine> retired_;  // being emptied
    std::vector<int> retired_regions_;
    size_t teardown_pos_ = 0;
    int teardown_slice_ = 0;
    std::optional<WeightedGraph> snapshot_;
    std::vector<EdgeAction> log_;
    size_t log_pos_ = 0;
    WorkStats work_;
};

}  // namespace dynflow
