#pragma once

#include <cstdint>

#include "dynflow/engine.hpp"
#include "dynflow/graph.hpp"

namespace dynflow {

struct EFlowConfig {
    int r = 64;
    double eps = 0.3;
    uint64_t seed = 0;
    double c_t = 1.0;               // T_div = c_t * n / r
    int t_div = 0;                  // explicit raw period override
    double delta = 0.0;             // sparsifier failure budget; 0 -> 1/n^3
    double sampling_constant = 4.0; // C_s
    double c1 = 4.0, c2 = 8.0;      // division constants
};

// Fully dynamic (1+eps)-approximate all-pairs electrical-flow energy:
// an r-division with per-region approximate Schur complements, periodic
// lagged rebuilds, and union-graph queries answered exactly on the small
// assembled graph then scaled by (1 - eps/6).
class EFlowStructure {
public:
    EFlowStructure(WeightedGraph graph, EFlowConfig cfg);

    void update(const EdgeAction& action) { engine_.apply(action); }
    double query(VertexId s, VertexId t, int* assembled_vertices = nullptr,
                 int* assembled_edges = nullptr) const;

    const WeightedGraph& graph() const { return engine_.graph(); }
    const RegionEngine& engine() const { return engine_; }
    double eps() const { return cfg_.eps; }
    const EFlowConfig& config() const { return cfg_; }

private:
    EFlowConfig cfg_;
    RegionEngine engine_;
};

// Worst-case variant: same answers, bounded per-call work via the two-copy
// scheduler.
class WorstCaseEFlow {
public:
    WorstCaseEFlow(WeightedGraph graph, EFlowConfig cfg);

    void update(const EdgeAction& action) { scheduler_.apply(action); }
    double query(VertexId s, VertexId t, int* assembled_vertices = nullptr,
                 int* assembled_edges = nullptr) const;

    const RebuildScheduler& scheduler() const { return scheduler_; }
    double eps() const { return cfg_.eps; }

private:
    EFlowConfig cfg_;
    RebuildScheduler scheduler_;
};

// Shared pieces.
EngineConfig make_eflow_engine_config(const EFlowConfig& cfg);
SparsifierFn make_schur_sparsifier(const EFlowConfig& cfg);
double eflow_query_on(const RegionEngine& engine, double eps, VertexId s, VertexId t,
                      int* assembled_vertices, int* assembled_edges);

}  // namespace dynflow
