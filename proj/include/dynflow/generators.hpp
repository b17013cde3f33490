#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "dynflow/graph.hpp"
#include "dynflow/oracles.hpp"

namespace dynflow {

// side x side lattice; weights uniform in [0.5, 2) unless unit_weights.
WeightedGraph make_grid(int side, Mode mode, uint64_t seed, bool unit_weights = false);

struct PlanarInstance {
    WeightedGraph graph;
    // Planar-but-absent vertex pairs (deleted triangulation edges); inserting
    // any of them keeps the graph planar.
    std::vector<std::pair<VertexId, VertexId>> spare_pairs;
};

// Random planar graph: incremental triangulation (each new vertex lands in a
// random face) followed by random edge deletions.
PlanarInstance make_random_planar(int n, Mode mode, uint64_t seed, double delete_fraction = 0.25,
                                  bool unit_weights = false);

std::vector<std::vector<uint8_t>> make_omv_matrix(int n1, int n2, double density, uint64_t seed);
// Dense 0/1 text grid: "n1 n2" then n1 rows of n2 characters.
void write_omv_matrix(std::ostream& out, const std::vector<std::vector<uint8_t>>& m);
std::vector<std::vector<uint8_t>> read_omv_matrix(std::istream& in);

// Random update/query script over g. Inserts draw from the spare pool (so
// planarity is preserved when g came from make_random_planar), deletes move
// live pairs back into it.
std::vector<ScriptOp> make_edge_script(const WeightedGraph& g,
                                       std::vector<std::pair<VertexId, VertexId>> spare_pairs,
                                       int updates, int queries, ScriptOp::Kind query_kind,
                                       uint64_t seed);

// Activation prefix plus queries among already-active vertices.
std::vector<ScriptOp> make_activation_script(const WeightedGraph& g, int activations, int queries,
                                             uint64_t seed);

}  // namespace dynflow
