#pragma once

#include <memory>
#include <vector>

#include "dynflow/graph.hpp"

namespace dynflow {

// Exact electrical solver on a fixed edge set (conductance interpretation).
// Each connected component is grounded at its lowest vertex id and solved
// with a sparse Cholesky factorization up to `direct_limit` vertices, and
// with Jacobi-preconditioned conjugate gradients above that.
class ResistanceSolver {
public:
    struct Options {
        double tolerance = 1e-10;     // relative residual target
        int direct_limit = 2000;      // component size cutoff for direct solve
        int leverage_dense_limit = 4000;
    };

    explicit ResistanceSolver(const WeightedGraph& g, Options opt = {});
    ResistanceSolver(int n, std::vector<Edge> edges, Options opt = {});
    ~ResistanceSolver();
    ResistanceSolver(ResistanceSolver&&) noexcept;
    ResistanceSolver& operator=(ResistanceSolver&&) noexcept;

    int vertex_count() const;
    int component(VertexId v) const;

    // chi_{s,t}^T L^+ chi_{s,t}; +inf across components, 0 when s == t.
    double resistance(VertexId s, VertexId t);

    // Solves L phi = d; phi is shifted to sum to zero on every component.
    // Throws if some component's demand does not sum to zero.
    std::vector<double> potentials(const std::vector<double>& demand);

    // w(e) * R(u_e, v_e) for every stored edge, in storage order.
    // Parallel edges see the resistance of the merged graph.
    std::vector<double> edge_leverages();

    const std::vector<Edge>& edges() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-shot helpers (build a solver internally).
std::vector<double> solve_potentials(const WeightedGraph& g, const std::vector<double>& demand);
double effective_resistance(const WeightedGraph& g, VertexId s, VertexId t);
double effective_resistance(int n, std::vector<Edge> edges, VertexId s, VertexId t);

// Unit s-t electrical flow induced by the potential vector.
Flow electrical_flow(const WeightedGraph& g, VertexId s, VertexId t);

}  // namespace dynflow
