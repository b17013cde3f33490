#include "dynflow/eflow.hpp"

#include <cmath>
#include <stdexcept>

#include "dynflow/resistance.hpp"

namespace dynflow {

namespace {

double resolve_delta(int n, double delta) {
    if (delta > 0.0) return delta;
    double d = 1.0 / (static_cast<double>(n) * n * n);
    return std::min(0.5, std::max(d, 1e-300));
}

void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("electrical-flow structure: eps must be in (0,1)");
}

}  // namespace

EngineConfig make_eflow_engine_config(const EFlowConfig& cfg) {
    EngineConfig ec;
    ec.division.r = cfg.r;
    ec.division.c1 = cfg.c1;
    ec.division.c2 = cfg.c2;
    ec.seed = cfg.seed;
    ec.c_t = cfg.c_t;
    ec.t_div = cfg.t_div;
    return ec;
}

SparsifierFn make_schur_sparsifier(const EFlowConfig& cfg) {
    double eps_region = cfg.eps / 6.0;
    double delta_cfg = cfg.delta;
    double cs = cfg.sampling_constant;
    return [eps_region, delta_cfg, cs](const WeightedGraph& g,
                                       const std::vector<EdgeId>& edge_ids,
                                       const std::vector<VertexId>& terminals, uint64_t seed) {
        std::vector<Edge> edges;
        edges.reserve(edge_ids.size());
        for (EdgeId id : edge_ids) edges.push_back(g.edge(id));
        SparsifyOptions opt;
        opt.sampling_constant = cs;
        opt.ambient_vertices = g.vertex_count();
        double delta = resolve_delta(g.vertex_count(), delta_cfg);
        return approx_schur_edges(g.vertex_count(), edges, terminals, eps_region, delta, seed,
                                  opt);
    };
}

double eflow_query_on(const RegionEngine& engine, double eps, VertexId s, VertexId t,
                      int* assembled_vertices, int* assembled_edges) {
    int n = engine.graph().vertex_count();
    if (s < 0 || s >= n || t < 0 || t >= n)
        throw std::out_of_range("electrical-flow query: unknown vertex");
    if (s == t) throw std::invalid_argument("electrical-flow query: s and t must differ");
    std::vector<Edge> h = engine.assemble(s, t, assembled_vertices);
    if (assembled_edges) *assembled_edges = static_cast<int>(h.size());
    ResistanceSolver solver(n, std::move(h));
    double psi = solver.resistance(s, t);
    return (1.0 - eps / 6.0) * psi;
}

EFlowStructure::EFlowStructure(WeightedGraph graph, EFlowConfig cfg)
    : cfg_((check_eps(cfg.eps), cfg)),
      engine_(std::move(graph), make_eflow_engine_config(cfg), make_schur_sparsifier(cfg)) {}

double EFlowStructure::query(VertexId s, VertexId t, int* assembled_vertices,
                             int* assembled_edges) const {
    return eflow_query_on(engine_, cfg_.eps, s, t, assembled_vertices, assembled_edges);
}

WorstCaseEFlow::WorstCaseEFlow(WeightedGraph graph, EFlowConfig cfg)
    : cfg_((check_eps(cfg.eps), cfg)),
      scheduler_(std::move(graph), make_eflow_engine_config(cfg),
                 make_schur_sparsifier(cfg)) {}

double WorstCaseEFlow::query(VertexId s, VertexId t, int* assembled_vertices,
                             int* assembled_edges) const {
    return eflow_query_on(scheduler_.serving(), cfg_.eps, s, t, assembled_vertices,
                          assembled_edges);
}

}  // namespace dynflow
