#include "dynflow/subgraph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "dynflow/resistance.hpp"
#include "dynflow/util.hpp"

namespace dynflow {

SubgraphEFlow::SubgraphEFlow(WeightedGraph graph, SubgraphConfig cfg)
    : cfg_(cfg), g_(std::move(graph)) {
    if (!(cfg_.eps > 0.0 && cfg_.eps < 1.0))
        throw std::invalid_argument("SubgraphEFlow: eps must be in (0,1)");
    DivisionConfig dc;
    dc.r = cfg_.r;
    dc.c1 = cfg_.c1;
    dc.c2 = cfg_.c2;
    dc.seed = mix64(cfg_.seed, 0);
    division_ = RDivision::build(g_, dc);
    active_.assign(g_.vertex_count(), false);
    artifacts_.assign(division_.region_slots(), RegionArtifact{});
    int n = g_.vertex_count();
    delta_ = cfg_.delta > 0.0
                 ? cfg_.delta
                 : std::min(0.5, std::max(1.0 / (static_cast<double>(n) * n * n), 1e-300));
    // Empty active set: every region sparsifier starts empty but valid.
    for (int id : division_.live_region_ids()) {
        artifacts_[id].valid = true;
        artifacts_[id].terminals.clear();
        artifacts_[id].edges.clear();
    }
}

int SubgraphEFlow::regions_containing(VertexId v) const {
    int count = 0;
    for (auto& [rid, cnt] : division_.regions_of_vertex(v))
        if (division_.region_live(rid)) ++count;
    return count;
}

void SubgraphEFlow::refresh_region(int region) {
    const Region& reg = division_.region(region);
    std::vector<Edge> live;
    for (EdgeId id : reg.edges) {
        const Edge& e = g_.edge(id);
        if (active_[e.u] && active_[e.v]) live.push_back(e);
    }
    // Terminals: active members of the static boundary. Inactive boundary
    // vertices have no live edges anywhere, so eliminating past them is
    // still exact for the assembled query graph.
    std::vector<VertexId> terminals;
    for (VertexId v : division_.boundary_of(region))
        if (active_[v]) terminals.push_back(v);
    SparsifyOptions opt;
    opt.sampling_constant = cfg_.sampling_constant;
    opt.ambient_vertices = g_.vertex_count();
    uint64_t seed = mix64(cfg_.seed, static_cast<uint64_t>(region), ++refresh_counter_);
    auto [edges, cert] = approx_schur_edges(g_.vertex_count(), live, terminals, cfg_.eps / 6.0,
                                            delta_, seed, opt);
    RegionArtifact& art = artifacts_[region];
    art.valid = true;
    art.edges = std::move(edges);
    art.terminals = std::move(terminals);
    art.cert = cert;
    ++sparsifier_calls_;
}

void SubgraphEFlow::activate(VertexId v) {
    if (v < 0 || v >= g_.vertex_count()) throw std::out_of_range("activate: unknown vertex");
    if (active_[v]) throw std::invalid_argument("activate: vertex already active");
    active_[v] = true;
    ++active_count_;
    ++activations_;
    for (auto& [rid, cnt] : division_.regions_of_vertex(v))
        if (division_.region_live(rid)) refresh_region(rid);
}

double SubgraphEFlow::query(VertexId s, VertexId t, int* assembled_vertices,
                            int* assembled_edges) const {
    int n = g_.vertex_count();
    if (s < 0 || s >= n || t < 0 || t >= n) throw std::out_of_range("query: unknown vertex");
    if (s == t) throw std::invalid_argument("query: s and t must differ");
    if (!active_[s] || !active_[t])
        throw std::invalid_argument("query: both endpoints must be active");
    int ps = division_.home_region(s);
    int pt = division_.home_region(t);
    std::vector<Edge> h;
    for (int id : division_.live_region_ids()) {
        if (id == ps || id == pt) {
            for (EdgeId e : division_.region(id).edges) {
                const Edge& ed = g_.edge(e);
                if (active_[ed.u] && active_[ed.v]) h.push_back(ed);
            }
        } else {
            const RegionArtifact& art = artifacts_[id];
            h.insert(h.end(), art.edges.begin(), art.edges.end());
        }
    }
    if (assembled_vertices) {
        std::unordered_set<VertexId> seen{s, t};
        for (const Edge& e : h) {
            seen.insert(e.u);
            seen.insert(e.v);
        }
        *assembled_vertices = static_cast<int>(seen.size());
    }
    if (assembled_edges) *assembled_edges = static_cast<int>(h.size());
    ResistanceSolver solver(n, std::move(h));
    double psi = solver.resistance(s, t);
    return (1.0 - cfg_.eps / 6.0) * psi;
}

OMvInstance omv_build(std::vector<std::vector<uint8_t>> matrix) {
    if (matrix.empty() || matrix[0].empty()) throw std::invalid_argument("omv_build: empty matrix");
    OMvInstance inst;
    inst.n1 = static_cast<int>(matrix.size());
    inst.n2 = static_cast<int>(matrix[0].size());
    for (const auto& row : matrix)
        if (static_cast<int>(row.size()) != inst.n2)
            throw std::invalid_argument("omv_build: ragged matrix");
    inst.matrix = std::move(matrix);
    inst.gadget = WeightedGraph(inst.n1 + inst.n2 + 2, Mode::conductance);
    inst.s = inst.n1 + inst.n2;
    inst.t = inst.n1 + inst.n2 + 1;
    for (int i = 0; i < inst.n1; ++i) inst.gadget.insert_edge(inst.s, inst.row_vertex(i), 1.0);
    for (int j = 0; j < inst.n2; ++j) inst.gadget.insert_edge(inst.col_vertex(j), inst.t, 1.0);
    for (int i = 0; i < inst.n1; ++i)
        for (int j = 0; j < inst.n2; ++j)
            if (inst.matrix[i][j]) inst.gadget.insert_edge(inst.row_vertex(i), inst.col_vertex(j), 1.0);
    return inst;
}

SubgraphEFlow make_omv_engine(const OMvInstance& inst, int r, double eps, uint64_t seed) {
    SubgraphConfig cfg;
    cfg.r = r;
    cfg.eps = eps;
    cfg.seed = seed;
    SubgraphEFlow engine(inst.gadget, cfg);
    engine.activate(inst.s);
    engine.activate(inst.t);
    return engine;
}

int omv_answer(const OMvInstance& inst, const std::vector<uint8_t>& u,
               const std::vector<uint8_t>& v, SubgraphEFlow& engine) {
    if (static_cast<int>(u.size()) != inst.n1 || static_cast<int>(v.size()) != inst.n2)
        throw std::invalid_argument("omv_answer: dimension mismatch");
    for (int i = 0; i < inst.n1; ++i)
        if (u[i] && !engine.active(inst.row_vertex(i))) engine.activate(inst.row_vertex(i));
    for (int j = 0; j < inst.n2; ++j)
        if (v[j] && !engine.active(inst.col_vertex(j))) engine.activate(inst.col_vertex(j));
    double energy = engine.query(inst.s, inst.t);
    return std::isinf(energy) ? 0 : 1;
}

}  // namespace dynflow
