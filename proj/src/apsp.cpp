#include "dynflow/apsp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace dynflow {

namespace {

using Adjacency = std::vector<std::vector<std::pair<int, double>>>;

Adjacency build_adjacency(int n, std::span<const Edge> edges) {
    Adjacency adj(n);
    for (const Edge& e : edges) {
        if (!e.live()) continue;
        adj[e.u].emplace_back(e.v, e.w);
        adj[e.v].emplace_back(e.u, e.w);
    }
    return adj;
}

// Dijkstra with optional target/early-exit bound.
std::vector<double> dijkstra_core(const Adjacency& adj, VertexId source, VertexId target,
                                  double bound) {
    std::vector<double> dist(adj.size(), kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        auto [d, x] = heap.top();
        heap.pop();
        if (d > dist[x]) continue;
        if (d > bound) break;
        if (x == target) break;
        for (auto [nb, w] : adj[x]) {
            double nd = d + w;
            if (nd < dist[nb]) {
                dist[nb] = nd;
                heap.emplace(nd, nb);
            }
        }
    }
    return dist;
}

// Elimination structure with min-merged adjacency maps.
struct DistElim {
    std::vector<VertexId> verts;
    std::unordered_map<VertexId, int> local;
    std::vector<std::unordered_map<int, double>> adj;
    std::vector<char> alive;

    int intern(VertexId v) {
        auto it = local.find(v);
        if (it != local.end()) return it->second;
        int idx = static_cast<int>(verts.size());
        local.emplace(v, idx);
        verts.push_back(v);
        adj.emplace_back();
        alive.push_back(1);
        return idx;
    }

    void add_edge(VertexId gu, VertexId gv, double w) {
        int a = intern(gu), b = intern(gv);
        auto ins = adj[a].try_emplace(b, w);
        if (!ins.second && w < ins.first->second) ins.first->second = w;
        ins = adj[b].try_emplace(a, w);
        if (!ins.second && w < ins.first->second) ins.first->second = w;
    }

    void eliminate(int x) {
        std::vector<std::pair<int, double>> nbrs(adj[x].begin(), adj[x].end());
        std::sort(nbrs.begin(), nbrs.end(),
                  [&](const auto& p, const auto& q) { return verts[p.first] < verts[q.first]; });
        for (auto& [nb, w] : nbrs) adj[nb].erase(x);
        for (size_t i = 0; i < nbrs.size(); ++i) {
            for (size_t j = i + 1; j < nbrs.size(); ++j) {
                double cand = nbrs[i].second + nbrs[j].second;
                int a = nbrs[i].first, b = nbrs[j].first;
                auto ins = adj[a].try_emplace(b, cand);
                if (!ins.second && cand < ins.first->second) ins.first->second = cand;
                ins = adj[b].try_emplace(a, cand);
                if (!ins.second && cand < ins.first->second) ins.first->second = cand;
            }
        }
        adj[x].clear();
        alive[x] = 0;
    }
};

std::vector<Edge> extract_dist_edges(const DistElim& eg) {
    std::vector<Edge> out;
    for (size_t i = 0; i < eg.verts.size(); ++i) {
        if (!eg.alive[i]) continue;
        for (auto& [nb, w] : eg.adj[i]) {
            VertexId a = eg.verts[i], b = eg.verts[nb];
            if (a < b) out.push_back(Edge{a, b, w});
        }
    }
    std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    return out;
}

}  // namespace

std::vector<double> dijkstra(int n, std::span<const Edge> edges, VertexId source) {
    if (source < 0 || source >= n) throw std::out_of_range("dijkstra: unknown source");
    return dijkstra_core(build_adjacency(n, edges), source, -1, kInf);
}

double dijkstra_dist(int n, std::span<const Edge> edges, VertexId s, VertexId t) {
    if (s < 0 || s >= n || t < 0 || t >= n) throw std::out_of_range("dijkstra: unknown vertex");
    if (s == t) return 0.0;
    return dijkstra_core(build_adjacency(n, edges), s, t, kInf)[t];
}

double dijkstra_dist(const WeightedGraph& g, VertexId s, VertexId t) {
    return dijkstra_dist(g.vertex_count(), g.edge_list(), s, t);
}

WeightedGraph eliminate_nonterminal_dist(const WeightedGraph& g, VertexId v) {
    if (v < 0 || v >= g.vertex_count())
        throw std::out_of_range("eliminate_nonterminal_dist: unknown vertex");
    DistElim eg;
    g.for_each_edge([&](EdgeId, const Edge& e) { eg.add_edge(e.u, e.v, e.w); });
    auto it = eg.local.find(v);
    if (it != eg.local.end()) eg.eliminate(it->second);
    WeightedGraph out(g.vertex_count(), g.mode());
    for (const Edge& e : extract_dist_edges(eg)) out.insert_edge(e.u, e.v, e.w);
    return out;
}

std::vector<Edge> distance_closure_edges(int n, std::span<const Edge> edges,
                                         std::span<const VertexId> terminals) {
    std::vector<char> mask(n, 0);
    for (VertexId t : terminals) {
        if (t < 0 || t >= n) throw std::out_of_range("distance_closure: terminal out of range");
        mask[t] = 1;
    }
    DistElim eg;
    for (const Edge& e : edges)
        if (e.live()) eg.add_edge(e.u, e.v, e.w);
    // Min-degree elimination, ties by vertex id.
    using Entry = std::pair<int, VertexId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (size_t i = 0; i < eg.verts.size(); ++i)
        if (!mask[eg.verts[i]]) heap.emplace(static_cast<int>(eg.adj[i].size()), eg.verts[i]);
    while (!heap.empty()) {
        auto [deg, gid] = heap.top();
        heap.pop();
        int x = eg.local.at(gid);
        if (!eg.alive[x]) continue;
        int cur = static_cast<int>(eg.adj[x].size());
        if (cur != deg) {
            heap.emplace(cur, gid);
            continue;
        }
        eg.eliminate(x);
    }
    return extract_dist_edges(eg);
}

WeightedGraph distance_closure(const WeightedGraph& g, std::vector<VertexId> terminals) {
    if (terminals.empty()) throw std::invalid_argument("distance_closure: empty terminal set");
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    WeightedGraph out(g.vertex_count(), g.mode());
    for (const Edge& e : distance_closure_edges(g.vertex_count(), g.edge_list(), terminals))
        out.insert_edge(e.u, e.v, e.w);
    return out;
}

std::vector<Edge> greedy_spanner_edges(int n, std::span<const Edge> edges, int q) {
    if (q < 1) throw std::invalid_argument("greedy_spanner: q must be >= 1");
    // Merge parallels by minimum, then scan ascending (weight, endpoints).
    std::unordered_map<uint64_t, double> merged;
    for (const Edge& e : edges) {
        if (!e.live()) continue;
        VertexId a = std::min(e.u, e.v), b = std::max(e.u, e.v);
        uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
        auto ins = merged.try_emplace(key, e.w);
        if (!ins.second && e.w < ins.first->second) ins.first->second = e.w;
    }
    std::vector<Edge> order;
    order.reserve(merged.size());
    for (auto& [key, w] : merged)
        order.push_back(Edge{static_cast<VertexId>(key >> 32),
                             static_cast<VertexId>(key & 0xffffffffu), w});
    std::sort(order.begin(), order.end(), [](const Edge& a, const Edge& b) {
        return std::tuple(a.w, a.u, a.v) < std::tuple(b.w, b.u, b.v);
    });

    double stretch = 2.0 * q - 1.0;
    Adjacency adj(n);
    std::vector<Edge> kept;
    for (const Edge& e : order) {
        double limit = stretch * e.w;
        double d = dijkstra_core(adj, e.u, e.v, limit)[e.v];
        if (d > limit * (1.0 + 1e-12)) {
            kept.push_back(e);
            adj[e.u].emplace_back(e.v, e.w);
            adj[e.v].emplace_back(e.u, e.w);
        }
    }
    return kept;
}

WeightedGraph greedy_spanner(const WeightedGraph& h, int q) {
    WeightedGraph out(h.vertex_count(), h.mode());
    for (const Edge& e : greedy_spanner_edges(h.vertex_count(), h.edge_list(), q))
        out.insert_edge(e.u, e.v, e.w);
    return out;
}

std::vector<Edge> distance_sparsify_edges(int n, std::span<const Edge> edges,
                                          std::span<const VertexId> terminals, int q) {
    return greedy_spanner_edges(n, distance_closure_edges(n, edges, terminals), q);
}

WeightedGraph distance_sparsify(const WeightedGraph& g, std::vector<VertexId> terminals, int q) {
    if (terminals.empty()) throw std::invalid_argument("distance_sparsify: empty terminal set");
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    WeightedGraph out(g.vertex_count(), g.mode());
    for (const Edge& e :
         distance_sparsify_edges(g.vertex_count(), g.edge_list(), terminals, q))
        out.insert_edge(e.u, e.v, e.w);
    return out;
}

ApspStructure::ApspStructure(WeightedGraph graph, ApspConfig cfg)
    : cfg_(cfg),
      engine_(std::move(graph),
              [&cfg] {
                  EngineConfig ec;
                  ec.division.r = cfg.r;
                  ec.division.c1 = cfg.c1;
                  ec.division.c2 = cfg.c2;
                  ec.seed = cfg.seed;
                  ec.c_t = cfg.c_t;
                  ec.t_div = cfg.t_div;
                  return ec;
              }(),
              [q = cfg.q](const WeightedGraph& g, const std::vector<EdgeId>& edge_ids,
                          const std::vector<VertexId>& terminals, uint64_t) {
                  std::vector<Edge> edges;
                  edges.reserve(edge_ids.size());
                  for (EdgeId id : edge_ids) edges.push_back(g.edge(id));
                  SparsifierCertificate cert;
                  cert.input_edges = static_cast<int>(edges.size());
                  std::vector<Edge> out;
                  if (terminals.empty()) {
                      // No boundary: nothing reaches this region from outside.
                      cert.output_edges = 0;
                      return std::pair(std::move(out), cert);
                  }
                  out = distance_sparsify_edges(g.vertex_count(), edges, terminals, q);
                  cert.output_edges = static_cast<int>(out.size());
                  return std::pair(std::move(out), cert);
              }) {
    if (cfg.q < 1) throw std::invalid_argument("ApspStructure: q must be >= 1");
}

double ApspStructure::query(VertexId s, VertexId t, int* assembled_vertices,
                            int* assembled_edges) const {
    int n = engine_.graph().vertex_count();
    if (s < 0 || s >= n || t < 0 || t >= n) throw std::out_of_range("query: unknown vertex");
    if (s == t) return 0.0;
    std::vector<Edge> h = engine_.assemble(s, t, assembled_vertices);
    if (assembled_edges) *assembled_edges = static_cast<int>(h.size());
    return dijkstra_dist(n, h, s, t);
}

}  // namespace dynflow
