#include "dynflow/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace dynflow {

namespace {

// Dinic over an undirected residual network with double capacities.
class Dinic {
public:
    explicit Dinic(int n) : head_(n, -1), level_(n), iter_(n) {}

    void add_edge(int u, int v, double cap) {
        arcs_.push_back({v, head_[u], cap});
        head_[u] = static_cast<int>(arcs_.size()) - 1;
        arcs_.push_back({u, head_[v], cap});  // undirected: full capacity both ways
        head_[v] = static_cast<int>(arcs_.size()) - 1;
        scale_ = std::max(scale_, cap);
    }

    double run(int s, int t) {
        if (s == t) return 0.0;
        double flow = 0.0;
        eps_ = scale_ * 1e-12;
        while (bfs(s, t)) {
            iter_ = head_;
            while (true) {
                double f = dfs(s, t, kInf);
                if (f <= eps_) break;
                flow += f;
            }
        }
        return flow;
    }

private:
    struct Arc {
        int to, next;
        double cap;
    };

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::deque<int> q{s};
        level_[s] = 0;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int a = head_[x]; a >= 0; a = arcs_[a].next) {
                if (arcs_[a].cap > eps_ && level_[arcs_[a].to] < 0) {
                    level_[arcs_[a].to] = level_[x] + 1;
                    q.push_back(arcs_[a].to);
                }
            }
        }
        return level_[t] >= 0;
    }

    double dfs(int x, int t, double limit) {
        if (x == t) return limit;
        for (int& a = iter_[x]; a >= 0; a = arcs_[a].next) {
            Arc& arc = arcs_[a];
            if (arc.cap > eps_ && level_[arc.to] == level_[x] + 1) {
                double f = dfs(arc.to, t, std::min(limit, arc.cap));
                if (f > eps_) {
                    arc.cap -= f;
                    arcs_[a ^ 1].cap += f;
                    return f;
                }
            }
        }
        level_[x] = -1;
        return 0.0;
    }

    std::vector<int> head_, level_, iter_;
    std::vector<Arc> arcs_;
    double scale_ = 1.0;
    double eps_ = 1e-12;
};

std::vector<VertexId> sorted_unique(std::vector<VertexId> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

double max_flow(int n, std::span<const Edge> edges, VertexId s, VertexId t) {
    if (s < 0 || s >= n || t < 0 || t >= n) throw std::out_of_range("max_flow: unknown vertex");
    if (s == t) throw std::invalid_argument("max_flow: s and t must differ");
    Dinic dinic(n);
    for (const Edge& e : edges)
        if (e.live()) dinic.add_edge(e.u, e.v, e.w);
    return dinic.run(s, t);
}

double max_flow(const WeightedGraph& g, VertexId s, VertexId t) {
    return max_flow(g.vertex_count(), g.edge_list(), s, t);
}

double terminal_cut_value(int n, std::span<const Edge> edges, const std::vector<VertexId>& K,
                          const std::vector<VertexId>& S) {
    if (S.empty() || S.size() >= K.size())
        throw std::invalid_argument("terminal_cut_value: S must be a nonempty proper subset of K");
    std::vector<int> side(n, 0);  // 1: S, 2: K\S
    for (VertexId v : K) side.at(v) = 2;
    for (VertexId v : S) {
        if (side.at(v) != 2) throw std::invalid_argument("terminal_cut_value: S not within K");
        side[v] = 1;
    }
    int src = n, dst = n + 1;
    Dinic dinic(n + 2);
    auto map = [&](VertexId v) { return side[v] == 1 ? src : side[v] == 2 ? dst : v; };
    for (const Edge& e : edges) {
        if (!e.live()) continue;
        int a = map(e.u), b = map(e.v);
        if (a != b) dinic.add_edge(a, b, e.w);
    }
    return dinic.run(src, dst);
}

double terminal_cut_value(const WeightedGraph& g, const std::vector<VertexId>& K,
                          const std::vector<VertexId>& S) {
    return terminal_cut_value(g.vertex_count(), g.edge_list(), K, S);
}

std::vector<std::pair<uint32_t, double>> terminal_cut_profile(int n, std::span<const Edge> edges,
                                                              const std::vector<VertexId>& K) {
    int k = static_cast<int>(K.size());
    if (k < 2 || k > 20) throw std::invalid_argument("terminal_cut_profile: need 2 <= |K| <= 20");
    std::vector<std::pair<uint32_t, double>> out;
    uint32_t limit = 1u << (k - 1);
    for (uint32_t half = 1; half < limit; ++half) {
        // K[0] always on the S side; remaining bits choose companions.
        uint32_t mask = 1u | (half << 1);
        std::vector<VertexId> S;
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) S.push_back(K[i]);
        if (S.size() == K.size()) continue;
        out.emplace_back(mask, terminal_cut_value(n, edges, K, S));
    }
    // The singleton {K[0]} (half == 0 has mask 1) is also a valid cut.
    out.emplace_back(1u, terminal_cut_value(n, edges, K, {K[0]}));
    std::sort(out.begin(), out.end());
    return out;
}

CutSparsifier cut_sparsify(const WeightedGraph& g, std::vector<VertexId> K, CutStrategy strategy,
                           int k_max) {
    if (g.mode() == Mode::length)
        throw std::invalid_argument("cut_sparsify: capacity or conductance weights required");
    K = sorted_unique(std::move(K));
    CutSparsifier out;
    out.terminals = K;
    out.strategy = strategy;
    if (strategy == CutStrategy::contract_exact &&
        static_cast<int>(K.size()) > k_max) {
        out.fell_back = true;
        strategy = CutStrategy::identity;
    }
    if (strategy == CutStrategy::identity || K.size() < 2) {
        out.graph = g;
        return out;
    }

    int n = g.vertex_count();
    std::vector<char> terminal(n, 0);
    for (VertexId v : K) terminal.at(v) = 1;

    auto merge_parallel = [&](std::vector<Edge> in) {
        std::unordered_map<uint64_t, double> acc;
        for (const Edge& e : in) {
            VertexId a = std::min(e.u, e.v), b = std::max(e.u, e.v);
            acc[(static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b)] += e.w;
        }
        std::vector<Edge> res;
        res.reserve(acc.size());
        for (auto& [key, w] : acc)
            res.push_back(Edge{static_cast<VertexId>(key >> 32),
                               static_cast<VertexId>(key & 0xffffffffu), w});
        std::sort(res.begin(), res.end(), [](const Edge& x, const Edge& y) {
            return std::pair(x.u, x.v) < std::pair(y.u, y.v);
        });
        return res;
    };

    std::vector<Edge> cur = merge_parallel(g.edge_list());
    auto profile = terminal_cut_profile(n, cur, K);

    auto contract = [&](const std::vector<Edge>& edges, VertexId from, VertexId into) {
        std::vector<Edge> res;
        res.reserve(edges.size());
        for (Edge e : edges) {
            if (e.u == from) e.u = into;
            if (e.v == from) e.v = into;
            if (e.u != e.v) res.push_back(e);
        }
        return merge_parallel(std::move(res));
    };

    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t i = 0; i < cur.size(); ++i) {
            const Edge& e = cur[i];
            if (terminal[e.u] && terminal[e.v]) continue;
            // Merge the non-terminal endpoint into the other (lower id wins
            // when both are free).
            VertexId from, into;
            if (terminal[e.u]) {
                from = e.v;
                into = e.u;
            } else if (terminal[e.v]) {
                from = e.u;
                into = e.v;
            } else {
                from = std::max(e.u, e.v);
                into = std::min(e.u, e.v);
            }
            std::vector<Edge> cand = contract(cur, from, into);
            auto cand_profile = terminal_cut_profile(n, cand, K);
            bool same = cand_profile.size() == profile.size();
            for (size_t j = 0; same && j < profile.size(); ++j) {
                double a = profile[j].second, b = cand_profile[j].second;
                if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a))) same = false;
            }
            if (same) {
                cur = std::move(cand);
                profile = std::move(cand_profile);
                progress = true;
                break;
            }
        }
    }

    out.graph = WeightedGraph(n, g.mode());
    for (const Edge& e : cur) out.graph.insert_edge(e.u, e.v, e.w);
    return out;
}

double cut_quality_audit(const WeightedGraph& g, const std::vector<VertexId>& K,
                         const CutSparsifier& h, double tol) {
    std::vector<VertexId> terms = sorted_unique(K);
    if (terms.size() < 2 || terms.size() > 10)
        throw std::invalid_argument("cut_quality_audit: need 2 <= |K| <= 10");
    auto pg = terminal_cut_profile(g.vertex_count(), g.edge_list(), terms);
    auto ph = terminal_cut_profile(h.graph.vertex_count(), h.graph.edge_list(), terms);
    double q = 1.0;
    for (size_t i = 0; i < pg.size(); ++i) {
        double a = pg[i].second, b = ph[i].second;
        if (b + tol * std::max(1.0, a) < a)
            throw std::runtime_error("cut sparsifier violates the lower cut inequality");
        if (a > tol) {
            q = std::max(q, b / a);
        } else if (b > tol) {
            q = kInf;
        }
    }
    return q;
}

MaxFlowStructure::MaxFlowStructure(WeightedGraph graph, MaxFlowConfig cfg)
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
              [strategy = cfg.strategy, k_max = cfg.k_max](
                  const WeightedGraph& g, const std::vector<EdgeId>& edge_ids,
                  const std::vector<VertexId>& terminals, uint64_t) {
                  std::vector<Edge> edges;
                  edges.reserve(edge_ids.size());
                  for (EdgeId id : edge_ids) edges.push_back(g.edge(id));
                  SparsifierCertificate cert;
                  cert.input_edges = static_cast<int>(edges.size());
                  if (strategy == CutStrategy::contract_exact &&
                      static_cast<int>(terminals.size()) <= k_max && terminals.size() >= 2) {
                      WeightedGraph region(g.vertex_count(), g.mode());
                      for (const Edge& e : edges) region.insert_edge(e.u, e.v, e.w);
                      CutSparsifier sp = cut_sparsify(region, terminals, strategy, k_max);
                      cert.output_edges = sp.graph.edge_count();
                      return std::pair(sp.graph.edge_list(), cert);
                  }
                  cert.output_edges = cert.input_edges;
                  return std::pair(std::move(edges), cert);
              }) {}

double MaxFlowStructure::query(VertexId s, VertexId t, int* assembled_vertices,
                               int* assembled_edges) const {
    int n = engine_.graph().vertex_count();
    if (s < 0 || s >= n || t < 0 || t >= n) throw std::out_of_range("query: unknown vertex");
    if (s == t) throw std::invalid_argument("query: s and t must differ");
    std::vector<Edge> h = engine_.assemble(s, t, assembled_vertices);
    if (assembled_edges) *assembled_edges = static_cast<int>(h.size());
    return max_flow(n, h, s, t);
}

}  // namespace dynflow
