#include "dynflow/schur.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "dynflow/resistance.hpp"
#include "dynflow/util.hpp"

namespace dynflow {

namespace {

// Working structure for Gaussian elimination over a sparse vertex support.
struct ElimGraph {
    std::vector<VertexId> verts;                       // local -> global
    std::unordered_map<VertexId, int> local;           // global -> local
    std::vector<std::unordered_map<int, double>> adj;  // merged conductances
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
        adj[a][b] += w;
        adj[b][a] += w;
    }

    // Removes vertex `x` and connects its neighbors pairwise.
    void eliminate(int x) {
        std::vector<std::pair<int, double>> nbrs(adj[x].begin(), adj[x].end());
        // Sort by global id so fill-in accumulates in a fixed order.
        std::sort(nbrs.begin(), nbrs.end(),
                  [&](const auto& p, const auto& q) { return verts[p.first] < verts[q.first]; });
        double total = 0.0;
        for (auto& [nb, w] : nbrs) total += w;
        for (auto& [nb, w] : nbrs) adj[nb].erase(x);
        if (total > 0.0) {
            for (size_t i = 0; i < nbrs.size(); ++i) {
                for (size_t j = i + 1; j < nbrs.size(); ++j) {
                    double w = nbrs[i].second * nbrs[j].second / total;
                    adj[nbrs[i].first][nbrs[j].first] += w;
                    adj[nbrs[j].first][nbrs[i].first] += w;
                }
            }
        }
        adj[x].clear();
        alive[x] = 0;
    }
};

ElimGraph build_elim(std::span<const Edge> edges) {
    ElimGraph eg;
    for (const Edge& e : edges) {
        if (!e.live()) continue;
        eg.add_edge(e.u, e.v, e.w);
    }
    return eg;
}

// Min-degree elimination of every non-terminal in the structure.
void eliminate_nonterminals(ElimGraph& eg, const std::vector<char>& is_terminal,
                            std::vector<VertexId>* order) {
    using Entry = std::pair<int, VertexId>;  // (degree, global id)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (size_t i = 0; i < eg.verts.size(); ++i) {
        VertexId g = eg.verts[i];
        if (!is_terminal[g]) heap.emplace(static_cast<int>(eg.adj[i].size()), g);
    }
    while (!heap.empty()) {
        auto [deg, g] = heap.top();
        heap.pop();
        int x = eg.local.at(g);
        if (!eg.alive[x]) continue;
        int cur = static_cast<int>(eg.adj[x].size());
        if (cur != deg) {
            heap.emplace(cur, g);  // stale entry, reinsert with fresh degree
            continue;
        }
        eg.eliminate(x);
        if (order) order->push_back(g);
    }
}

std::vector<Edge> extract_edges(const ElimGraph& eg) {
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

std::vector<char> terminal_mask(int n, std::span<const VertexId> terminals) {
    std::vector<char> mask(n, 0);
    for (VertexId t : terminals) {
        if (t < 0 || t >= n) throw std::out_of_range("terminal id out of range");
        mask[t] = 1;
    }
    return mask;
}

}  // namespace

WeightedGraph eliminate_vertex(const WeightedGraph& g, VertexId v) {
    if (v < 0 || v >= g.vertex_count()) throw std::out_of_range("eliminate_vertex: unknown vertex");
    if (g.mode() != Mode::conductance)
        throw std::invalid_argument("eliminate_vertex: conductance mode required");
    ElimGraph eg = build_elim(g.edge_list());
    auto it = eg.local.find(v);
    if (it != eg.local.end()) eg.eliminate(it->second);
    WeightedGraph out(g.vertex_count(), Mode::conductance);
    for (const Edge& e : extract_edges(eg)) out.insert_edge(e.u, e.v, e.w);
    return out;
}

std::vector<Edge> schur_complement_edges(int n, std::span<const Edge> edges,
                                         std::span<const VertexId> terminals,
                                         std::vector<VertexId>* order) {
    std::vector<char> mask = terminal_mask(n, terminals);
    ElimGraph eg = build_elim(edges);
    eliminate_nonterminals(eg, mask, order);
    return extract_edges(eg);
}

SchurResult exact_schur(const WeightedGraph& g, std::vector<VertexId> terminals) {
    if (terminals.empty()) throw std::invalid_argument("exact_schur: empty terminal set");
    if (g.mode() != Mode::conductance)
        throw std::invalid_argument("exact_schur: conductance mode required");
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    SchurResult res;
    res.terminals = terminals;
    std::vector<Edge> edges = g.edge_list();
    std::vector<Edge> sc = schur_complement_edges(g.vertex_count(), edges, terminals,
                                                  &res.elimination_order);
    res.graph = WeightedGraph(g.vertex_count(), Mode::conductance);
    for (const Edge& e : sc) {
        if (!(e.w > 0.0))
            throw std::runtime_error("exact_schur: nonpositive weight produced (degenerate input)");
        res.graph.insert_edge(e.u, e.v, e.w);
    }
    return res;
}

std::pair<std::vector<Edge>, SparsifierCertificate> sparsify_edges(int n,
                                                                   std::span<const Edge> edges,
                                                                   double eps, double delta,
                                                                   uint64_t seed,
                                                                   const SparsifyOptions& opt) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("sparsify: eps must be in (0, 1/2)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("sparsify: delta must be in (0,1)");

    // Merge parallel edges; canonical (min,max) keys in sorted order.
    std::unordered_map<uint64_t, double> merged;
    merged.reserve(edges.size());
    for (const Edge& e : edges) {
        if (!e.live()) continue;
        VertexId a = std::min(e.u, e.v), b = std::max(e.u, e.v);
        merged[(static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b)] += e.w;
    }
    std::vector<Edge> base;
    base.reserve(merged.size());
    for (auto& [key, w] : merged)
        base.push_back(Edge{static_cast<VertexId>(key >> 32),
                            static_cast<VertexId>(key & 0xffffffffu), w});
    std::sort(base.begin(), base.end(),
              [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });

    SparsifierCertificate cert;
    cert.eps = eps;
    cert.delta = delta;
    cert.seed = seed;
    cert.input_edges = static_cast<int>(base.size());

    int support = 0;
    {
        std::vector<char> seen(n, 0);
        for (const Edge& e : base) {
            if (!seen[e.u]) { seen[e.u] = 1; ++support; }
            if (!seen[e.v]) { seen[e.v] = 1; ++support; }
        }
    }
    int budget_k = opt.budget_vertices > 0 ? opt.budget_vertices : support;
    int ambient = opt.ambient_vertices > 0 ? opt.ambient_vertices : n;
    ambient = std::max(ambient, 2);
    long long q = static_cast<long long>(
        std::ceil(opt.sampling_constant * budget_k / (eps * eps) * std::log(ambient / delta)));
    cert.sample_count = q;
    if (base.empty() || q <= 0) return {std::move(base), cert};

    ResistanceSolver solver(n, base);
    std::vector<double> lev = solver.edge_leverages();

    // Split into edges kept with certainty (expected multiplicity >= 1) and
    // edges sampled with replacement from the remaining budget.
    std::vector<char> heavy(base.size(), 0);
    long long q_rem = q;
    double sum_light = 0.0;
    for (double l : lev) sum_light += l;
    for (bool moved = true; moved && q_rem > 0;) {
        moved = false;
        for (size_t i = 0; i < base.size(); ++i) {
            if (heavy[i]) continue;
            if (lev[i] * static_cast<double>(q_rem) >= sum_light && sum_light > 0.0) {
                heavy[i] = 1;
                --q_rem;
                sum_light -= lev[i];
                moved = true;
                if (q_rem <= 0) break;
            }
        }
    }

    std::vector<Edge> out;
    out.reserve(base.size());
    Rng rng(mix64(seed, 0x73616d706cULL));
    for (size_t i = 0; i < base.size(); ++i)
        if (heavy[i]) out.push_back(base[i]);

    if (q_rem > 0 && sum_light > 0.0) {
        // Sequential conditional binomials realize an exact multinomial draw
        // of q_rem samples over the light edges.
        long long left = q_rem;
        double mass = sum_light;
        for (size_t i = 0; i < base.size() && left > 0; ++i) {
            if (heavy[i] || lev[i] <= 0.0) continue;
            long long cnt;
            if (lev[i] >= mass) {
                cnt = left;
            } else {
                std::binomial_distribution<long long> bin(left, std::clamp(lev[i] / mass, 0.0, 1.0));
                cnt = bin(rng);
            }
            if (cnt > 0) {
                double p = lev[i] / sum_light;
                out.push_back(Edge{base[i].u, base[i].v,
                                   base[i].w * static_cast<double>(cnt) /
                                       (static_cast<double>(q_rem) * p)});
            }
            left -= cnt;
            mass -= lev[i];
        }
    }
    cert.output_edges = static_cast<int>(out.size());
    return {std::move(out), cert};
}

std::pair<WeightedGraph, SparsifierCertificate> sparsify_spectral(const WeightedGraph& g,
                                                                  double eps, double delta,
                                                                  uint64_t seed,
                                                                  const SparsifyOptions& opt) {
    auto [edges, cert] = sparsify_edges(g.vertex_count(), g.edge_list(), eps, delta, seed, opt);
    WeightedGraph out(g.vertex_count(), g.mode());
    for (const Edge& e : edges) out.insert_edge(e.u, e.v, e.w);
    return {std::move(out), cert};
}

std::pair<std::vector<Edge>, SparsifierCertificate> approx_schur_edges(
    int n, std::span<const Edge> edges, std::span<const VertexId> terminals, double eps,
    double delta, uint64_t seed, const SparsifyOptions& opt) {
    std::vector<Edge> sc = schur_complement_edges(n, edges, terminals, nullptr);
    SparsifyOptions o = opt;
    o.budget_vertices = static_cast<int>(terminals.size());
    if (o.ambient_vertices <= 0) o.ambient_vertices = n;
    return sparsify_edges(n, sc, eps, delta, seed, o);
}

std::pair<WeightedGraph, SparsifierCertificate> approx_schur(const WeightedGraph& g,
                                                             std::vector<VertexId> terminals,
                                                             double eps, double delta,
                                                             uint64_t seed,
                                                             const SparsifyOptions& opt) {
    if (terminals.empty()) throw std::invalid_argument("approx_schur: empty terminal set");
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    auto [edges, cert] =
        approx_schur_edges(g.vertex_count(), g.edge_list(), terminals, eps, delta, seed, opt);
    WeightedGraph out(g.vertex_count(), Mode::conductance);
    for (const Edge& e : edges) out.insert_edge(e.u, e.v, e.w);
    return {std::move(out), cert};
}

SpectralReport verify_spectral_edges(int n, std::span<const Edge> a, std::span<const Edge> b,
                                     double eps, int trials, uint64_t seed) {
    SpectralReport rep;
    rep.trials = trials;
    Rng rng(mix64(seed, 0x76657269ULL));
    double lo = kInf, hi = -kInf;
    double scale = 0.0;
    for (const Edge& e : a) scale += e.w;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = gaussian(rng);
        double qa = quadratic_form(n, a, x);
        double qb = quadratic_form(n, b, x);
        if (qa <= 1e-12 * scale) {
            if (qb <= 1e-12 * scale) {
                ++rep.skipped;
                continue;
            }
            lo = 0.0;
            hi = kInf;
            continue;
        }
        double r = qb / qa;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    if (rep.skipped == trials) {
        rep.worst_low = rep.worst_high = 1.0;
        rep.pass = true;
        return rep;
    }
    rep.worst_low = lo;
    rep.worst_high = hi;
    rep.pass = lo >= (1.0 - eps) * (1.0 - 1e-9) && hi <= (1.0 + eps) * (1.0 + 1e-9);
    return rep;
}

SpectralReport verify_spectral(const WeightedGraph& a, const WeightedGraph& b, double eps,
                               int trials, uint64_t seed) {
    if (a.vertex_count() != b.vertex_count())
        throw std::invalid_argument("verify_spectral: id-space mismatch");
    return verify_spectral_edges(a.vertex_count(), a.edge_list(), b.edge_list(), eps, trials,
                                 seed);
}

}  // namespace dynflow
