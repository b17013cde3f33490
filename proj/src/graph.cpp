#include "dynflow/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dynflow {

void WeightedGraph::check_vertex(VertexId v) const {
    if (v < 0 || v >= vertex_count())
        throw std::out_of_range("vertex id " + std::to_string(v) + " out of range");
}

EdgeId WeightedGraph::insert_edge(VertexId u, VertexId v, double w) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("self-loops are not allowed");
    if (!(w > 0.0)) throw std::invalid_argument("edge weight must be positive");
    EdgeId id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(Edge{u, v, w});
    adj_[u].emplace_back(v, id);
    adj_[v].emplace_back(u, id);
    ++live_edges_;
    return id;
}

Edge WeightedGraph::erase_edge(EdgeId id) {
    if (!edge_live(id)) throw std::invalid_argument("unknown edge id " + std::to_string(id));
    Edge e = edges_[id];
    auto drop = [&](VertexId x) {
        auto& lst = adj_[x];
        for (size_t i = 0; i < lst.size(); ++i) {
            if (lst[i].second == id) {
                lst[i] = lst.back();
                lst.pop_back();
                return;
            }
        }
    };
    drop(e.u);
    drop(e.v);
    edges_[id] = Edge{};
    --live_edges_;
    return e;
}

const Edge& WeightedGraph::edge(EdgeId id) const {
    if (!edge_live(id)) throw std::invalid_argument("unknown edge id " + std::to_string(id));
    return edges_[id];
}

std::vector<EdgeId> WeightedGraph::live_edge_ids() const {
    std::vector<EdgeId> out;
    out.reserve(live_edges_);
    for (EdgeId id = 0; id < static_cast<EdgeId>(edges_.size()); ++id)
        if (edges_[id].live()) out.push_back(id);
    return out;
}

std::vector<Edge> WeightedGraph::edge_list() const {
    std::vector<Edge> out;
    out.reserve(live_edges_);
    for (const Edge& e : edges_)
        if (e.live()) out.push_back(e);
    return out;
}

EdgeId WeightedGraph::find_edge(VertexId u, VertexId v) const {
    check_vertex(u);
    check_vertex(v);
    EdgeId best = -1;
    for (auto [nb, id] : adj_[u])
        if (nb == v && (best < 0 || id < best)) best = id;
    return best;
}

ChangeRecord mutate_edge(WeightedGraph& g, const EdgeAction& action) {
    ChangeRecord rec;
    if (const auto* ins = std::get_if<InsertEdge>(&action)) {
        rec.kind = ChangeRecord::Kind::insert;
        rec.u_degree_zeroed = g.degree(ins->u) == 0;
        rec.v_degree_zeroed = g.degree(ins->v) == 0;
        rec.edge = g.insert_edge(ins->u, ins->v, ins->w);
        rec.u = ins->u;
        rec.v = ins->v;
        rec.w = ins->w;
    } else {
        const auto& del = std::get<DeleteEdge>(action);
        Edge e = g.erase_edge(del.id);
        rec.kind = ChangeRecord::Kind::erase;
        rec.edge = del.id;
        rec.u = e.u;
        rec.v = e.v;
        rec.w = e.w;
        rec.u_degree_zeroed = g.degree(e.u) == 0;
        rec.v_degree_zeroed = g.degree(e.v) == 0;
    }
    return rec;
}

WeightedGraph graph_union(std::span<const WeightedGraph* const> parts) {
    if (parts.empty()) return WeightedGraph(0, Mode::conductance);
    int n = parts[0]->vertex_count();
    Mode mode = parts[0]->mode();
    for (const WeightedGraph* p : parts) {
        if (p->vertex_count() != n) throw std::invalid_argument("graph_union: id-space mismatch");
        if (p->mode() != mode) throw std::invalid_argument("graph_union: mode mismatch");
    }
    WeightedGraph out(n, mode);
    for (const WeightedGraph* p : parts)
        p->for_each_edge([&](EdgeId, const Edge& e) { out.insert_edge(e.u, e.v, e.w); });
    return out;
}

WeightedGraph graph_union(const WeightedGraph& a, const WeightedGraph& b) {
    const WeightedGraph* parts[] = {&a, &b};
    return graph_union(std::span<const WeightedGraph* const>(parts, 2));
}

WeightedGraph induced_subgraph(const WeightedGraph& g, const std::vector<bool>& active) {
    if (static_cast<int>(active.size()) != g.vertex_count())
        throw std::invalid_argument("induced_subgraph: active set size mismatch");
    WeightedGraph out(g.vertex_count(), g.mode());
    g.for_each_edge([&](EdgeId, const Edge& e) {
        if (active[e.u] && active[e.v]) out.insert_edge(e.u, e.v, e.w);
    });
    return out;
}

bool connected(const WeightedGraph& g, VertexId s, VertexId t) {
    if (s == t) return true;
    std::vector<char> seen(g.vertex_count(), 0);
    std::deque<VertexId> q{s};
    seen[s] = 1;
    while (!q.empty()) {
        VertexId x = q.front();
        q.pop_front();
        for (auto [nb, id] : g.neighbors(x)) {
            if (!seen[nb]) {
                if (nb == t) return true;
                seen[nb] = 1;
                q.push_back(nb);
            }
        }
    }
    return false;
}

std::vector<int> component_labels(int n, std::span<const Edge> edges) {
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::vector<int> rank(n, 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const Edge& e : edges) {
        if (!e.live()) continue;
        int a = find(e.u), b = find(e.v);
        if (a == b) continue;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) ++rank[a];
    }
    std::vector<int> label(n, -1);
    int next = 0;
    for (int v = 0; v < n; ++v) {
        int r = find(v);
        if (label[r] < 0) label[r] = next++;
        label[v] = label[r];
    }
    return label;
}

std::vector<int> component_labels(const WeightedGraph& g) {
    return component_labels(g.vertex_count(), g.edge_list());
}

std::vector<double> LaplacianView::apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != size())
        throw std::invalid_argument("LaplacianView::apply: dimension mismatch");
    std::vector<double> y(size(), 0.0);
    g_->for_each_edge([&](EdgeId, const Edge& e) {
        double d = x[e.u] - x[e.v];
        y[e.u] += e.w * d;
        y[e.v] -= e.w * d;
    });
    return y;
}

double LaplacianView::quadratic_form(std::span<const double> x) const {
    return dynflow::quadratic_form(*g_, x);
}

std::vector<double> LaplacianView::incidence_apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != size())
        throw std::invalid_argument("LaplacianView::incidence_apply: dimension mismatch");
    std::vector<double> out;
    out.reserve(g_->edge_count());
    g_->for_each_edge([&](EdgeId, const Edge& e) { out.push_back(x[e.u] - x[e.v]); });
    return out;
}

std::vector<double> LaplacianView::resistance_apply(std::span<const double> z) const {
    std::vector<double> out;
    out.reserve(g_->edge_count());
    size_t i = 0;
    g_->for_each_edge([&](EdgeId, const Edge& e) {
        if (i >= z.size())
            throw std::invalid_argument("LaplacianView::resistance_apply: dimension mismatch");
        out.push_back(z[i++] / e.w);
    });
    if (i != z.size())
        throw std::invalid_argument("LaplacianView::resistance_apply: dimension mismatch");
    return out;
}

double quadratic_form(const WeightedGraph& g, std::span<const double> x) {
    if (static_cast<int>(x.size()) != g.vertex_count())
        throw std::invalid_argument("quadratic_form: dimension mismatch");
    double acc = 0.0;
    g.for_each_edge([&](EdgeId, const Edge& e) {
        double d = x[e.u] - x[e.v];
        acc += e.w * d * d;
    });
    return acc;
}

double quadratic_form(int n, std::span<const Edge> edges, std::span<const double> x) {
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("quadratic_form: dimension mismatch");
    double acc = 0.0;
    for (const Edge& e : edges) {
        if (!e.live()) continue;
        double d = x[e.u] - x[e.v];
        acc += e.w * d * d;
    }
    return acc;
}

std::vector<double> unit_demand(int n, VertexId s, VertexId t) {
    std::vector<double> d(n, 0.0);
    d.at(s) += 1.0;
    d.at(t) -= 1.0;
    return d;
}

double Flow::energy(const WeightedGraph& g) const {
    double acc = 0.0;
    for (size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = g.edge(edges[i]);
        acc += value[i] * value[i] / e.w;
    }
    return acc;
}

double Flow::net_out(const WeightedGraph& g, VertexId v) const {
    double acc = 0.0;
    for (size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = g.edge(edges[i]);
        if (e.u == v) acc += value[i];
        if (e.v == v) acc -= value[i];
    }
    return acc;
}

namespace {

// Strips comments and blank lines, returning the next payload line.
bool next_line(std::istream& in, std::string& line, int& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t pos = line.find_first_not_of(" \t\r\n");
        if (pos == std::string::npos) continue;
        return true;
    }
    return false;
}

}  // namespace

WeightedGraph read_graph(std::istream& in, Mode mode) {
    std::string line;
    int lineno = 0;
    if (!next_line(in, line, lineno)) throw std::runtime_error("graph file: missing header");
    std::istringstream hdr(line);
    long long n = -1, m = -1;
    if (!(hdr >> n >> m) || n < 0 || m < 0)
        throw std::runtime_error("graph file line " + std::to_string(lineno) + ": bad header");
    WeightedGraph g(static_cast<int>(n), mode);
    for (long long i = 0; i < m; ++i) {
        if (!next_line(in, line, lineno))
            throw std::runtime_error("graph file: expected " + std::to_string(m) + " edges");
        std::istringstream es(line);
        long long u, v;
        double w;
        if (!(es >> u >> v >> w))
            throw std::runtime_error("graph file line " + std::to_string(lineno) + ": bad edge");
        g.insert_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), w);
    }
    return g;
}

WeightedGraph read_graph_file(const std::string& path, Mode mode) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return read_graph(in, mode);
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    out.precision(17);
    g.for_each_edge([&](EdgeId, const Edge& e) { out << e.u << ' ' << e.v << ' ' << e.w << '\n'; });
}

}  // namespace dynflow
