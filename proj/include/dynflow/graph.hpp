#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dynflow {

using VertexId = int32_t;
using EdgeId = int32_t;

constexpr double kInf = std::numeric_limits<double>::infinity();

// How the per-edge weight is interpreted by views and solvers.
// In conductance mode, resistance r(e) = 1/w(e). Parallel edges merge by
// summation in conductance/capacity mode and by minimum in length mode.
enum class Mode { conductance, capacity, length };

struct Edge {
    VertexId u = -1;
    VertexId v = -1;
    double w = 0.0;
    bool live() const { return u >= 0; }
};

struct InsertEdge {
    VertexId u = 0;
    VertexId v = 0;
    double w = 1.0;
};

struct DeleteEdge {
    EdgeId id = -1;
};

using EdgeAction = std::variant<InsertEdge, DeleteEdge>;

struct ChangeRecord {
    enum class Kind { insert, erase };
    Kind kind = Kind::insert;
    EdgeId edge = -1;
    VertexId u = -1;
    VertexId v = -1;
    double w = 0.0;
    // insert: endpoint had degree 0 before; erase: endpoint has degree 0 now.
    bool u_degree_zeroed = false;
    bool v_degree_zeroed = false;
};

// Dynamic undirected weighted multigraph over a fixed vertex id space
// 0..n-1. Edge ids are stable and never reused; the first endpoint stored
// per edge fixes its orientation for incidence purposes. Self-loops are
// rejected; parallel edges are kept explicitly.
class WeightedGraph {
public:
    WeightedGraph() = default;
    WeightedGraph(int n, Mode mode) : mode_(mode), adj_(n) {}

    int vertex_count() const { return static_cast<int>(adj_.size()); }
    int edge_count() const { return live_edges_; }
    Mode mode() const { return mode_; }

    EdgeId insert_edge(VertexId u, VertexId v, double w);
    // Returns the removed edge.
    Edge erase_edge(EdgeId id);

    bool edge_live(EdgeId id) const {
        return id >= 0 && id < static_cast<EdgeId>(edges_.size()) && edges_[id].live();
    }
    const Edge& edge(EdgeId id) const;
    // Upper bound on edge ids ever issued (dead slots included).
    int edge_slots() const { return static_cast<int>(edges_.size()); }

    int degree(VertexId v) const { return static_cast<int>(adj_.at(v).size()); }
    // (neighbor, edge id) pairs.
    const std::vector<std::pair<VertexId, EdgeId>>& neighbors(VertexId v) const {
        return adj_.at(v);
    }

    std::vector<EdgeId> live_edge_ids() const;
    std::vector<Edge> edge_list() const;

    // Lowest-id live edge between u and v, or -1.
    EdgeId find_edge(VertexId u, VertexId v) const;

    template <typename Fn>
    void for_each_edge(Fn&& fn) const {
        for (EdgeId id = 0; id < static_cast<EdgeId>(edges_.size()); ++id)
            if (edges_[id].live()) fn(id, edges_[id]);
    }

private:
    void check_vertex(VertexId v) const;

    Mode mode_ = Mode::conductance;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj_;
    int live_edges_ = 0;
};

// Applies an insert/delete action and reports what changed.
ChangeRecord mutate_edge(WeightedGraph& g, const EdgeAction& action);

// Multiset union of edge sets; all parts must share vertex count and mode.
// The Laplacian of the result is the sum of the part Laplacians.
WeightedGraph graph_union(std::span<const WeightedGraph* const> parts);
WeightedGraph graph_union(const WeightedGraph& a, const WeightedGraph& b);

// Keeps exactly the edges with both endpoints active; id space preserved.
WeightedGraph induced_subgraph(const WeightedGraph& g, const std::vector<bool>& active);

bool connected(const WeightedGraph& g, VertexId s, VertexId t);

// Component label per vertex (labels are 0..k-1 in order of lowest member).
std::vector<int> component_labels(int n, std::span<const Edge> edges);
std::vector<int> component_labels(const WeightedGraph& g);

// Read-only operator view of the graph Laplacian L = B^T R^{-1} B.
class LaplacianView {
public:
    explicit LaplacianView(const WeightedGraph& g) : g_(&g) {}

    int size() const { return g_->vertex_count(); }
    // y = L x
    std::vector<double> apply(std::span<const double> x) const;
    // sum_e w(e) (x_u - x_v)^2
    double quadratic_form(std::span<const double> x) const;
    // (B x)_e = x_u - x_v over live edges, in edge id order.
    std::vector<double> incidence_apply(std::span<const double> x) const;
    // (R z)_e = z_e / w(e), aligned with incidence_apply.
    std::vector<double> resistance_apply(std::span<const double> z) const;

private:
    const WeightedGraph* g_;
};

double quadratic_form(const WeightedGraph& g, std::span<const double> x);
double quadratic_form(int n, std::span<const Edge> edges, std::span<const double> x);

// chi_{s,t}: +1 at s, -1 at t.
std::vector<double> unit_demand(int n, VertexId s, VertexId t);

// Per-edge flow values respecting the stored orientation.
struct Flow {
    std::vector<EdgeId> edges;
    std::vector<double> value;  // aligned with edges

    double energy(const WeightedGraph& g) const;      // sum r(e) f(e)^2
    double net_out(const WeightedGraph& g, VertexId v) const;
};

// Text format: first line "n m", then m lines "u v w"; '#' starts a comment.
WeightedGraph read_graph(std::istream& in, Mode mode);
WeightedGraph read_graph_file(const std::string& path, Mode mode);
void write_graph(std::ostream& out, const WeightedGraph& g);

}  // namespace dynflow
