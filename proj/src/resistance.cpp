#include "dynflow/resistance.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dynflow {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct Component {
    std::vector<VertexId> verts;        // global ids, verts[0] is the ground
    std::vector<int> local;             // reverse index is kept in Impl
    SpMat reduced;                      // grounded Laplacian (size c-1)
    bool use_direct = false;
    bool factored = false;
    std::unique_ptr<Eigen::SimplicialLLT<SpMat>> llt;
    Eigen::MatrixXd dense_inverse;      // filled on demand for leverages
    bool has_inverse = false;
};

}  // namespace

struct ResistanceSolver::Impl {
    int n = 0;
    Options opt;
    std::vector<Edge> edges;            // live edges only
    std::vector<int> comp_of;           // per vertex
    std::vector<int> local_of;          // per vertex, index within component
    std::vector<Component> comps;
    std::vector<double> leverages;
    bool have_leverages = false;

    void build(int n_, std::vector<Edge> edges_);
    Component& ensure_factored(int c);
    void ensure_inverse(int c);
    Eigen::VectorXd solve_reduced(int c, const Eigen::VectorXd& rhs);
};

void ResistanceSolver::Impl::build(int n_, std::vector<Edge> edges_) {
    n = n_;
    edges.clear();
    edges.reserve(edges_.size());
    for (const Edge& e : edges_) {
        if (!e.live()) continue;
        if (e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
        if (!(e.w > 0.0)) throw std::invalid_argument("edge weight must be positive");
        edges.push_back(e);
    }

    std::vector<int> labels = component_labels(n, edges);
    int k = 0;
    for (int v = 0; v < n; ++v) k = std::max(k, labels[v] + 1);
    comp_of = std::move(labels);
    comps.assign(k, Component{});
    local_of.assign(n, -1);
    for (int v = 0; v < n; ++v) {
        Component& c = comps[comp_of[v]];
        local_of[v] = static_cast<int>(c.verts.size());
        c.verts.push_back(v);
    }

    // Assemble grounded Laplacians (row/col of verts[0] removed).
    std::vector<std::vector<Eigen::Triplet<double>>> trips(k);
    std::vector<std::map<std::pair<int, int>, double>> offdiag(k);
    std::vector<std::vector<double>> diag(k);
    for (int c = 0; c < k; ++c) diag[c].assign(comps[c].verts.size(), 0.0);
    for (const Edge& e : edges) {
        int c = comp_of[e.u];
        int a = local_of[e.u], b = local_of[e.v];
        diag[c][a] += e.w;
        diag[c][b] += e.w;
        if (a != 0 && b != 0) {
            auto key = std::minmax(a, b);
            offdiag[c][{key.first, key.second}] += e.w;
        }
    }
    for (int c = 0; c < k; ++c) {
        int m = static_cast<int>(comps[c].verts.size()) - 1;
        if (m <= 0) continue;
        auto& t = trips[c];
        for (int i = 1; i <= m; ++i) t.emplace_back(i - 1, i - 1, diag[c][i]);
        for (auto& [key, w] : offdiag[c]) {
            t.emplace_back(key.first - 1, key.second - 1, -w);
            t.emplace_back(key.second - 1, key.first - 1, -w);
        }
        comps[c].reduced.resize(m, m);
        comps[c].reduced.setFromTriplets(t.begin(), t.end());
        comps[c].use_direct = (m + 1) <= opt.direct_limit;
    }
}

Component& ResistanceSolver::Impl::ensure_factored(int c) {
    Component& comp = comps[c];
    if (comp.use_direct && !comp.factored) {
        comp.llt = std::make_unique<Eigen::SimplicialLLT<SpMat>>();
        comp.llt->compute(comp.reduced);
        if (comp.llt->info() != Eigen::Success)
            throw std::runtime_error("Laplacian factorization failed");
        comp.factored = true;
    }
    return comp;
}

Eigen::VectorXd ResistanceSolver::Impl::solve_reduced(int c, const Eigen::VectorXd& rhs) {
    Component& comp = ensure_factored(c);
    double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) return Eigen::VectorXd::Zero(rhs.size());
    Eigen::VectorXd x;
    if (comp.use_direct) {
        x = comp.llt->solve(rhs);
        // one refinement pass keeps the residual well under tolerance
        for (int it = 0; it < 3; ++it) {
            Eigen::VectorXd r = rhs - comp.reduced * x;
            if (r.norm() <= 1e-12 * rhs_norm) break;
            x += comp.llt->solve(r);
        }
    } else {
        Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                                 Eigen::DiagonalPreconditioner<double>>
            cg;
        cg.setTolerance(opt.tolerance * 0.1);
        cg.setMaxIterations(20LL * comp.reduced.rows() + 1000);
        cg.compute(comp.reduced);
        x = cg.solve(rhs);
    }
    Eigen::VectorXd r = rhs - comp.reduced * x;
    if (r.norm() > 1e-8 * rhs_norm)
        throw std::runtime_error("Laplacian solve did not converge");
    return x;
}

void ResistanceSolver::Impl::ensure_inverse(int c) {
    Component& comp = ensure_factored(c);
    if (comp.has_inverse) return;
    int m = static_cast<int>(comp.reduced.rows());
    if (m > opt.leverage_dense_limit)
        throw std::runtime_error("component too large for dense leverage computation");
    if (m > 0) {
        if (comp.use_direct) {
            comp.dense_inverse = comp.llt->solve(Eigen::MatrixXd::Identity(m, m));
        } else {
            Eigen::MatrixXd dense(comp.reduced);
            comp.dense_inverse = dense.llt().solve(Eigen::MatrixXd::Identity(m, m));
        }
    }
    comp.has_inverse = true;
}

ResistanceSolver::ResistanceSolver(const WeightedGraph& g, Options opt)
    : ResistanceSolver(g.vertex_count(), g.edge_list(), opt) {}

ResistanceSolver::ResistanceSolver(int n, std::vector<Edge> edges, Options opt)
    : impl_(std::make_unique<Impl>()) {
    impl_->opt = opt;
    impl_->build(n, std::move(edges));
}

ResistanceSolver::~ResistanceSolver() = default;
ResistanceSolver::ResistanceSolver(ResistanceSolver&&) noexcept = default;
ResistanceSolver& ResistanceSolver::operator=(ResistanceSolver&&) noexcept = default;

int ResistanceSolver::vertex_count() const { return impl_->n; }

int ResistanceSolver::component(VertexId v) const { return impl_->comp_of.at(v); }

double ResistanceSolver::resistance(VertexId s, VertexId t) {
    if (s < 0 || s >= impl_->n || t < 0 || t >= impl_->n)
        throw std::out_of_range("resistance: vertex out of range");
    if (s == t) return 0.0;
    int c = impl_->comp_of[s];
    if (impl_->comp_of[t] != c) return kInf;
    int a = impl_->local_of[s], b = impl_->local_of[t];
    int m = static_cast<int>(impl_->comps[c].reduced.rows());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    if (a != 0) rhs[a - 1] += 1.0;
    if (b != 0) rhs[b - 1] -= 1.0;
    Eigen::VectorXd x = impl_->solve_reduced(c, rhs);
    double phi_s = (a == 0) ? 0.0 : x[a - 1];
    double phi_t = (b == 0) ? 0.0 : x[b - 1];
    return phi_s - phi_t;
}

std::vector<double> ResistanceSolver::potentials(const std::vector<double>& demand) {
    if (static_cast<int>(demand.size()) != impl_->n)
        throw std::invalid_argument("potentials: demand dimension mismatch");
    int k = static_cast<int>(impl_->comps.size());
    std::vector<double> sums(k, 0.0), scale(k, 0.0);
    for (int v = 0; v < impl_->n; ++v) {
        sums[impl_->comp_of[v]] += demand[v];
        scale[impl_->comp_of[v]] += std::abs(demand[v]);
    }
    for (int c = 0; c < k; ++c) {
        if (std::abs(sums[c]) > 1e-9 * std::max(1.0, scale[c]))
            throw std::invalid_argument("potentials: demand infeasible across components");
    }
    std::vector<double> phi(impl_->n, 0.0);
    for (int c = 0; c < k; ++c) {
        if (scale[c] == 0.0) continue;
        const Component& comp = impl_->comps[c];
        int m = static_cast<int>(comp.reduced.rows());
        if (m == 0) continue;  // singleton component with zero demand
        Eigen::VectorXd rhs(m);
        for (int i = 1; i <= m; ++i) rhs[i - 1] = demand[comp.verts[i]];
        Eigen::VectorXd x = impl_->solve_reduced(c, rhs);
        double mean = x.sum() / static_cast<double>(m + 1);
        phi[comp.verts[0]] = -mean;
        for (int i = 1; i <= m; ++i) phi[comp.verts[i]] = x[i - 1] - mean;
    }
    return phi;
}

std::vector<double> ResistanceSolver::edge_leverages() {
    if (impl_->have_leverages) return impl_->leverages;
    std::vector<double> out;
    out.reserve(impl_->edges.size());
    for (const Edge& e : impl_->edges) {
        int c = impl_->comp_of[e.u];
        impl_->ensure_inverse(c);
        const Component& comp = impl_->comps[c];
        int a = impl_->local_of[e.u], b = impl_->local_of[e.v];
        auto entry = [&](int i, int j) -> double {
            if (i == 0 || j == 0) return 0.0;
            return comp.dense_inverse(i - 1, j - 1);
        };
        double r = entry(a, a) + entry(b, b) - 2.0 * entry(a, b);
        out.push_back(std::clamp(e.w * r, 0.0, 1.0));
    }
    impl_->leverages = out;
    impl_->have_leverages = true;
    return out;
}

const std::vector<Edge>& ResistanceSolver::edges() const { return impl_->edges; }

std::vector<double> solve_potentials(const WeightedGraph& g, const std::vector<double>& demand) {
    ResistanceSolver solver(g);
    return solver.potentials(demand);
}

double effective_resistance(const WeightedGraph& g, VertexId s, VertexId t) {
    ResistanceSolver solver(g);
    return solver.resistance(s, t);
}

double effective_resistance(int n, std::vector<Edge> edges, VertexId s, VertexId t) {
    ResistanceSolver solver(n, std::move(edges));
    return solver.resistance(s, t);
}

Flow electrical_flow(const WeightedGraph& g, VertexId s, VertexId t) {
    std::vector<double> phi = solve_potentials(g, unit_demand(g.vertex_count(), s, t));
    Flow f;
    g.for_each_edge([&](EdgeId id, const Edge& e) {
        f.edges.push_back(id);
        f.value.push_back(e.w * (phi[e.u] - phi[e.v]));
    });
    return f;
}

}  // namespace dynflow
