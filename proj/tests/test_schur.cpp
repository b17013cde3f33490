#include <doctest.h>

#include <Eigen/Dense>

#include "dynflow/graph.hpp"
#include "dynflow/resistance.hpp"
#include "dynflow/schur.hpp"
#include "dynflow/util.hpp"

using namespace dynflow;

namespace {

Eigen::MatrixXd dense_laplacian(const WeightedGraph& g) {
    int n = g.vertex_count();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    g.for_each_edge([&](EdgeId, const Edge& e) {
        L(e.u, e.u) += e.w;
        L(e.v, e.v) += e.w;
        L(e.u, e.v) -= e.w;
        L(e.v, e.u) -= e.w;
    });
    return L;
}

// Dense block-elimination oracle: L_K - L_M^T L_N^{-1} L_M.
Eigen::MatrixXd dense_schur(const WeightedGraph& g, const std::vector<VertexId>& K) {
    int n = g.vertex_count();
    std::vector<char> is_k(n, 0);
    for (VertexId v : K) is_k[v] = 1;
    std::vector<int> terms, nonterms;
    for (int v = 0; v < n; ++v) (is_k[v] ? terms : nonterms).push_back(v);
    Eigen::MatrixXd L = dense_laplacian(g);
    Eigen::MatrixXd LN(nonterms.size(), nonterms.size());
    Eigen::MatrixXd LM(nonterms.size(), terms.size());
    Eigen::MatrixXd LK(terms.size(), terms.size());
    for (size_t i = 0; i < nonterms.size(); ++i)
        for (size_t j = 0; j < nonterms.size(); ++j) LN(i, j) = L(nonterms[i], nonterms[j]);
    for (size_t i = 0; i < nonterms.size(); ++i)
        for (size_t j = 0; j < terms.size(); ++j) LM(i, j) = L(nonterms[i], terms[j]);
    for (size_t i = 0; i < terms.size(); ++i)
        for (size_t j = 0; j < terms.size(); ++j) LK(i, j) = L(terms[i], terms[j]);
    return LK - LM.transpose() * LN.ldlt().solve(LM);
}

Eigen::MatrixXd dense_on_terminals(const WeightedGraph& g, const std::vector<VertexId>& K) {
    Eigen::MatrixXd L = dense_laplacian(g);
    Eigen::MatrixXd out(K.size(), K.size());
    for (size_t i = 0; i < K.size(); ++i)
        for (size_t j = 0; j < K.size(); ++j) out(i, j) = L(K[i], K[j]);
    return out;
}

WeightedGraph random_connected(Rng& rng, int n, double extra = 1.3) {
    WeightedGraph g(n, Mode::conductance);
    for (int v = 1; v < n; ++v)
        g.insert_edge(v, uniform_int(rng, v), uniform_range(rng, 0.5, 2.0));
    int m = static_cast<int>(extra * n);
    for (int i = 0; i < m; ++i) {
        int u = uniform_int(rng, n), v = uniform_int(rng, n);
        if (u != v) g.insert_edge(u, v, uniform_range(rng, 0.5, 2.0));
    }
    return g;
}

}  // namespace

TEST_SUITE_BEGIN("schur");

TEST_CASE("eliminate_vertex: series pair") {
    WeightedGraph g(3, Mode::conductance);
    g.insert_edge(0, 1, 2.0);  // a - v
    g.insert_edge(1, 2, 2.0);  // v - b
    WeightedGraph h = eliminate_vertex(g, 1);
    CHECK(h.edge_count() == 1);
    CHECK(h.edge(0).w == doctest::Approx(1.0));  // series: 1/2 + 1/2 resistance
}

TEST_CASE("eliminate_vertex: unit star becomes a 1/3 triangle") {
    WeightedGraph g(4, Mode::conductance);
    g.insert_edge(3, 0, 1.0);
    g.insert_edge(3, 1, 1.0);
    g.insert_edge(3, 2, 1.0);
    WeightedGraph h = eliminate_vertex(g, 3);
    CHECK(h.edge_count() == 3);
    h.for_each_edge([&](EdgeId, const Edge& e) { CHECK(e.w == doctest::Approx(1.0 / 3.0)); });
    // cross-check against the dense Schur complement
    Eigen::MatrixXd want = dense_schur(g, {0, 1, 2});
    Eigen::MatrixXd got = dense_on_terminals(h, {0, 1, 2});
    CHECK((want - got).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eliminate_vertex: leaf and isolated vertices") {
    WeightedGraph g(3, Mode::conductance);
    g.insert_edge(0, 1, 1.5);
    WeightedGraph h = eliminate_vertex(g, 1);  // single neighbor: edge vanishes
    CHECK(h.edge_count() == 0);
    WeightedGraph h2 = eliminate_vertex(g, 2);  // isolated: nothing changes
    CHECK(h2.edge_count() == 1);
    CHECK_THROWS(eliminate_vertex(g, 9));
}

TEST_CASE("exact_schur small cases") {
    SUBCASE("K = V returns the graph itself") {
        WeightedGraph g(3, Mode::conductance);
        g.insert_edge(0, 1, 1.0);
        g.insert_edge(1, 2, 2.0);
        SchurResult res = exact_schur(g, {0, 1, 2});
        CHECK(res.graph.edge_count() == 2);
        CHECK(res.elimination_order.empty());
    }
    SUBCASE("unit 4-cycle onto opposite pair") {
        WeightedGraph g(4, Mode::conductance);
        g.insert_edge(0, 1, 1.0);
        g.insert_edge(1, 2, 1.0);
        g.insert_edge(2, 3, 1.0);
        g.insert_edge(3, 0, 1.0);
        SchurResult res = exact_schur(g, {0, 2});
        CHECK(res.graph.edge_count() == 1);
        CHECK(res.graph.edge(0).w == doctest::Approx(1.0));  // two parallel series halves
        CHECK(effective_resistance(res.graph, 0, 2) == doctest::Approx(1.0));
    }
    SUBCASE("unit path onto endpoints") {
        WeightedGraph g(3, Mode::conductance);
        g.insert_edge(0, 1, 1.0);
        g.insert_edge(1, 2, 1.0);
        SchurResult res = exact_schur(g, {0, 2});
        CHECK(res.graph.edge_count() == 1);
        CHECK(res.graph.edge(0).w == doctest::Approx(0.5));
    }
}

TEST_CASE("exact_schur matches the dense Schur complement entrywise") {
    Rng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 6 + uniform_int(rng, 14);
        WeightedGraph g = random_connected(rng, n);
        int k = 2 + uniform_int(rng, std::min(6, n - 2));
        std::vector<VertexId> K;
        while (static_cast<int>(K.size()) < k) {
            int v = uniform_int(rng, n);
            if (std::find(K.begin(), K.end(), v) == K.end()) K.push_back(v);
        }
        std::sort(K.begin(), K.end());
        SchurResult res = exact_schur(g, K);
        Eigen::MatrixXd want = dense_schur(g, K);
        Eigen::MatrixXd got = dense_on_terminals(res.graph, K);
        double scale = want.cwiseAbs().maxCoeff();
        CHECK((want - got).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, scale));
    }
}

TEST_CASE("exact_schur preserves terminal resistances to 1e-9") {
    Rng rng(103);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 8 + uniform_int(rng, 42);
        WeightedGraph g = random_connected(rng, n);
        int k = 2 + uniform_int(rng, 6);
        std::vector<VertexId> K;
        while (static_cast<int>(K.size()) < k) {
            int v = uniform_int(rng, n);
            if (std::find(K.begin(), K.end(), v) == K.end()) K.push_back(v);
        }
        SchurResult res = exact_schur(g, K);
        ResistanceSolver orig(g), schur(res.graph);
        for (size_t i = 0; i < K.size(); ++i) {
            for (size_t j = i + 1; j < K.size(); ++j) {
                double want = orig.resistance(K[i], K[j]);
                double got = schur.resistance(K[i], K[j]);
                CHECK(got == doctest::Approx(want).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("elimination-order independence") {
    Rng rng(107);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 6 + uniform_int(rng, 14);
        WeightedGraph g = random_connected(rng, n);
        std::vector<VertexId> K{0, 1, 2};
        SchurResult a = exact_schur(g, K);
        // a different order: eliminate one by one in reverse id order
        WeightedGraph h = g;
        for (int v = n - 1; v >= 3; --v) h = eliminate_vertex(h, v);
        Eigen::MatrixXd da = dense_on_terminals(a.graph, K);
        Eigen::MatrixXd db = dense_on_terminals(h, K);
        double scale = std::max(1.0, da.cwiseAbs().maxCoeff());
        CHECK((da - db).cwiseAbs().maxCoeff() < 1e-8 * scale);
    }
}

TEST_CASE("quadratic-form transfer through the Schur complement") {
    Rng rng(109);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 8 + uniform_int(rng, 30);
        WeightedGraph g = random_connected(rng, n);
        int k = 2 + uniform_int(rng, 6);
        std::vector<VertexId> K;
        while (static_cast<int>(K.size()) < k) {
            int v = uniform_int(rng, n);
            if (std::find(K.begin(), K.end(), v) == K.end()) K.push_back(v);
        }
        SchurResult res = exact_schur(g, K);
        // random zero-sum demand supported on the terminals
        std::vector<double> d(n, 0.0);
        double sum = 0.0;
        for (size_t i = 0; i + 1 < K.size(); ++i) {
            d[K[i]] = gaussian(rng);
            sum += d[K[i]];
        }
        d[K.back()] = -sum;
        ResistanceSolver orig(g), schur(res.graph);
        auto phi_g = orig.potentials(d);
        auto phi_s = schur.potentials(d);
        double want = 0.0, got = 0.0;
        for (int v = 0; v < n; ++v) {
            want += d[v] * phi_g[v];
            got += d[v] * phi_s[v];
        }
        CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("sparsify: a tree is reproduced verbatim") {
    Rng rng(113);
    WeightedGraph tree(12, Mode::conductance);
    for (int v = 1; v < 12; ++v)
        tree.insert_edge(v, uniform_int(rng, v), uniform_range(rng, 0.5, 2.0));
    auto [h, cert] = sparsify_spectral(tree, 0.3, 0.1, 42);
    CHECK(h.edge_count() == tree.edge_count());
    SpectralReport rep = verify_spectral(tree, h, 1e-9, 32, 7);
    CHECK(rep.pass);
}

TEST_CASE("sparsify: single edge preserved exactly") {
    WeightedGraph g(2, Mode::conductance);
    g.insert_edge(0, 1, 1.7);
    auto [h, cert] = sparsify_spectral(g, 0.3, 0.1, 1);
    CHECK(h.edge_count() == 1);
    CHECK(h.edge(0).w == doctest::Approx(1.7).epsilon(1e-9));
    CHECK(cert.output_edges == 1);
}

TEST_CASE("sparsify: complete graph statistical quality") {
    int n = 20;
    WeightedGraph g(n, Mode::conductance);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.insert_edge(i, j, 1.0);
    auto [h, cert] = sparsify_spectral(g, 0.3, 0.1, 5);
    CHECK(h.edge_count() <= cert.sample_count);
    Rng rng(19);
    int good = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> x(n);
        for (auto& xi : x) xi = gaussian(rng);
        double qa = quadratic_form(g, x), qb = quadratic_form(h, x);
        if (qb >= (1 - 0.35) * qa && qb <= (1 + 0.35) * qa) ++good;
    }
    CHECK(good >= 95);
}

TEST_CASE("sparsify parameter validation") {
    WeightedGraph g(2, Mode::conductance);
    g.insert_edge(0, 1, 1.0);
    CHECK_THROWS(sparsify_spectral(g, 0.6, 0.1, 0));
    CHECK_THROWS(sparsify_spectral(g, 0.1, 1.5, 0));
}

TEST_CASE("approx_schur: path endpoints give the exact tree answer") {
    WeightedGraph g(5, Mode::conductance);
    for (int v = 0; v < 4; ++v) g.insert_edge(v, v + 1, 1.0);
    auto [h, cert] = approx_schur(g, {0, 4}, 0.25, 0.1, 3);
    CHECK(h.edge_count() == 1);
    CHECK(effective_resistance(h, 0, 4) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("approx_schur: edge budget is enforced") {
    Rng rng(127);
    WeightedGraph g = random_connected(rng, 40, 2.0);
    std::vector<VertexId> K{0, 1, 2, 3, 4, 5, 6, 7};
    double eps = 0.2, delta = 0.1;
    auto [h, cert] = approx_schur(g, K, eps, delta, 9);
    long long budget = static_cast<long long>(
        std::ceil(4.0 * K.size() / (eps * eps) * std::log(g.vertex_count() / delta)));
    CHECK(cert.sample_count == budget);
    CHECK(h.edge_count() <= budget);
}

TEST_CASE("approx_schur: terminal resistances within factor (1+e)/(1-e)") {
    Rng rng(131);
    int good = 0, total = 0;
    for (int trial = 0; trial < 6; ++trial) {
        WeightedGraph g = random_connected(rng, 60, 1.6);
        std::vector<VertexId> K;
        while (K.size() < 6) {
            int v = uniform_int(rng, 60);
            if (std::find(K.begin(), K.end(), v) == K.end()) K.push_back(v);
        }
        double eps = 0.2;
        auto [h, cert] = approx_schur(g, K, eps, 0.05, mix64(500, trial));
        ResistanceSolver orig(g), sp(h);
        double factor = (1 + eps) / (1 - eps);
        for (size_t i = 0; i < K.size(); ++i) {
            for (size_t j = i + 1; j < K.size(); ++j) {
                ++total;
                double want = orig.resistance(K[i], K[j]);
                double got = sp.resistance(K[i], K[j]);
                if (got <= want * factor && got >= want / factor) ++good;
            }
        }
    }
    CHECK(good >= static_cast<int>(0.95 * total));
}

TEST_CASE("verify_spectral behavior") {
    Rng rng(137);
    WeightedGraph g = random_connected(rng, 15);
    SUBCASE("identity passes with ratios exactly 1") {
        SpectralReport rep = verify_spectral(g, g, 0.1, 20, 3);
        CHECK(rep.pass);
        CHECK(rep.worst_low == doctest::Approx(1.0));
        CHECK(rep.worst_high == doctest::Approx(1.0));
    }
    SUBCASE("uniform scaling by 1+eps/2 passes") {
        WeightedGraph h(15, Mode::conductance);
        g.for_each_edge([&](EdgeId, const Edge& e) { h.insert_edge(e.u, e.v, e.w * 1.05); });
        SpectralReport rep = verify_spectral(g, h, 0.1, 20, 3);
        CHECK(rep.pass);
        CHECK(rep.worst_high == doctest::Approx(1.05));
    }
    SUBCASE("a dominant scaled edge fails") {
        WeightedGraph a(2, Mode::conductance);
        a.insert_edge(0, 1, 1.0);
        WeightedGraph b(2, Mode::conductance);
        b.insert_edge(0, 1, 4.0);
        SpectralReport rep = verify_spectral(a, b, 0.5, 20, 3);
        CHECK_FALSE(rep.pass);
    }
}

TEST_CASE("decomposability: union of per-part sparsifiers sparsifies the union") {
    Rng rng(139);
    WeightedGraph g = random_connected(rng, 30, 3.0);
    // partition the edges into 3 parts
    std::vector<WeightedGraph> parts(3, WeightedGraph(30, Mode::conductance));
    g.for_each_edge([&](EdgeId, const Edge& e) {
        parts[uniform_int(rng, 3)].insert_edge(e.u, e.v, e.w);
    });
    double eps = 0.25;
    WeightedGraph h(30, Mode::conductance);
    for (int i = 0; i < 3; ++i) {
        auto [hi, cert] = sparsify_spectral(parts[i], eps, 0.05, mix64(900, i));
        hi.for_each_edge([&](EdgeId, const Edge& e) { h.insert_edge(e.u, e.v, e.w); });
    }
    SpectralReport rep = verify_spectral(g, h, eps, 48, 11);
    CHECK(rep.pass);
}

TEST_SUITE_END();
