#include <doctest.h>

#include <sstream>

#include "dynflow/graph.hpp"
#include "dynflow/util.hpp"

using namespace dynflow;

namespace {

// Dense Laplacian assembled straight from the definition; the independent
// check for everything the views compute.
std::vector<std::vector<double>> dense_laplacian(const WeightedGraph& g) {
    int n = g.vertex_count();
    std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
    g.for_each_edge([&](EdgeId, const Edge& e) {
        L[e.u][e.u] += e.w;
        L[e.v][e.v] += e.w;
        L[e.u][e.v] -= e.w;
        L[e.v][e.u] -= e.w;
    });
    return L;
}

double dense_form(const std::vector<std::vector<double>>& L, const std::vector<double>& x) {
    double acc = 0.0;
    for (size_t i = 0; i < L.size(); ++i)
        for (size_t j = 0; j < L.size(); ++j) acc += x[i] * L[i][j] * x[j];
    return acc;
}

}  // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("insert then delete restores the empty edge set") {
    WeightedGraph g(2, Mode::conductance);
    ChangeRecord ins = mutate_edge(g, InsertEdge{0, 1, 2.0});
    CHECK(g.edge_count() == 1);
    CHECK(ins.kind == ChangeRecord::Kind::insert);
    CHECK(ins.u_degree_zeroed);
    CHECK(ins.v_degree_zeroed);
    ChangeRecord del = mutate_edge(g, DeleteEdge{ins.edge});
    CHECK(g.edge_count() == 0);
    CHECK(del.w == 2.0);
    CHECK(del.u_degree_zeroed);
}

TEST_CASE("insert/delete round trip restores the exact edge multiset") {
    Rng rng(7);
    WeightedGraph g(8, Mode::conductance);
    for (int i = 0; i < 12; ++i) {
        int u = uniform_int(rng, 8), v;
        do { v = uniform_int(rng, 8); } while (v == u);
        g.insert_edge(u, v, uniform_range(rng, 0.1, 3.0));
    }
    auto before = g.edge_list();
    auto sortEdges = [](std::vector<Edge> e) {
        std::sort(e.begin(), e.end(), [](const Edge& a, const Edge& b) {
            return std::tuple(a.u, a.v, a.w) < std::tuple(b.u, b.v, b.w);
        });
        return e;
    };
    EdgeId id = mutate_edge(g, InsertEdge{0, 5, 1.25}).edge;
    mutate_edge(g, DeleteEdge{id});
    CHECK(sortEdges(before) == sortEdges(g.edge_list()));
}

TEST_CASE("bad mutations are rejected") {
    WeightedGraph g(3, Mode::conductance);
    CHECK_THROWS(g.insert_edge(0, 0, 1.0));
    CHECK_THROWS(g.insert_edge(0, 1, 0.0));
    CHECK_THROWS(g.insert_edge(0, 1, -2.0));
    CHECK_THROWS(g.insert_edge(0, 7, 1.0));
    CHECK_THROWS(g.erase_edge(0));
}

TEST_CASE("parallel conductances merge by summation in the Laplacian view") {
    WeightedGraph g(2, Mode::conductance);
    g.insert_edge(0, 1, 1.0);
    g.insert_edge(0, 1, 1.0);
    auto L = dense_laplacian(g);
    CHECK(L[0][0] == doctest::Approx(2.0));
    CHECK(L[0][1] == doctest::Approx(-2.0));
    std::vector<double> x{1.0, -1.0};
    CHECK(quadratic_form(g, x) == doctest::Approx(dense_form(L, x)));
}

TEST_CASE("quadratic form on a single edge") {
    WeightedGraph g(2, Mode::conductance);
    g.insert_edge(0, 1, 1.0);
    CHECK(quadratic_form(g, std::vector<double>{1.0, -1.0}) == doctest::Approx(4.0));
    WeightedGraph g3(2, Mode::conductance);
    g3.insert_edge(0, 1, 3.0);
    CHECK(quadratic_form(g3, std::vector<double>{1.0, -1.0}) == doctest::Approx(12.0));
    CHECK(quadratic_form(g, std::vector<double>{2.5, 2.5}) == doctest::Approx(0.0));
    CHECK_THROWS(quadratic_form(g, std::vector<double>{1.0}));
}

TEST_CASE("quadratic form is nonnegative, zero iff constant per component") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 4 + uniform_int(rng, 8);
        WeightedGraph g(n, Mode::conductance);
        for (int i = 0; i < n; ++i) {
            int u = uniform_int(rng, n), v = uniform_int(rng, n);
            if (u != v) g.insert_edge(u, v, uniform_range(rng, 0.5, 2.0));
        }
        auto comp = component_labels(g);
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = gaussian(rng);
        CHECK(quadratic_form(g, x) >= 0.0);
        // constant per component -> exactly zero
        std::vector<double> c(n);
        for (int i = 0; i < n; ++i) c[i] = 3.0 * comp[i] + 1.0;
        CHECK(quadratic_form(g, c) == doctest::Approx(0.0));
    }
}

TEST_CASE("LaplacianView apply matches the dense matrix") {
    Rng rng(3);
    WeightedGraph g(6, Mode::conductance);
    for (int i = 0; i < 9; ++i) {
        int u = uniform_int(rng, 6), v = uniform_int(rng, 6);
        if (u != v) g.insert_edge(u, v, uniform_range(rng, 0.5, 2.0));
    }
    auto L = dense_laplacian(g);
    LaplacianView view(g);
    std::vector<double> x(6);
    for (auto& xi : x) xi = gaussian(rng);
    auto y = view.apply(x);
    for (int i = 0; i < 6; ++i) {
        double want = 0.0;
        for (int j = 0; j < 6; ++j) want += L[i][j] * x[j];
        CHECK(y[i] == doctest::Approx(want));
    }
    CHECK(view.quadratic_form(x) == doctest::Approx(dense_form(L, x)));
}

TEST_CASE("graph_union adds Laplacians") {
    SUBCASE("disjoint edges form a path") {
        WeightedGraph a(3, Mode::conductance), b(3, Mode::conductance);
        a.insert_edge(0, 1, 1.0);
        b.insert_edge(1, 2, 1.0);
        WeightedGraph u = graph_union(a, b);
        CHECK(u.edge_count() == 2);
        auto L = dense_laplacian(u);
        auto La = dense_laplacian(a), Lb = dense_laplacian(b);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(L[i][j] == doctest::Approx(La[i][j] + Lb[i][j]));
    }
    SUBCASE("two copies of an edge double the conductance") {
        WeightedGraph a(2, Mode::conductance);
        a.insert_edge(0, 1, 1.0);
        WeightedGraph u = graph_union(a, a);
        CHECK(dense_laplacian(u)[0][0] == doctest::Approx(2.0));
    }
    SUBCASE("empty union") {
        WeightedGraph u = graph_union(std::span<const WeightedGraph* const>{});
        CHECK(u.vertex_count() == 0);
        CHECK(u.edge_count() == 0);
    }
    SUBCASE("id-space mismatch rejected") {
        WeightedGraph a(2, Mode::conductance), b(3, Mode::conductance);
        CHECK_THROWS(graph_union(a, b));
    }
    SUBCASE("random 3-way partition sums to the whole") {
        Rng rng(17);
        WeightedGraph g(10, Mode::conductance);
        for (int i = 0; i < 20; ++i) {
            int u = uniform_int(rng, 10), v = uniform_int(rng, 10);
            if (u != v) g.insert_edge(u, v, uniform_range(rng, 0.5, 2.0));
        }
        std::vector<WeightedGraph> parts(3, WeightedGraph(10, Mode::conductance));
        g.for_each_edge([&](EdgeId, const Edge& e) {
            parts[uniform_int(rng, 3)].insert_edge(e.u, e.v, e.w);
        });
        const WeightedGraph* ptrs[] = {&parts[0], &parts[1], &parts[2]};
        WeightedGraph u = graph_union(std::span<const WeightedGraph* const>(ptrs, 3));
        auto Lu = dense_laplacian(u), Lg = dense_laplacian(g);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j)
                CHECK(Lu[i][j] == doctest::Approx(Lg[i][j]).epsilon(1e-12));
    }
}

TEST_CASE("induced subgraph keeps exactly the active-active edges") {
    WeightedGraph tri(3, Mode::conductance);
    tri.insert_edge(0, 1, 1.0);
    tri.insert_edge(1, 2, 1.0);
    tri.insert_edge(0, 2, 1.0);
    CHECK(induced_subgraph(tri, {true, true, true}).edge_count() == 3);
    CHECK(induced_subgraph(tri, {true, true, false}).edge_count() == 1);

    WeightedGraph path(3, Mode::conductance);
    path.insert_edge(0, 1, 1.0);
    path.insert_edge(1, 2, 1.0);
    CHECK(induced_subgraph(path, {true, false, true}).edge_count() == 0);
}

TEST_CASE("connectivity") {
    WeightedGraph g(4, Mode::conductance);
    g.insert_edge(0, 1, 1.0);
    g.insert_edge(1, 2, 1.0);
    CHECK(connected(g, 0, 2));
    CHECK_FALSE(connected(g, 0, 3));
    // 4-cycle minus two opposite edges: adjacent endpoints stay connected
    WeightedGraph c(4, Mode::conductance);
    EdgeId e01 = c.insert_edge(0, 1, 1.0);
    c.insert_edge(1, 2, 1.0);
    EdgeId e23 = c.insert_edge(2, 3, 1.0);
    c.insert_edge(3, 0, 1.0);
    c.erase_edge(e01);
    c.erase_edge(e23);
    CHECK(connected(c, 1, 2));
    CHECK_FALSE(connected(c, 0, 2));
}

TEST_CASE("text round trip with comments") {
    std::stringstream ss("# header comment\n3 2\n0 1 1.5 # trailing\n1 2 2.5\n");
    WeightedGraph g = read_graph(ss, Mode::conductance);
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 2);
    std::stringstream out;
    write_graph(out, g);
    WeightedGraph g2 = read_graph(out, Mode::conductance);
    CHECK(g2.edge_count() == 2);
    CHECK(g2.edge(1).w == doctest::Approx(2.5));
}

TEST_SUITE_END();
