#include <doctest.h>

#include <Eigen/Dense>

#include "dynflow/graph.hpp"
#include "dynflow/resistance.hpp"
#include "dynflow/util.hpp"

using namespace dynflow;

namespace {

// Pseudo-inverse oracle: R(s,t) = chi^T L^+ chi via dense eigendecomposition.
double pinv_resistance(const WeightedGraph& g, VertexId s, VertexId t) {
    int n = g.vertex_count();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    g.for_each_edge([&](EdgeId, const Edge& e) {
        L(e.u, e.u) += e.w;
        L(e.v, e.v) += e.w;
        L(e.u, e.v) -= e.w;
        L(e.v, e.u) -= e.w;
    });
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(L);
    Eigen::MatrixXd pinv = cod.pseudoInverse();
    Eigen::VectorXd chi = Eigen::VectorXd::Zero(n);
    chi[s] = 1.0;
    chi[t] = -1.0;
    return chi.dot(pinv * chi);
}

WeightedGraph random_connected(Rng& rng, int n, double extra = 1.2) {
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

TEST_SUITE_BEGIN("resistance");

TEST_CASE("potentials on a single unit edge") {
    WeightedGraph g(2, Mode::conductance);
    g.insert_edge(0, 1, 1.0);
    auto phi = solve_potentials(g, unit_demand(2, 0, 1));
    CHECK(phi[0] == doctest::Approx(0.5));
    CHECK(phi[1] == doctest::Approx(-0.5));
}

TEST_CASE("zero demand gives zero potentials") {
    WeightedGraph g(3, Mode::conductance);
    g.insert_edge(0, 1, 2.0);
    g.insert_edge(1, 2, 1.0);
    auto phi = solve_potentials(g, std::vector<double>(3, 0.0));
    for (double p : phi) CHECK(p == doctest::Approx(0.0));
}

TEST_CASE("unit path potentials are grounded to zero sum") {
    WeightedGraph g(3, Mode::conductance);
    g.insert_edge(0, 1, 1.0);
    g.insert_edge(1, 2, 1.0);
    auto phi = solve_potentials(g, unit_demand(3, 0, 2));
    CHECK(phi[0] == doctest::Approx(1.0));
    CHECK(phi[1] == doctest::Approx(0.0));
    CHECK(phi[2] == doctest::Approx(-1.0));
}

TEST_CASE("demand across components is infeasible") {
    WeightedGraph g(4, Mode::conductance);
    g.insert_edge(0, 1, 1.0);
    g.insert_edge(2, 3, 1.0);
    CHECK_THROWS(solve_potentials(g, unit_demand(4, 0, 2)));
    // but separate zero-sum demands per component are fine
    std::vector<double> d{1.0, -1.0, 2.0, -2.0};
    auto phi = solve_potentials(g, d);
    CHECK(phi[0] - phi[1] == doctest::Approx(1.0));
    CHECK(phi[2] - phi[3] == doctest::Approx(2.0));
    CHECK(phi[0] + phi[1] == doctest::Approx(0.0));
}

TEST_CASE("effective resistance basics") {
    WeightedGraph path(3, Mode::conductance);
    path.insert_edge(0, 1, 1.0);
    path.insert_edge(1, 2, 1.0);
    CHECK(effective_resistance(path, 0, 2) == doctest::Approx(2.0));
    CHECK(effective_resistance(path, 0, 0) == 0.0);

    WeightedGraph tri(3, Mode::conductance);
    tri.insert_edge(0, 1, 1.0);
    tri.insert_edge(1, 2, 1.0);
    tri.insert_edge(0, 2, 1.0);
    CHECK(effective_resistance(tri, 0, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(effective_resistance(tri, 0, 1) == doctest::Approx(pinv_resistance(tri, 0, 1)));

    WeightedGraph disc(4, Mode::conductance);
    disc.insert_edge(0, 1, 1.0);
    disc.insert_edge(2, 3, 1.0);
    CHECK(std::isinf(effective_resistance(disc, 0, 2)));
}

TEST_CASE("matches the pseudo-inverse oracle on random graphs") {
    Rng rng(23);
    for (int trial = 0; trial < 12; ++trial) {
        int n = 5 + uniform_int(rng, 20);
        WeightedGraph g = random_connected(rng, n);
        ResistanceSolver solver(g);
        for (int k = 0; k < 4; ++k) {
            int s = uniform_int(rng, n), t = uniform_int(rng, n);
            if (s == t) continue;
            CHECK(solver.resistance(s, t) ==
                  doctest::Approx(pinv_resistance(g, s, t)).epsilon(1e-8));
        }
    }
}

TEST_CASE("energy identity: flow energy equals resistance") {
    Rng rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 5 + uniform_int(rng, 12);
        WeightedGraph g = random_connected(rng, n);
        int s = 0, t = n - 1;
        Flow f = electrical_flow(g, s, t);
        CHECK(f.net_out(g, s) == doctest::Approx(1.0).epsilon(1e-8));
        // conservation everywhere else
        for (int v = 0; v < n; ++v) {
            if (v == s || v == t) continue;
            CHECK(f.net_out(g, v) == doctest::Approx(0.0).epsilon(1e-8));
        }
        CHECK(f.energy(g) ==
              doctest::Approx(effective_resistance(g, s, t)).epsilon(1e-9));
    }
}

TEST_CASE("Rayleigh monotonicity: deleting an edge never lowers resistance") {
    Rng rng(41);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 5 + uniform_int(rng, 10);
        WeightedGraph g = random_connected(rng, n);
        int s = uniform_int(rng, n), t = (s + 1) % n;
        double base = effective_resistance(g, s, t);
        for (EdgeId id : g.live_edge_ids()) {
            WeightedGraph h = g;
            h.erase_edge(id);
            double after = effective_resistance(h, s, t);
            CHECK(after >= base * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("resistance triangle inequality") {
    Rng rng(43);
    for (int trial = 0; trial < 6; ++trial) {
        int n = 5 + uniform_int(rng, 12);
        WeightedGraph g = random_connected(rng, n);
        ResistanceSolver solver(g);
        for (int k = 0; k < 10; ++k) {
            int s = uniform_int(rng, n), t = uniform_int(rng, n), u = uniform_int(rng, n);
            if (s == t || s == u || t == u) continue;
            CHECK(solver.resistance(s, t) <=
                  solver.resistance(s, u) + solver.resistance(u, t) + 1e-9);
        }
    }
}

TEST_CASE("leverages: bridges have leverage one") {
    WeightedGraph tree(5, Mode::conductance);
    tree.insert_edge(0, 1, 2.0);
    tree.insert_edge(1, 2, 0.5);
    tree.insert_edge(1, 3, 1.0);
    tree.insert_edge(3, 4, 3.0);
    ResistanceSolver solver(tree);
    for (double lev : solver.edge_leverages()) CHECK(lev == doctest::Approx(1.0));
}

TEST_CASE("leverages sum to n - #components") {
    Rng rng(47);
    WeightedGraph g = random_connected(rng, 12);
    ResistanceSolver solver(g);
    double sum = 0.0;
    for (double lev : solver.edge_leverages()) sum += lev;
    CHECK(sum == doctest::Approx(11.0).epsilon(1e-8));
}

TEST_SUITE_END();
