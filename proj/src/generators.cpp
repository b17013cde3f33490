#include "dynflow/generators.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dynflow/util.hpp"

namespace dynflow {

WeightedGraph make_grid(int side, Mode mode, uint64_t seed, bool unit_weights) {
    if (side < 1) throw std::invalid_argument("make_grid: side must be positive");
    WeightedGraph g(side * side, mode);
    Rng rng(mix64(seed, 0x67726964ULL));
    auto weight = [&] { return unit_weights ? 1.0 : uniform_range(rng, 0.5, 2.0); };
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            int v = y * side + x;
            if (x + 1 < side) g.insert_edge(v, v + 1, weight());
            if (y + 1 < side) g.insert_edge(v, v + side, weight());
        }
    }
    return g;
}

PlanarInstance make_random_planar(int n, Mode mode, uint64_t seed, double delete_fraction,
                                  bool unit_weights) {
    if (n < 3) throw std::invalid_argument("make_random_planar: need n >= 3");
    Rng rng(mix64(seed, 0x706c616eULL));
    auto weight = [&] { return unit_weights ? 1.0 : uniform_range(rng, 0.5, 2.0); };

    std::set<std::pair<VertexId, VertexId>> pairs;
    auto add_pair = [&](VertexId a, VertexId b) {
        pairs.insert({std::min(a, b), std::max(a, b)});
    };
    add_pair(0, 1);
    add_pair(1, 2);
    add_pair(0, 2);
    std::vector<std::array<VertexId, 3>> faces{{0, 1, 2}, {0, 1, 2}};  // both sides
    for (VertexId v = 3; v < n; ++v) {
        int f = uniform_int(rng, static_cast<int>(faces.size()));
        auto [a, b, c] = faces[f];
        add_pair(v, a);
        add_pair(v, b);
        add_pair(v, c);
        faces[f] = {a, b, v};
        faces.push_back({a, c, v});
        faces.push_back({b, c, v});
    }

    std::vector<std::pair<VertexId, VertexId>> all(pairs.begin(), pairs.end());
    // Deterministic shuffle, then delete a prefix.
    for (size_t i = all.size(); i > 1; --i)
        std::swap(all[i - 1], all[uniform_int(rng, static_cast<int>(i))]);
    size_t ndel = static_cast<size_t>(delete_fraction * all.size());
    PlanarInstance out;
    out.graph = WeightedGraph(n, mode);
    out.spare_pairs.assign(all.begin(), all.begin() + ndel);
    for (size_t i = ndel; i < all.size(); ++i)
        out.graph.insert_edge(all[i].first, all[i].second, weight());
    return out;
}

std::vector<std::vector<uint8_t>> make_omv_matrix(int n1, int n2, double density, uint64_t seed) {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("make_omv_matrix: empty matrix");
    Rng rng(mix64(seed, 0x6f6d76ULL));
    std::vector<std::vector<uint8_t>> m(n1, std::vector<uint8_t>(n2, 0));
    for (auto& row : m)
        for (auto& cell : row) cell = uniform01(rng) < density ? 1 : 0;
    return m;
}

void write_omv_matrix(std::ostream& out, const std::vector<std::vector<uint8_t>>& m) {
    out << m.size() << ' ' << (m.empty() ? 0 : m[0].size()) << '\n';
    for (const auto& row : m) {
        for (uint8_t cell : row) out << (cell ? '1' : '0');
        out << '\n';
    }
}

std::vector<std::vector<uint8_t>> read_omv_matrix(std::istream& in) {
    int n1, n2;
    if (!(in >> n1 >> n2) || n1 < 1 || n2 < 1)
        throw std::runtime_error("omv matrix: bad header");
    std::vector<std::vector<uint8_t>> m(n1, std::vector<uint8_t>(n2, 0));
    std::string row;
    for (int i = 0; i < n1; ++i) {
        if (!(in >> row) || static_cast<int>(row.size()) != n2)
            throw std::runtime_error("omv matrix: bad row " + std::to_string(i));
        for (int j = 0; j < n2; ++j) {
            if (row[j] != '0' && row[j] != '1')
                throw std::runtime_error("omv matrix: bad cell");
            m[i][j] = row[j] == '1';
        }
    }
    return m;
}

std::vector<ScriptOp> make_edge_script(const WeightedGraph& g,
                                       std::vector<std::pair<VertexId, VertexId>> spare,
                                       int updates, int queries, ScriptOp::Kind query_kind,
                                       uint64_t seed) {
    Rng rng(mix64(seed, 0x73637269ULL));
    int n = g.vertex_count();
    std::vector<std::pair<VertexId, VertexId>> live;
    g.for_each_edge([&](EdgeId, const Edge& e) {
        live.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    });

    // Interleave updates and queries uniformly.
    std::vector<char> slots(updates, 'U');
    slots.insert(slots.end(), queries, 'Q');
    for (size_t i = slots.size(); i > 1; --i)
        std::swap(slots[i - 1], slots[uniform_int(rng, static_cast<int>(i))]);

    std::vector<ScriptOp> script;
    script.reserve(slots.size());
    for (char slot : slots) {
        ScriptOp op;
        if (slot == 'U') {
            bool can_insert = !spare.empty();
            bool can_delete = !live.empty();
            bool do_insert = can_insert && (!can_delete || uniform01(rng) < 0.5);
            if (do_insert) {
                int i = uniform_int(rng, static_cast<int>(spare.size()));
                auto pr = spare[i];
                spare[i] = spare.back();
                spare.pop_back();
                op.kind = ScriptOp::Kind::insert;
                op.u = pr.first;
                op.v = pr.second;
                op.w = uniform_range(rng, 0.5, 2.0);
                live.push_back(pr);
            } else if (can_delete) {
                int i = uniform_int(rng, static_cast<int>(live.size()));
                auto pr = live[i];
                live[i] = live.back();
                live.pop_back();
                op.kind = ScriptOp::Kind::erase;
                op.u = pr.first;
                op.v = pr.second;
                spare.push_back(pr);
            } else {
                continue;  // nothing to update
            }
        } else {
            op.kind = query_kind;
            op.u = uniform_int(rng, n);
            do {
                op.v = uniform_int(rng, n);
            } while (op.v == op.u);
        }
        script.push_back(op);
    }
    return script;
}

std::vector<ScriptOp> make_activation_script(const WeightedGraph& g, int activations, int queries,
                                             uint64_t seed) {
    Rng rng(mix64(seed, 0x61637469ULL));
    int n = g.vertex_count();
    activations = std::min(activations, n);
    std::vector<VertexId> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[uniform_int(rng, static_cast<int>(i))]);
    order.resize(activations);

    // Queries go after at least two activations.
    std::vector<ScriptOp> script;
    std::vector<VertexId> active;
    int remaining_queries = queries;
    for (int i = 0; i < activations; ++i) {
        ScriptOp op;
        op.kind = ScriptOp::Kind::activate;
        op.u = order[i];
        script.push_back(op);
        active.push_back(order[i]);
        if (active.size() >= 2 && remaining_queries > 0 &&
            (uniform01(rng) < static_cast<double>(remaining_queries) / (activations - i) ||
             i + 1 == activations)) {
            ScriptOp qop;
            qop.kind = ScriptOp::Kind::query_energy;
            qop.u = active[uniform_int(rng, static_cast<int>(active.size()))];
            do {
                qop.v = active[uniform_int(rng, static_cast<int>(active.size()))];
            } while (qop.v == qop.u);
            script.push_back(qop);
            --remaining_queries;
        }
    }
    while (remaining_queries-- > 0 && active.size() >= 2) {
        ScriptOp qop;
        qop.kind = ScriptOp::Kind::query_energy;
        qop.u = active[uniform_int(rng, static_cast<int>(active.size()))];
        do {
            qop.v = active[uniform_int(rng, static_cast<int>(active.size()))];
        } while (qop.v == qop.u);
        script.push_back(qop);
    }
    return script;
}

}  // namespace dynflow
