#include "dynflow/partition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "dynflow/util.hpp"

namespace dynflow {

namespace {

// BFS order + level per vertex from a given root, local indices.
void bfs_levels(const LocalGraph& lg, int root, std::vector<int>& order,
                std::vector<int>& level) {
    int n = static_cast<int>(lg.verts.size());
    order.clear();
    level.assign(n, -1);
    std::deque<int> q{root};
    level[root] = 0;
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        order.push_back(x);
        for (int nb : lg.adj[x]) {
            if (level[nb] < 0) {
                level[nb] = level[x] + 1;
                q.push_back(nb);
            }
        }
    }
}

int min_degree_root(const LocalGraph& lg) {
    int best = 0;
    for (int v = 1; v < static_cast<int>(lg.verts.size()); ++v)
        if (lg.adj[v].size() < lg.adj[best].size()) best = v;
    return best;
}

SeparatorResult median_split(const LocalGraph& lg, const std::vector<int>& order) {
    int n = static_cast<int>(lg.verts.size());
    SeparatorResult res;
    res.used_fallback = true;
    if (n <= 1) {
        if (n == 1) res.side_a.push_back(0);
        return res;
    }
    int half = (n + 1) / 2;
    std::vector<char> in_a(n, 0);
    for (int i = 0; i < half; ++i) in_a[order[i]] = 1;
    std::vector<char> is_sep(n, 0);
    for (int i = 0; i < half; ++i) {
        int v = order[i];
        for (int nb : lg.adj[v]) {
            if (!in_a[nb]) {
                is_sep[v] = 1;
                break;
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        if (is_sep[v])
            res.separator.push_back(v);
        else if (in_a[v])
            res.side_a.push_back(v);
        else
            res.side_b.push_back(v);
    }
    return res;
}

}  // namespace

SeparatorResult bfs_level_separator(const LocalGraph& lg, uint64_t) {
    int n = static_cast<int>(lg.verts.size());
    SeparatorResult res;
    if (n == 0) return res;
    if (n == 1) {
        res.side_a.push_back(0);
        return res;
    }
    std::vector<int> order, level;
    bfs_levels(lg, min_degree_root(lg), order, level);
    int depth = 0;
    for (int l : level) depth = std::max(depth, l);
    std::vector<int> count(depth + 1, 0);
    for (int l : level) ++count[l];
    // Prefix sums: below[t] = vertices strictly under level t.
    std::vector<int> below(depth + 2, 0);
    for (int t = 0; t <= depth; ++t) below[t + 1] = below[t] + count[t];
    int best_t = -1, best_max = 0;
    for (int t = 0; t <= depth; ++t) {
        int a = below[t];
        int b = n - below[t + 1];
        int worst = std::max(a, b);
        if (worst * 3 > 2 * n) continue;
        // smallest level first, better balance on ties
        if (best_t < 0 || count[t] < count[best_t] ||
            (count[t] == count[best_t] && worst < best_max)) {
            best_t = t;
            best_max = worst;
        }
    }
    if (best_t < 0) return median_split(lg, order);
    for (int v = 0; v < n; ++v) {
        if (level[v] < best_t)
            res.side_a.push_back(v);
        else if (level[v] > best_t)
            res.side_b.push_back(v);
        else
            res.separator.push_back(v);
    }
    return res;
}

SeparatorResult bfs_bisection_separator(const LocalGraph& lg, uint64_t) {
    int n = static_cast<int>(lg.verts.size());
    SeparatorResult res;
    if (n == 0) return res;
    std::vector<int> order, level;
    bfs_levels(lg, min_degree_root(lg), order, level);
    return median_split(lg, order);
}

SeparatorResult find_separator(const WeightedGraph& g, uint64_t seed) {
    LocalGraph lg;
    int n = g.vertex_count();
    std::vector<int> local(n, -1);
    for (VertexId v = 0; v < n; ++v) {
        local[v] = static_cast<int>(lg.verts.size());
        lg.verts.push_back(v);
        lg.adj.emplace_back();
    }
    g.for_each_edge([&](EdgeId, const Edge& e) {
        lg.adj[local[e.u]].push_back(local[e.v]);
        lg.adj[local[e.v]].push_back(local[e.u]);
    });
    return bfs_level_separator(lg, seed);
}

// ---------------------------------------------------------------------------
// RDivision

void RDivision::ensure_edge_slot(EdgeId e) {
    if (e >= static_cast<EdgeId>(edge_region_.size())) {
        edge_region_.resize(e + 1, -1);
        edge_pos_.resize(e + 1, -1);
    }
}

int RDivision::new_region() {
    int id = static_cast<int>(regions_.size());
    regions_.push_back(Region{});
    regions_.back().id = id;
    regions_.back().live = true;
    ++live_regions_;
    return id;
}

void RDivision::add_boundary(int region, VertexId v) {
    if (regions_[region].boundary.insert(v).second) ++boundary_total_;
}

void RDivision::remove_boundary(int region, VertexId v) {
    if (regions_[region].boundary.erase(v)) --boundary_total_;
}

void RDivision::inc_membership(VertexId v, int region, std::vector<int>* touched) {
    auto& lst = vert_regions_[v];
    for (auto& [rid, cnt] : lst) {
        if (rid == region) {
            ++cnt;
            return;
        }
    }
    lst.emplace_back(region, 1);
    regions_[region].verts.insert(v);
    if (lst.size() == 2) {
        // v just became shared: boundary in both regions.
        for (auto& [rid, cnt] : lst) {
            bool fresh = !regions_[rid].boundary.count(v);
            add_boundary(rid, v);
            if (fresh && touched && rid != region) touched->push_back(rid);
        }
    } else if (lst.size() > 2) {
        add_boundary(region, v);
    }
}

void RDivision::dec_membership(VertexId v, int region, std::vector<int>* touched) {
    auto& lst = vert_regions_[v];
    for (size_t i = 0; i < lst.size(); ++i) {
        if (lst[i].first != region) continue;
        if (--lst[i].second > 0) return;
        lst[i] = lst.back();
        lst.pop_back();
        regions_[region].verts.erase(v);
        remove_boundary(region, v);
        if (lst.size() == 1) {
            int other = lst[0].first;
            if (regions_[other].boundary.count(v)) {
                remove_boundary(other, v);
                if (touched) touched->push_back(other);
            }
        }
        return;
    }
    throw std::logic_error("division: vertex membership bookkeeping is inconsistent");
}

void RDivision::attach_edge(int region, EdgeId e, VertexId u, VertexId v,
                            std::vector<int>* touched) {
    ensure_edge_slot(e);
    if (edge_region_[e] >= 0) throw std::logic_error("division: edge already assigned");
    Region& reg = regions_[region];
    edge_region_[e] = region;
    edge_pos_[e] = static_cast<int>(reg.edges.size());
    reg.edges.push_back(e);
    inc_membership(u, region, touched);
    inc_membership(v, region, touched);
}

void RDivision::detach_edge(EdgeId e, std::vector<int>* touched) {
    int region = edge_region_[e];
    Region& reg = regions_[region];
    int pos = edge_pos_[e];
    EdgeId last = reg.edges.back();
    reg.edges[pos] = last;
    edge_pos_[last] = pos;
    reg.edges.pop_back();
    edge_region_[e] = -1;
    edge_pos_[e] = -1;
}

RDivision RDivision::build(const WeightedGraph& g, const DivisionConfig& cfg) {
    if (cfg.r < 4) throw std::invalid_argument("build_rdivision: r must be at least 4");
    if (g.vertex_count() == 0) throw std::invalid_argument("build_rdivision: empty graph");
    RDivision d;
    d.cfg_ = cfg;
    if (!d.cfg_.separator) d.cfg_.separator = bfs_level_separator;
    d.n_ = g.vertex_count();
    d.vert_regions_.assign(d.n_, {});
    d.edge_region_.assign(g.edge_slots(), -1);
    d.edge_pos_.assign(g.edge_slots(), -1);

    // Split the edge set into connected pieces (by shared vertices).
    auto split_components = [&](const std::vector<EdgeId>& edges)
        -> std::vector<std::vector<EdgeId>> {
        std::unordered_map<VertexId, int> comp;
        std::vector<int> parent;
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        };
        auto intern = [&](VertexId v) {
            auto it = comp.find(v);
            if (it != comp.end()) return it->second;
            int idx = static_cast<int>(parent.size());
            parent.push_back(idx);
            comp.emplace(v, idx);
            return idx;
        };
        for (EdgeId e : edges) {
            const Edge& ed = g.edge(e);
            int a = find(intern(ed.u)), b = find(intern(ed.v));
            if (a != b) parent[a] = b;
        }
        std::unordered_map<int, int> root_index;
        std::vector<std::vector<EdgeId>> out;
        for (EdgeId e : edges) {
            int r = find(comp.at(g.edge(e).u));
            auto [it, fresh] = root_index.try_emplace(r, static_cast<int>(out.size()));
            if (fresh) out.emplace_back();
            out[it->second].push_back(e);
        }
        return out;
    };

    auto vertex_count_of = [&](const std::vector<EdgeId>& edges) {
        std::unordered_set<VertexId> s;
        for (EdgeId e : edges) {
            s.insert(g.edge(e).u);
            s.insert(g.edge(e).v);
        }
        return s;
    };

    uint64_t sep_calls = 0;
    std::deque<std::vector<EdgeId>> work;
    for (auto& piece : split_components(g.live_edge_ids())) work.push_back(std::move(piece));

    while (!work.empty()) {
        std::vector<EdgeId> piece = std::move(work.front());
        work.pop_front();
        auto verts = vertex_count_of(piece);
        if (static_cast<int>(verts.size()) <= cfg.r) {
            int id = d.new_region();
            for (EdgeId e : piece) d.attach_edge(id, e, g.edge(e).u, g.edge(e).v, nullptr);
            continue;
        }

        // Build the local view and ask the strategy for a separator.
        LocalGraph lg;
        std::unordered_map<VertexId, int> local;
        lg.verts.assign(verts.begin(), verts.end());
        std::sort(lg.verts.begin(), lg.verts.end());
        for (int i = 0; i < static_cast<int>(lg.verts.size()); ++i) local[lg.verts[i]] = i;
        lg.adj.assign(lg.verts.size(), {});
        for (EdgeId e : piece) {
            const Edge& ed = g.edge(e);
            lg.adj[local[ed.u]].push_back(local[ed.v]);
            lg.adj[local[ed.v]].push_back(local[ed.u]);
        }
        SeparatorResult sep = d.cfg_.separator(lg, mix64(cfg.seed, ++sep_calls));

        // side label: 0 = A, 1 = B, 2 = S
        std::vector<char> side(lg.verts.size(), 2);
        for (int v : sep.side_a) side[v] = 0;
        for (int v : sep.side_b) side[v] = 1;
        std::vector<EdgeId> fa, fb;
        for (EdgeId e : piece) {
            const Edge& ed = g.edge(e);
            char su = side[local[ed.u]], sv = side[local[ed.v]];
            if (su == 1 || sv == 1) {
                if (su == 0 || sv == 0)
                    throw std::runtime_error("separator strategy returned a cut with A-B edges");
                fb.push_back(e);
            } else {
                fa.push_back(e);
            }
        }
        if (fa.empty() || fb.empty() ||
            vertex_count_of(fa).size() >= verts.size() ||
            vertex_count_of(fb).size() >= verts.size()) {
            // No progress; halve the edge set instead. Any edge bipartition
            // keeps the division valid, only boundary quality suffers.
            fa.assign(piece.begin(), piece.begin() + piece.size() / 2);
            fb.assign(piece.begin() + piece.size() / 2, piece.end());
        }
        for (auto& sub : split_components(fa)) work.push_back(std::move(sub));
        for (auto& sub : split_components(fb)) work.push_back(std::move(sub));
    }
    return d;
}

std::vector<int> RDivision::apply_change(const ChangeRecord& rec) {
    std::vector<int> touched;
    ++updates_;
    if (rec.kind == ChangeRecord::Kind::insert) {
        ensure_edge_slot(rec.edge);
        // Lowest common region of both endpoints, if any.
        int common = -1;
        for (auto& [ra, ca] : vert_regions_[rec.u])
            for (auto& [rb, cb] : vert_regions_[rec.v])
                if (ra == rb && (common < 0 || ra < common)) common = ra;
        if (common >= 0) {
            attach_edge(common, rec.edge, rec.u, rec.v, &touched);
            touched.push_back(common);
        } else {
            int fresh = new_region();
            attach_edge(fresh, rec.edge, rec.u, rec.v, &touched);
            touched.push_back(fresh);
        }
    } else {
        int region = rec.edge < static_cast<EdgeId>(edge_region_.size()) ? edge_region_[rec.edge]
                                                                         : -1;
        if (region < 0) throw std::invalid_argument("division: change references untracked edge");
        detach_edge(rec.edge, &touched);
        dec_membership(rec.u, region, &touched);
        dec_membership(rec.v, region, &touched);
        touched.push_back(region);
        if (regions_[region].edges.empty()) {
            regions_[region].live = false;
            --live_regions_;
        }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    return touched;
}

int RDivision::home_region(VertexId v) const {
    int best = -1;
    for (auto& [rid, cnt] : vert_regions_.at(v))
        if (regions_[rid].live && (best < 0 || rid < best)) best = rid;
    return best;
}

std::vector<int> RDivision::live_region_ids() const {
    std::vector<int> out;
    out.reserve(live_regions_);
    for (const Region& r : regions_)
        if (r.live) out.push_back(r.id);
    return out;
}

std::vector<VertexId> RDivision::boundary_of(int id) const {
    const Region& r = regions_.at(id);
    std::vector<VertexId> out(r.boundary.begin(), r.boundary.end());
    std::sort(out.begin(), out.end());
    return out;
}

DivisionReport RDivision::validate(const WeightedGraph& g) const {
    DivisionReport rep;
    auto check = [&](std::string name, bool pass, double measured, double bound,
                     std::string note = "") {
        rep.checks.push_back({std::move(name), pass, measured, bound, std::move(note)});
        rep.pass = rep.pass && pass;
    };

    // Edge partition exactness: every live edge in exactly one live region,
    // and region edge lists contain exactly the live edges.
    long long missing = 0, stale = 0;
    g.for_each_edge([&](EdgeId e, const Edge&) {
        int r = region_of_edge(e);
        if (r < 0 || !region_live(r)) ++missing;
    });
    long long listed = 0;
    for (const Region& r : regions_) {
        if (!r.live) continue;
        for (EdgeId e : r.edges) {
            ++listed;
            if (!g.edge_live(e) || edge_region_[e] != r.id) ++stale;
        }
    }
    bool exact = missing == 0 && stale == 0 && listed == g.edge_count();
    check("edge-partition", exact, static_cast<double>(missing + stale), 0.0,
          "every edge in exactly one region");

    int max_size = 0;
    for (const Region& r : regions_)
        if (r.live) max_size = std::max(max_size, static_cast<int>(r.verts.size()));
    check("region-size", max_size <= cfg_.r, max_size, cfg_.r);

    // Recompute boundary sets from scratch and compare.
    long long mism = 0;
    {
        std::vector<std::vector<std::pair<int, int>>> recomputed(n_);
        g.for_each_edge([&](EdgeId e, const Edge& ed) {
            int r = region_of_edge(e);
            for (VertexId w : {ed.u, ed.v}) {
                bool found = false;
                for (auto& [rid, cnt] : recomputed[w])
                    if (rid == r) {
                        ++cnt;
                        found = true;
                    }
                if (!found) recomputed[w].emplace_back(r, 1);
            }
        });
        for (VertexId v = 0; v < n_; ++v) {
            bool is_bd = recomputed[v].size() >= 2;
            for (auto& [rid, cnt] : recomputed[v]) {
                if (rid < 0 || !region_live(rid)) continue;
                if (regions_[rid].boundary.count(v) != static_cast<size_t>(is_bd)) ++mism;
            }
        }
        for (const Region& r : regions_) {
            if (!r.live) continue;
            for (VertexId v : r.boundary) {
                bool found = false;
                for (auto& [rid, cnt] : recomputed[v])
                    if (rid == r.id) found = true;
                if (!found) ++mism;
            }
        }
    }
    check("stored-boundary", mism == 0, static_cast<double>(mism), 0.0,
          "stored boundary equals recomputed boundary");

    double n = static_cast<double>(n_);
    double ell_bound = cfg_.c1 * n / cfg_.r + updates_;
    check("region-count", live_regions_ <= ell_bound, live_regions_, ell_bound);

    double bd_bound = cfg_.c2 * n / std::sqrt(static_cast<double>(cfg_.r)) + 2.0 * updates_;
    check("boundary-total", static_cast<double>(boundary_total_) <= bd_bound,
          static_cast<double>(boundary_total_), bd_bound);

    // Informational: the strong-division per-region bound is not asserted.
    int max_bd = 0;
    for (const Region& r : regions_)
        if (r.live) max_bd = std::max(max_bd, static_cast<int>(r.boundary.size()));
    check("max-region-boundary", true, max_bd,
          cfg_.c_sep * std::sqrt(static_cast<double>(cfg_.r)), "informational");
    return rep;
}

std::string DivisionReport::to_json() const {
    std::ostringstream os;
    os << "{\"pass\":" << (pass ? "true" : "false") << ",\"checks\":[";
    for (size_t i = 0; i < checks.size(); ++i) {
        const auto& c = checks[i];
        if (i) os << ',';
        os << "{\"name\":\"" << c.name << "\",\"pass\":" << (c.pass ? "true" : "false")
           << ",\"measured\":" << c.measured << ",\"bound\":" << c.bound << "}";
    }
    os << "]}";
    return os.str();
}

RDivision build_rdivision(const WeightedGraph& g, int r, uint64_t seed) {
    DivisionConfig cfg;
    cfg.r = r;
    cfg.seed = seed;
    return RDivision::build(g, cfg);
}

DivisionReport validate_rdivision(const RDivision& d, const WeightedGraph& g) {
    return d.validate(g);
}

}  // namespace dynflow
