#include "dynflow/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "dynflow/util.hpp"

namespace dynflow {

namespace {

int derive_delta(const EngineConfig& cfg, int n) {
    long long t = cfg.t_div > 0
                      ? cfg.t_div
                      : std::max<long long>(1, llround(cfg.c_t * n / std::max(1, cfg.division.r)));
    return static_cast<int>((t + 3) / 4);  // Delta rounds up to >= 1
}

}  // namespace

RegionEngine::RegionEngine(WeightedGraph graph, EngineConfig cfg, SparsifierFn sparsifier)
    : RegionEngine(std::move(graph), std::move(cfg), std::move(sparsifier), 0, deferred_t{}) {
    build_division();
    while (!build_queue_.empty()) sparsify_next_region();
}

RegionEngine::RegionEngine(WeightedGraph graph, EngineConfig cfg, SparsifierFn sparsifier,
                           uint64_t epoch, deferred_t)
    : cfg_(std::move(cfg)), sparsifier_(std::move(sparsifier)), graph_(std::move(graph)),
      epoch_(epoch) {
    delta_ = derive_delta(cfg_, graph_.vertex_count());
    if (!cfg_.division.separator) cfg_.division.separator = bfs_level_separator;
}

void RegionEngine::build_division() {
    DivisionConfig dc = cfg_.division;
    dc.seed = mix64(cfg_.seed, epoch_);
    division_ = RDivision::build(graph_, dc);
    artifacts_.assign(division_.region_slots(), RegionArtifact{});
    for (int id : division_.live_region_ids()) build_queue_.push_back(id);
    division_built_ = true;
}

void RegionEngine::sparsify_next_region() {
    if (build_queue_.empty()) throw std::logic_error("sparsify_next_region: nothing pending");
    int id = build_queue_.front();
    build_queue_.pop_front();
    resparsify(id);
}

void RegionEngine::resparsify(int region) {
    if (static_cast<size_t>(region) >= artifacts_.size())
        artifacts_.resize(region + 1, RegionArtifact{});
    RegionArtifact& art = artifacts_[region];
    if (!division_.region_live(region)) {
        art = RegionArtifact{};
        return;
    }
    uint64_t seed = mix64(cfg_.seed, epoch_, static_cast<uint64_t>(region), ++resparsify_counter_);
    std::vector<VertexId> terminals = division_.boundary_of(region);
    auto [edges, cert] = sparsifier_(graph_, division_.region(region).edges, terminals, seed);
    art.valid = true;
    art.edges = std::move(edges);
    art.terminals = std::move(terminals);
    art.cert = cert;
    ++stats_.sparsifier_calls;
    ++stats_.last_update_sparsifier_calls;
}

void RegionEngine::apply_update_core(const EdgeAction& action) {
    ChangeRecord rec = mutate_edge(graph_, action);
    std::vector<int> touched = division_.apply_change(rec);
    stats_.last_update_sparsifier_calls = 0;
    for (int region : touched) {
        if (division_.region_live(region))
            resparsify(region);
        else if (static_cast<size_t>(region) < artifacts_.size())
            artifacts_[region] = RegionArtifact{};
    }
    ++stats_.updates;
}

void RegionEngine::apply(const EdgeAction& action) {
    apply_update_core(action);
    if (!cfg_.auto_rebuild) return;
    ++ops_;
    if (ops_ == 2 * delta_) {
        snapshot_ = graph_;
        log_.clear();
    } else if (ops_ > 2 * delta_) {
        log_.push_back(action);
    }
    if (ops_ >= 4 * delta_) rebuild_from_snapshot();
}

void RegionEngine::rebuild_from_snapshot() {
    if (!snapshot_) throw std::logic_error("rebuild: missing snapshot");
    RegionEngine fresh(std::move(*snapshot_), cfg_, sparsifier_, epoch_ + 1, deferred_t{});
    fresh.build_division();
    while (!fresh.build_queue_.empty()) fresh.sparsify_next_region();
    for (const EdgeAction& a : log_) fresh.apply_update_core(a);
    if (fresh.graph_.edge_count() != graph_.edge_count())
        throw std::logic_error("rebuild: replayed graph diverged");
    graph_ = std::move(fresh.graph_);
    division_ = std::move(fresh.division_);
    artifacts_ = std::move(fresh.artifacts_);
    epoch_ = fresh.epoch_;
    resparsify_counter_ = fresh.resparsify_counter_;
    stats_.sparsifier_calls += fresh.stats_.sparsifier_calls;
    ++stats_.rebuilds;
    ops_ = 0;
    snapshot_.reset();
    log_.clear();
}

std::vector<Edge> RegionEngine::assemble(VertexId s, VertexId t, int* vertices_out) const {
    int n = graph_.vertex_count();
    if (s < 0 || s >= n || t < 0 || t >= n)
        throw std::out_of_range("assemble: query vertex out of range");
    int ps = division_.home_region(s);
    int pt = division_.home_region(t);
    std::vector<Edge> out;
    for (int id : division_.live_region_ids()) {
        if (id == ps || id == pt) {
            for (EdgeId e : division_.region(id).edges) out.push_back(graph_.edge(e));
        } else {
            const RegionArtifact& art = artifacts_[id];
            out.insert(out.end(), art.edges.begin(), art.edges.end());
        }
    }
    if (vertices_out) {
        std::unordered_set<VertexId> seen{s, t};
        for (const Edge& e : out) {
            seen.insert(e.u);
            seen.insert(e.v);
        }
        *vertices_out = static_cast<int>(seen.size());
    }
    return out;
}

WeightedGraph RegionEngine::assemble_graph(VertexId s, VertexId t, int* vertices_out) const {
    WeightedGraph h(graph_.vertex_count(), graph_.mode());
    for (const Edge& e : assemble(s, t, vertices_out)) h.insert_edge(e.u, e.v, e.w);
    return h;
}

// ---------------------------------------------------------------------------
// RebuildScheduler

RebuildScheduler::RebuildScheduler(WeightedGraph graph, EngineConfig cfg, SparsifierFn sparsifier)
    : cfg_(std::move(cfg)), sparsifier_(std::move(sparsifier)) {
    cfg_.auto_rebuild = false;
    d1_ = std::make_unique<RegionEngine>(std::move(graph), cfg_, sparsifier_);
    delta_ = d1_->delta();
    int n = d1_->graph().vertex_count();
    int ell_cap = static_cast<int>(std::ceil(cfg_.division.c1 * n / std::max(1, cfg_.division.r)))
                  + 4 * delta_ + 8;
    int teardown_cap = (ell_cap + 2 + 2 * delta_ - 1) / (2 * delta_);
    int build_cap = delta_ == 1 ? ell_cap + 4 : (ell_cap + 2 + delta_ - 1) / delta_ + 2;
    work_.budget = 1 + std::max({teardown_cap, build_cap, 2});
}

void RegionEngine::clear_artifact(int region) {
    if (static_cast<size_t>(region) < artifacts_.size()) artifacts_[region] = RegionArtifact{};
}

int RebuildScheduler::run_teardown(int units) {
    int done = 0;
    while (retired_ && done < units) {
        if (teardown_pos_ < retired_regions_.size()) {
            retired_->clear_artifact(retired_regions_[teardown_pos_++]);
            ++done;
        } else {
            retired_.reset();
            retired_regions_.clear();
            teardown_pos_ = 0;
            ++done;
        }
    }
    return done;
}

int RebuildScheduler::run_build(int calls_left) {
    int done = 0;
    if (!d2_) {
        if (!snapshot_) throw std::logic_error("scheduler: construction started without snapshot");
        d2_ = std::make_unique<RegionEngine>(std::move(*snapshot_), cfg_, sparsifier_,
                                             d1_->epoch() + 1, RegionEngine::deferred_t{});
        snapshot_.reset();
        d2_->build_division();
        done += 2;  // graph adoption + division build
    }
    int remaining = d2_->pending_region_count();
    int todo = calls_left <= 1 ? remaining : (remaining + calls_left - 1) / calls_left;
    for (int i = 0; i < todo; ++i) {
        d2_->sparsify_next_region();
        ++done;
    }
    return done;
}

void RebuildScheduler::apply(const EdgeAction& action) {
    int units = 1;  // the D1 update itself
    d1_->apply_update_core(action);
    ++j_;
    if (j_ == 2 * delta_) {
        snapshot_ = d1_->graph();
        log_.clear();
        log_pos_ = 0;
    } else if (j_ > 2 * delta_) {
        log_.push_back(action);
    }

    if (j_ <= 2 * delta_) {
        units += run_teardown(teardown_slice_);
    } else if (j_ <= 3 * delta_) {
        units += run_build(3 * delta_ - j_ + 1);
    } else {
        // Catch D2 up with two logged updates per call.
        for (int k = 0; k < 2; ++k) {
            if (log_pos_ >= log_.size()) throw std::logic_error("scheduler: catch-up starved");
            d2_->apply_update_core(log_[log_pos_++]);
            ++units;
        }
    }

    if (j_ == 4 * delta_) {
        if (!d2_ || !d2_->build_done() || log_pos_ != log_.size())
            throw std::logic_error("scheduler: swap reached with unfinished work");
        retired_ = std::move(d1_);
        d1_ = std::move(d2_);
        retired_regions_ = retired_->division().live_region_ids();
        teardown_pos_ = 0;
        teardown_slice_ =
            (static_cast<int>(retired_regions_.size()) + 2 + 2 * delta_ - 1) / (2 * delta_);
        log_.clear();
        log_pos_ = 0;
        j_ = 0;
        ++work_.swaps;
    }

    ++work_.calls;
    work_.last_call_units = units;
    work_.max_call_units = std::max(work_.max_call_units, units);
    if (units > work_.budget)
        throw std::logic_error("scheduler: per-call work budget exceeded");
}

}  // namespace dynflow
