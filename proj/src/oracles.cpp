#include "dynflow/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "dynflow/apsp.hpp"
#include "dynflow/eflow.hpp"
#include "dynflow/maxflow.hpp"
#include "dynflow/resistance.hpp"
#include "dynflow/subgraph.hpp"
#include "dynflow/util.hpp"

namespace dynflow {

double oracle_energy(const WeightedGraph& g, VertexId s, VertexId t) {
    return effective_resistance(g, s, t);
}

double oracle_maxflow(const WeightedGraph& g, VertexId s, VertexId t) {
    return max_flow(g, s, t);
}

double oracle_distance(const WeightedGraph& g, VertexId s, VertexId t) {
    return dijkstra_dist(g, s, t);
}

std::vector<std::pair<uint32_t, double>> oracle_cut_profile(const WeightedGraph& g,
                                                            const std::vector<VertexId>& K) {
    return terminal_cut_profile(g.vertex_count(), g.edge_list(), K);
}

std::vector<ScriptOp> parse_script(std::istream& in) {
    std::vector<ScriptOp> ops;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        ScriptOp op;
        op.line = lineno;
        auto need_pair = [&](const char* what) {
            long long a, b;
            if (!(ls >> a >> b)) throw ScriptError(lineno, std::string("expected ") + what);
            op.u = static_cast<VertexId>(a);
            op.v = static_cast<VertexId>(b);
        };
        if (tok == "I") {
            need_pair("\"I u v w\"");
            if (!(ls >> op.w)) throw ScriptError(lineno, "expected \"I u v w\"");
            op.kind = ScriptOp::Kind::insert;
        } else if (tok == "D") {
            need_pair("\"D u v\"");
            op.kind = ScriptOp::Kind::erase;
        } else if (tok == "Q") {
            need_pair("\"Q s t\"");
            op.kind = ScriptOp::Kind::query_energy;
        } else if (tok == "QF") {
            need_pair("\"QF s t\"");
            op.kind = ScriptOp::Kind::query_flow;
        } else if (tok == "QD") {
            need_pair("\"QD s t\"");
            op.kind = ScriptOp::Kind::query_dist;
        } else if (tok == "A") {
            long long a;
            if (!(ls >> a)) throw ScriptError(lineno, "expected \"A v\"");
            op.u = static_cast<VertexId>(a);
            op.kind = ScriptOp::Kind::activate;
        } else {
            throw ScriptError(lineno, "unknown operation \"" + tok + "\"");
        }
        std::string rest;
        if (ls >> rest) throw ScriptError(lineno, "trailing tokens");
        ops.push_back(op);
    }
    return ops;
}

std::vector<ScriptOp> parse_script_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open script file: " + path);
    return parse_script(in);
}

void write_script(std::ostream& out, const std::vector<ScriptOp>& script) {
    out.precision(17);
    for (const ScriptOp& op : script) {
        switch (op.kind) {
            case ScriptOp::Kind::insert: out << "I " << op.u << ' ' << op.v << ' ' << op.w; break;
            case ScriptOp::Kind::erase: out << "D " << op.u << ' ' << op.v; break;
            case ScriptOp::Kind::query_energy: out << "Q " << op.u << ' ' << op.v; break;
            case ScriptOp::Kind::query_flow: out << "QF " << op.u << ' ' << op.v; break;
            case ScriptOp::Kind::query_dist: out << "QD " << op.u << ' ' << op.v; break;
            case ScriptOp::Kind::activate: out << "A " << op.u; break;
        }
        out << '\n';
    }
}

ReplayMode replay_mode_from_string(const std::string& name) {
    if (name == "eflow") return ReplayMode::eflow;
    if (name == "maxflow") return ReplayMode::maxflow;
    if (name == "apsp") return ReplayMode::apsp;
    if (name == "subgraph") return ReplayMode::subgraph;
    throw std::invalid_argument("unknown mode: " + name);
}

std::string to_string(ReplayMode mode) {
    switch (mode) {
        case ReplayMode::eflow: return "eflow";
        case ReplayMode::maxflow: return "maxflow";
        case ReplayMode::apsp: return "apsp";
        case ReplayMode::subgraph: return "subgraph";
    }
    return "?";
}

double ReplayReport::mean_update_us() const {
    if (update_micros.empty()) return 0.0;
    double s = std::accumulate(update_micros.begin(), update_micros.end(), 0.0);
    return s / static_cast<double>(update_micros.size());
}

double ReplayReport::p99_update_us() const {
    if (update_micros.empty()) return 0.0;
    std::vector<long long> v = update_micros;
    std::sort(v.begin(), v.end());
    size_t idx = std::min(v.size() - 1, static_cast<size_t>(std::ceil(v.size() * 0.99)) - 0);
    if (idx >= v.size()) idx = v.size() - 1;
    return static_cast<double>(v[idx]);
}

double ReplayReport::mean_query_us() const {
    if (queries.empty()) return 0.0;
    double s = 0;
    for (const auto& q : queries) s += static_cast<double>(q.micros);
    return s / static_cast<double>(queries.size());
}

double ReplayReport::mean_oracle_us() const {
    if (queries.empty()) return 0.0;
    double s = 0;
    for (const auto& q : queries) s += static_cast<double>(q.oracle_micros);
    return s / static_cast<double>(queries.size());
}

double ReplayReport::mean_assembled_vertices() const {
    if (queries.empty()) return 0.0;
    double s = 0;
    for (const auto& q : queries) s += q.assembled_vertices;
    return s / static_cast<double>(queries.size());
}

namespace {

int default_r(int n) {
    int r = static_cast<int>(std::llround(std::pow(static_cast<double>(n), 2.0 / 3.0)));
    return std::max(4, r);
}

struct QueryJudge {
    ReplayMode mode;
    double eps;
    int q;
    double quality;  // max-flow sparsifier quality

    // Fills ratio/ok given answer and oracle value.
    void judge(QueryRecord& rec) const {
        bool fin_a = std::isfinite(rec.answer), fin_o = std::isfinite(rec.oracle);
        if (!fin_a || !fin_o) {
            rec.ratio = (fin_a == fin_o) ? 1.0 : kInf;
            rec.ok = fin_a == fin_o;
            return;
        }
        rec.ratio = rec.oracle != 0.0 ? rec.answer / rec.oracle
                                      : (rec.answer == 0.0 ? 1.0 : kInf);
        switch (mode) {
            case ReplayMode::eflow:
            case ReplayMode::subgraph:
                rec.ok = std::abs(rec.ratio - 1.0) <= eps + 1e-9;
                break;
            case ReplayMode::maxflow: {
                double lo = rec.oracle * (1.0 - 1e-9) - 1e-12;
                double hi = quality * rec.oracle * (1.0 + 1e-9) + 1e-12;
                rec.ok = rec.answer >= lo && rec.answer <= hi;
                break;
            }
            case ReplayMode::apsp: {
                double lo = rec.oracle * (1.0 - 1e-9) - 1e-12;
                double hi = (2.0 * q - 1.0) * rec.oracle * (1.0 + 1e-9) + 1e-12;
                rec.ok = rec.answer >= lo && rec.answer <= hi;
                break;
            }
        }
    }
};

}  // namespace

ReplayReport replay_compare(const WeightedGraph& g0, const std::vector<ScriptOp>& script,
                            const ReplayParams& params) {
    ReplayReport rep;
    rep.mode = params.mode;
    int n = g0.vertex_count();
    int r = params.r > 0 ? params.r : default_r(n);

    WeightedGraph mirror = g0;  // resolves "D u v" to edge ids and feeds oracles
    std::vector<bool> active(n, false);

    std::unique_ptr<EFlowStructure> ef;
    std::unique_ptr<WorstCaseEFlow> wc;
    std::unique_ptr<MaxFlowStructure> mf;
    std::unique_ptr<ApspStructure> ap;
    std::unique_ptr<SubgraphEFlow> sg;

    switch (params.mode) {
        case ReplayMode::eflow: {
            EFlowConfig cfg;
            cfg.r = r;
            cfg.eps = params.eps;
            cfg.seed = params.seed;
            if (params.worst_case)
                wc = std::make_unique<WorstCaseEFlow>(g0, cfg);
            else
                ef = std::make_unique<EFlowStructure>(g0, cfg);
            break;
        }
        case ReplayMode::maxflow: {
            MaxFlowConfig cfg;
            cfg.r = r;
            cfg.seed = params.seed;
            mf = std::make_unique<MaxFlowStructure>(g0, cfg);
            break;
        }
        case ReplayMode::apsp: {
            ApspConfig cfg;
            cfg.r = r;
            cfg.q = params.q;
            cfg.seed = params.seed;
            ap = std::make_unique<ApspStructure>(g0, cfg);
            break;
        }
        case ReplayMode::subgraph: {
            SubgraphConfig cfg;
            cfg.r = r;
            cfg.eps = params.eps;
            cfg.seed = params.seed;
            sg = std::make_unique<SubgraphEFlow>(g0, cfg);
            break;
        }
    }

    QueryJudge judge{params.mode, params.eps, params.q, mf ? mf->declared_quality() : 1.0};

    auto division_ok = [&]() -> bool {
        const RegionEngine* engine = ef   ? &ef->engine()
                                     : wc ? &wc->scheduler().serving()
                                     : mf ? &mf->engine()
                                     : ap ? &ap->engine()
                                          : nullptr;
        if (!engine) return true;
        DivisionReport dr = engine->division().validate(engine->graph());
        for (const auto& c : dr.checks)
            if (c.name == "edge-partition" || c.name == "stored-boundary" ||
                c.name == "region-size")
                if (!c.pass) return false;
        return true;
    };

    int op_index = 0;
    for (const ScriptOp& op : script) {
        ++op_index;
        switch (op.kind) {
            case ScriptOp::Kind::insert:
            case ScriptOp::Kind::erase: {
                if (params.mode == ReplayMode::subgraph)
                    throw ScriptError(op.line, "edge updates are not valid in subgraph mode");
                EdgeAction action;
                if (op.kind == ScriptOp::Kind::insert) {
                    action = InsertEdge{op.u, op.v, op.w};
                } else {
                    EdgeId id = mirror.find_edge(op.u, op.v);
                    if (id < 0) throw ScriptError(op.line, "delete of a nonexistent edge");
                    action = DeleteEdge{id};
                }
                StopWatch sw;
                if (ef) ef->update(action);
                if (wc) wc->update(action);
                if (mf) mf->update(action);
                if (ap) ap->update(action);
                rep.update_micros.push_back(sw.micros());
                mutate_edge(mirror, action);
                if (params.audit && !division_ok()) {
                    rep.audit_pass = false;
                    rep.audit_note = "division invariant violated after op " +
                                     std::to_string(op_index);
                }
                break;
            }
            case ScriptOp::Kind::activate: {
                if (params.mode != ReplayMode::subgraph)
                    throw ScriptError(op.line, "\"A\" is only valid in subgraph mode");
                StopWatch sw;
                sg->activate(op.u);
                rep.update_micros.push_back(sw.micros());
                active[op.u] = true;
                break;
            }
            case ScriptOp::Kind::query_energy:
            case ScriptOp::Kind::query_flow:
            case ScriptOp::Kind::query_dist: {
                QueryRecord rec;
                rec.op_index = op_index;
                rec.s = op.u;
                rec.t = op.v;
                StopWatch sw;
                switch (op.kind) {
                    case ScriptOp::Kind::query_energy:
                        if (params.mode == ReplayMode::eflow) {
                            rec.kind = "Q";
                            rec.answer = ef ? ef->query(op.u, op.v, &rec.assembled_vertices,
                                                        &rec.assembled_edges)
                                            : wc->query(op.u, op.v, &rec.assembled_vertices,
                                                        &rec.assembled_edges);
                        } else if (params.mode == ReplayMode::subgraph) {
                            rec.kind = "Q";
                            rec.answer = sg->query(op.u, op.v, &rec.assembled_vertices,
                                                   &rec.assembled_edges);
                        } else {
                            throw ScriptError(op.line, "\"Q\" is not valid in this mode");
                        }
                        break;
                    case ScriptOp::Kind::query_flow:
                        if (params.mode != ReplayMode::maxflow)
                            throw ScriptError(op.line, "\"QF\" is only valid in maxflow mode");
                        rec.kind = "QF";
                        rec.answer =
                            mf->query(op.u, op.v, &rec.assembled_vertices, &rec.assembled_edges);
                        break;
                    default:
                        if (params.mode != ReplayMode::apsp)
                            throw ScriptError(op.line, "\"QD\" is only valid in apsp mode");
                        rec.kind = "QD";
                        rec.answer =
                            ap->query(op.u, op.v, &rec.assembled_vertices, &rec.assembled_edges);
                        break;
                }
                rec.micros = sw.micros();
                StopWatch ow;
                switch (params.mode) {
                    case ReplayMode::eflow:
                        rec.oracle = oracle_energy(mirror, op.u, op.v);
                        break;
                    case ReplayMode::subgraph:
                        rec.oracle = oracle_energy(induced_subgraph(mirror, active), op.u, op.v);
                        break;
                    case ReplayMode::maxflow:
                        rec.oracle = oracle_maxflow(mirror, op.u, op.v);
                        break;
                    case ReplayMode::apsp:
                        rec.oracle = oracle_distance(mirror, op.u, op.v);
                        break;
                }
                rec.oracle_micros = ow.micros();
                judge.judge(rec);
                if (!rec.ok) ++rep.failures;
                rep.queries.push_back(std::move(rec));
                break;
            }
        }
    }
    rep.failure_fraction =
        rep.queries.empty() ? 0.0
                            : static_cast<double>(rep.failures) / rep.queries.size();
    return rep;
}

void write_report_jsonl(std::ostream& out, const ReplayReport& report) {
    for (const QueryRecord& q : report.queries) {
        nlohmann::json j;
        j["op_index"] = q.op_index;
        j["kind"] = q.kind;
        j["s"] = q.s;
        j["t"] = q.t;
        j["answer"] = std::isfinite(q.answer) ? nlohmann::json(q.answer) : nlohmann::json("inf");
        j["oracle"] = std::isfinite(q.oracle) ? nlohmann::json(q.oracle) : nlohmann::json("inf");
        j["ratio"] = std::isfinite(q.ratio) ? nlohmann::json(q.ratio) : nlohmann::json("inf");
        j["micros"] = q.micros;
        out << j.dump() << '\n';
    }
}

}  // namespace dynflow
