#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "dynflow/generators.hpp"
#include "dynflow/oracles.hpp"
#include "dynflow/partition.hpp"
#include "dynflow/util.hpp"

namespace {

using namespace dynflow;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

Mode mode_weights(ReplayMode m) {
    switch (m) {
        case ReplayMode::maxflow: return Mode::capacity;
        case ReplayMode::apsp: return Mode::length;
        default: return Mode::conductance;
    }
}

ScriptOp::Kind query_kind(ReplayMode m) {
    switch (m) {
        case ReplayMode::maxflow: return ScriptOp::Kind::query_flow;
        case ReplayMode::apsp: return ScriptOp::Kind::query_dist;
        default: return ScriptOp::Kind::query_energy;
    }
}

int cmd_gen(const std::string& kind, int size, uint64_t seed, const std::string& out_path,
            bool unit_weights, double density, double delete_fraction) {
    if (kind == "grid") {
        int side = std::max(1, static_cast<int>(std::llround(std::sqrt(double(size)))));
        WeightedGraph g = make_grid(side, Mode::conductance, seed, unit_weights);
        auto out = open_out(out_path);
        write_graph(out, g);
    } else if (kind == "random-planar") {
        PlanarInstance inst =
            make_random_planar(size, Mode::conductance, seed, delete_fraction, unit_weights);
        auto out = open_out(out_path);
        write_graph(out, inst.graph);
    } else if (kind == "omv") {
        auto m = make_omv_matrix(size, size, density, seed);
        auto out = open_out(out_path);
        write_omv_matrix(out, m);
    } else {
        std::cerr << "unknown gen kind: " << kind << " (grid|random-planar|omv)\n";
        return 2;
    }
    return 0;
}

int cmd_run(const std::string& graph_path, const std::string& script_path,
            const std::string& mode_name, int r, double eps, int q, uint64_t seed,
            bool worst_case, bool audit, int seeds, int jobs, const std::string& out_path) {
    ReplayMode mode = replay_mode_from_string(mode_name);
    WeightedGraph g = read_graph_file(graph_path, mode_weights(mode));
    std::vector<ScriptOp> script = parse_script_file(script_path);

    ReplayParams params;
    params.mode = mode;
    params.r = r;
    params.eps = eps;
    params.q = q;
    params.seed = seed;
    params.worst_case = worst_case;
    params.audit = audit;

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file = open_out(out_path);
        out = &file;
    }

    if (seeds <= 1) {
        ReplayReport rep = replay_compare(g, script, params);
        write_report_jsonl(*out, rep);
        nlohmann::json summary;
        summary["kind"] = "summary";
        summary["mode"] = to_string(mode);
        summary["queries"] = rep.queries.size();
        summary["updates"] = rep.update_micros.size();
        summary["failures"] = rep.failures;
        summary["failure_fraction"] = rep.failure_fraction;
        summary["audit_pass"] = rep.audit_pass;
        *out << summary.dump() << '\n';
        if (!rep.audit_pass) return 3;
        return 0;
    }

    // Independent seeded replays, optionally in parallel.
    std::vector<ReplayReport> reports(seeds);
    std::mutex next_mutex;
    int next = 0;
    auto worker = [&] {
        while (true) {
            int mine;
            {
                std::lock_guard<std::mutex> lk(next_mutex);
                if (next >= seeds) return;
                mine = next++;
            }
            ReplayParams p = params;
            p.seed = seed + static_cast<uint64_t>(mine);
            reports[mine] = replay_compare(g, script, p);
        }
    };
    int nthreads = std::max(1, std::min(jobs, seeds));
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    bool audit_all = true;
    for (int i = 0; i < seeds; ++i) {
        const ReplayReport& rep = reports[i];
        nlohmann::json summary;
        summary["kind"] = "summary";
        summary["seed"] = seed + static_cast<uint64_t>(i);
        summary["queries"] = rep.queries.size();
        summary["failures"] = rep.failures;
        summary["failure_fraction"] = rep.failure_fraction;
        summary["audit_pass"] = rep.audit_pass;
        *out << summary.dump() << '\n';
        audit_all = audit_all && rep.audit_pass;
    }
    return audit_all ? 0 : 3;
}

int cmd_bench(const std::string& graph_path, const std::string& mode_name,
              const std::string& sweep, int updates, int queries, uint64_t seed,
              const std::string& out_path) {
    ReplayMode mode = replay_mode_from_string(mode_name);
    if (mode == ReplayMode::subgraph)
        throw std::invalid_argument("bench supports eflow, maxflow and apsp modes");
    WeightedGraph g = read_graph_file(graph_path, mode_weights(mode));

    std::vector<int> rs;
    std::stringstream ss(sweep);
    for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) rs.push_back(std::stoi(tok));
    if (rs.empty()) throw std::invalid_argument("empty --r-sweep");

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file = open_out(out_path);
        out = &file;
    }
    *out << "r,mean_update_us,p99_update_us,mean_query_us,failure_rate,mean_assembled_vertices\n";
    for (int r : rs) {
        std::vector<ScriptOp> script =
            make_edge_script(g, {}, updates, queries, query_kind(mode), mix64(seed, r));
        ReplayParams params;
        params.mode = mode;
        params.r = r;
        params.seed = seed;
        ReplayReport rep = replay_compare(g, script, params);
        *out << r << ',' << rep.mean_update_us() << ',' << rep.p99_update_us() << ','
             << rep.mean_query_us() << ',' << rep.failure_fraction << ','
             << rep.mean_assembled_vertices() << '\n';
        out->flush();
    }
    return 0;
}

int cmd_audit(const std::string& graph_path, int r, uint64_t seed) {
    WeightedGraph g = read_graph_file(graph_path, Mode::conductance);
    RDivision d = build_rdivision(g, r, seed);
    DivisionReport rep = d.validate(g);
    std::cout << rep.to_json() << '\n';
    return rep.pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic r-division sparsifier toolkit"};
    app.require_subcommand(1);

    // gen
    std::string gen_kind, gen_out;
    int gen_size = 16;
    uint64_t gen_seed = 0;
    bool gen_unit = false;
    double gen_density = 0.3, gen_delete = 0.25;
    auto* gen = app.add_subcommand("gen", "generate graphs / matrices");
    gen->add_option("kind", gen_kind, "grid | random-planar | omv")->required();
    gen->add_option("--size", gen_size, "vertex count (grid: rounded to a square)")->required();
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--out", gen_out, "output file")->required();
    gen->add_flag("--unit-weights", gen_unit, "all weights 1.0");
    gen->add_option("--density", gen_density, "omv: 1-probability per cell");
    gen->add_option("--delete-fraction", gen_delete, "random-planar: edges removed");

    // run
    std::string run_graph, run_script, run_mode = "eflow", run_out;
    int run_r = 0, run_q = 1, run_seeds = 1, run_jobs = 1;
    double run_eps = 0.3;
    uint64_t run_seed = 0;
    bool run_wc = false, run_audit = false;
    auto* run = app.add_subcommand("run", "replay a script against a dynamic structure");
    run->add_option("--graph", run_graph)->required();
    run->add_option("--script", run_script)->required();
    run->add_option("--mode", run_mode, "eflow | maxflow | apsp | subgraph");
    run->add_option("--r", run_r, "region size (0: n^(2/3))");
    run->add_option("--eps", run_eps);
    run->add_option("--q", run_q, "apsp stretch parameter");
    run->add_option("--seed", run_seed);
    run->add_flag("--worst-case", run_wc, "two-copy scheduler (eflow)");
    run->add_flag("--audit", run_audit, "validate division invariants per update");
    run->add_option("--seeds", run_seeds, "number of independent seeded replays");
    run->add_option("--jobs", run_jobs, "worker threads for --seeds > 1");
    run->add_option("--out", run_out, "write JSON lines here instead of stdout");

    // bench
    std::string bench_graph, bench_mode = "eflow", bench_sweep, bench_out;
    int bench_updates = 200, bench_queries = 50;
    uint64_t bench_seed = 0;
    auto* bench = app.add_subcommand("bench", "r-sweep timing CSV");
    bench->add_option("--graph", bench_graph)->required();
    bench->add_option("--mode", bench_mode);
    bench->add_option("--r-sweep", bench_sweep, "comma separated region sizes")->required();
    bench->add_option("--updates", bench_updates);
    bench->add_option("--queries", bench_queries);
    bench->add_option("--seed", bench_seed);
    bench->add_option("--out", bench_out, "write CSV here instead of stdout");

    // audit
    std::string audit_graph;
    int audit_r = 64;
    uint64_t audit_seed = 0;
    auto* audit = app.add_subcommand("audit", "build an r-division and print the validator report");
    audit->add_option("--graph", audit_graph)->required();
    audit->add_option("--r", audit_r);
    audit->add_option("--seed", audit_seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(gen_kind, gen_size, gen_seed, gen_out, gen_unit, gen_density,
                           gen_delete);
        if (run->parsed())
            return cmd_run(run_graph, run_script, run_mode, run_r, run_eps, run_q, run_seed,
                           run_wc, run_audit, run_seeds, run_jobs, run_out);
        if (bench->parsed())
            return cmd_bench(bench_graph, bench_mode, bench_sweep, bench_updates, bench_queries,
                             bench_seed, bench_out);
        if (audit->parsed()) return cmd_audit(audit_graph, audit_r, audit_seed);
    } catch (const dynflow::ScriptError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
