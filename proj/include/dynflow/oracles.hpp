#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynflow/graph.hpp"

namespace dynflow {

// From-scratch ground truth on the full current graph.
double oracle_energy(const WeightedGraph& g, VertexId s, VertexId t);
double oracle_maxflow(const WeightedGraph& g, VertexId s, VertexId t);
double oracle_distance(const WeightedGraph& g, VertexId s, VertexId t);
// Terminal bipartition values, mask bit i <=> K[i] on K[0]'s side.
std::vector<std::pair<uint32_t, double>> oracle_cut_profile(const WeightedGraph& g,
                                                            const std::vector<VertexId>& K);

class ScriptError : public std::runtime_error {
public:
    ScriptError(int line, const std::string& msg)
        : std::runtime_error("script line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// One operation per line: "I u v w", "D u v", "Q s t", "QF s t", "QD s t",
// "A v"; '#' starts a comment.
struct ScriptOp {
    enum class Kind { insert, erase, query_energy, query_flow, query_dist, activate };
    Kind kind = Kind::insert;
    VertexId u = -1;
    VertexId v = -1;
    double w = 0.0;
    int line = 0;
};

std::vector<ScriptOp> parse_script(std::istream& in);
std::vector<ScriptOp> parse_script_file(const std::string& path);
void write_script(std::ostream& out, const std::vector<ScriptOp>& script);

enum class ReplayMode { eflow, maxflow, apsp, subgraph };
ReplayMode replay_mode_from_string(const std::string& name);
std::string to_string(ReplayMode mode);

struct ReplayParams {
    ReplayMode mode = ReplayMode::eflow;
    int r = 0;  // 0 -> round(n^{2/3}), floored at 4
    double eps = 0.3;
    int q = 1;
    uint64_t seed = 0;
    bool worst_case = false;  // eflow only
    bool audit = false;       // validate the division after every update
};

struct QueryRecord {
    int op_index = 0;
    std::string kind;
    VertexId s = -1, t = -1;
    double answer = 0.0;
    double oracle = 0.0;
    double ratio = 1.0;
    bool ok = true;
    long long micros = 0;
    long long oracle_micros = 0;
    int assembled_vertices = 0;
    int assembled_edges = 0;
};

struct ReplayReport {
    ReplayMode mode = ReplayMode::eflow;
    std::vector<QueryRecord> queries;
    std::vector<long long> update_micros;
    int failures = 0;
    double failure_fraction = 0.0;
    bool audit_pass = true;
    std::string audit_note;

    double mean_update_us() const;
    double p99_update_us() const;
    double mean_query_us() const;
    double mean_oracle_us() const;
    double mean_assembled_vertices() const;
};

// Runs the dynamic structure and the oracle side by side over the script.
ReplayReport replay_compare(const WeightedGraph& g0, const std::vector<ScriptOp>& script,
                            const ReplayParams& params);

// One JSON object per query: {op_index, kind, s, t, answer, oracle, ratio, micros}.
void write_report_jsonl(std::ostream& out, const ReplayReport& report);

}  // namespace dynflow
