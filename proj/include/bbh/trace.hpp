#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bbh/engine.hpp"

namespace bbh {

// One JSON-lines record per round:
// {"round", "moves":{id:port}, "activated", "destroyed":[ids], "positions":{id:node},
//  "roles":{id:letter}, "anchors":[{round,node,port,agent}]}
nlohmann::ordered_json round_to_json(const RoundRecord& r);
std::string trace_to_jsonl(const ExecutionTrace& t);
void write_trace_file(const ExecutionTrace& t, const std::string& path);

// Parsed form used by the renderer and by golden tests.
struct TraceRow {
    int round = 0;
    bool activated = false;
    std::vector<std::pair<AgentId, Port>> moves;
    std::vector<AgentId> destroyed;
    std::vector<std::pair<AgentId, NodeId>> positions;
    std::vector<std::pair<AgentId, std::string>> roles;
};

std::vector<TraceRow> parse_trace_jsonl(std::istream& in);
std::vector<TraceRow> read_trace_file(const std::string& path);

// ASCII time diagram: one row per round, one column per node, cells list the
// role letters of the agents on the node after the round and a dagger per
// agent destroyed there. Layouts: "index" (node ids), "path" (end to end,
// needs a path graph), "bfs" (breadth-first from home in port order). The bbh
// column header carries a '*'. Without an instance the columns are the nodes
// seen in the trace. Throws std::invalid_argument on an unknown layout.
std::string render_time_diagram(const std::vector<TraceRow>& rows, const Instance* inst,
                                const std::string& layout = "index");

}  // namespace bbh
