#include "bbh/trace.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bbh {

using nlohmann::ordered_json;

ordered_json round_to_json(const RoundRecord& r) {
    ordered_json j;
    j["round"] = r.round;
    ordered_json moves = ordered_json::object();
    for (auto [id, p] : r.moves) moves[std::to_string(id)] = p;
    j["moves"] = std::move(moves);
    j["activated"] = r.activated;
    j["destroyed"] = r.destroyed;
    ordered_json pos = ordered_json::object();
    for (auto [id, v] : r.positions) pos[std::to_string(id)] = v;
    j["positions"] = std::move(pos);
    ordered_json roles = ordered_json::object();
    for (const auto& v : r.views)
        if (v.survived) roles[std::to_string(v.id)] = v.role;
    j["roles"] = std::move(roles);
    ordered_json anchors = ordered_json::array();
    for (const auto& a : r.anchors)
        anchors.push_back({{"round", a.round}, {"node", a.node}, {"port", a.port}, {"agent", a.agent}});
    j["anchors"] = std::move(anchors);
    return j;
}

std::string trace_to_jsonl(const ExecutionTrace& t) {
    std::string out;
    for (const auto& r : t.rounds) {
        out += round_to_json(r).dump();
        out += '\n';
    }
    return out;
}

void write_trace_file(const ExecutionTrace& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << trace_to_jsonl(t);
}

std::vector<TraceRow> parse_trace_jsonl(std::istream& in) {
    std::vector<TraceRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            TraceRow row;
            row.round = j.at("round").get<int>();
            row.activated = j.at("activated").get<bool>();
            for (auto& [k, v] : j.at("moves").items()) row.moves.emplace_back(std::stoi(k), v.get<int>());
            for (auto& d : j.at("destroyed")) row.destroyed.push_back(d.get<int>());
            for (auto& [k, v] : j.at("positions").items()) row.positions.emplace_back(std::stoi(k), v.get<int>());
            if (j.contains("roles"))
                for (auto& [k, v] : j.at("roles").items()) row.roles.emplace_back(std::stoi(k), v.get<std::string>());
            rows.push_back(std::move(row));
        } catch (const std::exception& e) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

std::vector<TraceRow> read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace " + path);
    return parse_trace_jsonl(in);
}

}  // namespace bbh

namespace bbh {

namespace {

std::vector<NodeId> column_order(const Instance& inst, const std::string& layout) {
    const int n = inst.graph.node_count();
    std::vector<NodeId> order;
    if (layout == "index") {
        for (NodeId v = 0; v < n; ++v) order.push_back(v);
    } else if (layout == "path") {
        NodeId start = -1;
        for (NodeId v = 0; v < n; ++v) {
            if (inst.graph.degree(v) > 2) throw std::invalid_argument("layout path needs a path graph");
            if (start < 0 && inst.graph.degree(v) <= 1) start = v;
        }
        if (start < 0) throw std::invalid_argument("layout path needs a path graph");
        NodeId prev = -1, cur = start;
        while (cur >= 0) {
            order.push_back(cur);
            NodeId next = -1;
            for (Port p = 1; p <= inst.graph.degree(cur); ++p) {
                const NodeId u = inst.graph.follow(cur, p).to;
                if (u != prev) next = u;
            }
            prev = cur;
            cur = next;
        }
    } else if (layout == "bfs") {
        std::vector<char> seen(n, 0);
        order.push_back(inst.home);
        seen[inst.home] = 1;
        for (std::size_t i = 0; i < order.size(); ++i)
            for (Port p = 1; p <= inst.graph.degree(order[i]); ++p) {
                const NodeId u = inst.graph.follow(order[i], p).to;
                if (!seen[u]) {
                    seen[u] = 1;
                    order.push_back(u);
                }
            }
        for (NodeId v = 0; v < n; ++v)
            if (!seen[v]) order.push_back(v);
    } else {
        throw std::invalid_argument("unknown layout '" + layout + "'");
    }
    return order;
}

}  // namespace

std::string render_time_diagram(const std::vector<TraceRow>& rows, const Instance* inst, const std::string& layout) {
    std::vector<NodeId> order;
    std::optional<NodeId> bbh;
    if (inst) {
        order = column_order(*inst, layout);
        bbh = inst->bbh;
    } else {
        if (layout != "index") throw std::invalid_argument("layout '" + layout + "' needs the graph");
        std::set<NodeId> nodes;
        for (const auto& r : rows)
            for (auto [id, v] : r.positions) nodes.insert(v);
        order.assign(nodes.begin(), nodes.end());
    }
    std::map<NodeId, std::size_t> col;
    for (std::size_t i = 0; i < order.size(); ++i) col[order[i]] = i;

    std::vector<std::string> header = {"round"};
    for (NodeId v : order) header.push_back(std::to_string(v) + (bbh && *bbh == v ? "*" : ""));
    std::vector<std::vector<std::string>> table;
    for (const auto& r : rows) {
        std::vector<std::string> line(order.size() + 1);
        line[0] = std::to_string(r.round) + (r.activated ? "!" : "");
        std::map<AgentId, std::string> role(r.roles.begin(), r.roles.end());
        auto pos = r.positions;
        std::sort(pos.begin(), pos.end());
        for (auto [id, v] : pos) {
            auto it = col.find(v);
            if (it == col.end()) continue;
            std::string& cell = line[it->second + 1];
            if (!cell.empty()) cell += ',';
            auto rl = role.find(id);
            cell += rl != role.end() && !rl->second.empty() ? rl->second : "a" + std::to_string(id);
        }
        if (bbh && col.count(*bbh))
            for (std::size_t i = 0; i < r.destroyed.size(); ++i) line[col[*bbh] + 1] += "†";
        table.push_back(std::move(line));
    }
    // width in code points, so the dagger counts as one column
    auto width = [](const std::string& s) {
        int w = 0;
        for (unsigned char c : s) w += (c & 0xC0) != 0x80;
        return w;
    };
    std::vector<int> w(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) w[i] = width(header[i]);
    for (const auto& line : table)
        for (std::size_t i = 0; i < line.size(); ++i) w[i] = std::max(w[i], width(line[i]));
    auto emit = [&](const std::vector<std::string>& line, std::string& out) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            const int pad = w[i] - width(line[i]);
            if (i == 0) out += std::string(pad, ' ') + line[i];
            else out += " | " + line[i] + std::string(pad, ' ');
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    };
    std::string out;
    emit(header, out);
    std::string rule;
    for (std::size_t i = 0; i < w.size(); ++i) rule += (i ? "-+-" : "") + std::string(w[i], '-');
    out += rule + '\n';
    for (const auto& line : table) emit(line, out);
    return out;
}

}  // namespace bbh
