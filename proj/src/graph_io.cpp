#include "bbh/graph_io.hpp"

#include <fstream>
#include <sstream>

namespace bbh {

using nlohmann::json;

json instance_to_json(const Instance& inst) {
    json edges = json::array();
    for (const auto& e : inst.graph.edges()) edges.push_back({e.v, e.pv, e.u, e.pu});
    json j;
    j["nodes"] = inst.graph.node_count();
    j["edges"] = std::move(edges);
    j["home"] = inst.home;
    j["bbh"] = inst.bbh ? json(*inst.bbh) : json(nullptr);
    return j;
}

Instance instance_from_json(const json& j, int k) {
    if (!j.is_object()) throw GraphError("graph file must be a JSON object");
    for (const char* key : {"nodes", "edges", "home"})
        if (!j.contains(key)) throw GraphError(std::string("graph file lacks key '") + key + "'");
    const int n = j.at("nodes").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 4) throw GraphError("edge entries are [v, pv, u, pu]");
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>()});
    }
    Instance inst{PortGraph(n, edges), k, j.at("home").get<int>(), std::nullopt};
    if (j.contains("bbh") && !j.at("bbh").is_null()) inst.bbh = j.at("bbh").get<int>();
    validate_instance(inst);
    return inst;
}

std::string dump_instance(const Instance& inst) { return instance_to_json(inst).dump() + "\n"; }

Instance load_instance_file(const std::string& path, int k) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open graph file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw GraphError("malformed graph file " + path + ": " + e.what());
    }
    return instance_from_json(j, k);
}

void save_instance_file(const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GraphError("cannot write " + path);
    out << dump_instance(inst);
}

}  // namespace bbh
