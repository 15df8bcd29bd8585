#pragma once

#include <string>

#include <json.hpp>

#include "bbh/graph.hpp"

namespace bbh {

// Graph interchange format: {"nodes": n, "edges": [[v,pv,u,pu],...], "home": h, "bbh": b|null}.
nlohmann::json instance_to_json(const Instance& inst);
// k is not part of the file; the caller supplies it.
Instance instance_from_json(const nlohmann::json& j, int k);

std::string dump_instance(const Instance& inst);
Instance load_instance_file(const std::string& path, int k);
void save_instance_file(const Instance& inst, const std::string& path);

}  // namespace bbh
