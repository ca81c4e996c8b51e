#pragma once

#include <string>

#include "tra/cost_model.hpp"

namespace tra {

// Instance bundle: a single JSON document {topology, flows, params} with
// 1-based node labels in routes. See README for the schema.
std::string instance_to_json_text(const GameInstance& instance);
GameInstance instance_from_json_text(const std::string& text);

GameInstance load_instance_file(const std::string& path);
void save_instance_file(const GameInstance& instance, const std::string& path);

}  // namespace tra
