#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>

#include "softran/learn/ddpg.hpp"
#include "softran/learn/dqn.hpp"
#include "softran/learn/mlp.hpp"
#include "softran/learn/sac.hpp"

namespace softran::learn {

// {"layer_sizes": [...], "activation": "tanh", "layers": [{"weights": [...],
// "bias": [...]}]} with weights flattened row-major (out x in).
nlohmann::json to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SacAgent& agent);
nlohmann::json to_json(const DqnAgent& agent);
nlohmann::json to_json(const DdpgAgent& agent);

// Overwrites network parameters in place; the agent must have matching shapes.
void load_json(SacAgent& agent, const nlohmann::json& j);

void write_checkpoint(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_checkpoint(const std::filesystem::path& path);

}  // namespace softran::learn
