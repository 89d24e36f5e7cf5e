#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "rax/estimation.hpp"
#include "rax/mdp.hpp"
#include "rax/offline.hpp"

// Serialization.
//
// MDP document: {"S", "A", "H", "rho": [S], "P": [H][S][A][S],
//                "rewards": [m][H][S][A]}; "rewards" may be omitted.
// Occupancy-model document: {"S", "A", "H", "rho": [S], "P": [k][S][A][S],
//                "xi", "counts": [k][S][A]} with k <= H-1 estimated steps.
// Dataset: one "h s a s'" record per line, s' = -1 for last-step records.
namespace rax::io {

struct MdpDocument {
  TabularMdp mdp;
  std::vector<RewardFunction> rewards;
};

nlohmann::json to_json(const TabularMdp& mdp, const std::vector<RewardFunction>& rewards = {});
MdpDocument mdp_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const OccupancyModel& model);
OccupancyModel occupancy_model_from_json(const nlohmann::json& doc);

void write_dataset(std::ostream& out, const offline::TransitionDataset& dataset);
offline::TransitionDataset read_dataset(std::istream& in, int num_states, int num_actions, int horizon);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace rax::io
