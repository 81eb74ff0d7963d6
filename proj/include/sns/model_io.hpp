#pragma once

#include <filesystem>
#include <string>

#include "sns/model.hpp"

namespace sns {

// Model files are UTF-8 JSON objects with exactly these keys:
//   n_states, n_actions, n_envs  (int)
//   gamma                        (float)
//   env_chain    [e][e']
//   transitions  [e][a][s][s']
//   rewards      [e][s][a]
// Unknown keys are rejected. Numbers are written with 17 significant digits.

/// Parses and validates a model; throws ParseError (with line/column or field path) or ValidationError.
SnsMdp parse_model(const std::string& text);
std::string serialize_model(const SnsMdp& model);

SnsMdp load_model(const std::filesystem::path& path);
/// Refuses invalid models with a ValidationError; throws Error on I/O failure.
void save_model(const SnsMdp& model, const std::filesystem::path& path);

/// Policy files: {"policy": [[mu(a|s) ...] ...]}.
Policy load_policy(const std::filesystem::path& path);

}  // namespace sns
