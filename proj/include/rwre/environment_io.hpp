#pragma once

#include <string>

#include "rwre/environment.hpp"

namespace rwre {

/// Custom environment document:
///   { "m": int, "P": [[float]], "g": [-1 | 1], "label": string }
EnvironmentSpec environment_from_json(const std::string &text);
std::string environment_to_json(const EnvironmentSpec &spec);

/// k-dependent table document:
///   { "k": int, "table": { "<history>": { "a": float, "b": float }, ... } }
/// History keys are '-'/'+' strings of length k-1, oldest site first.
EnvironmentSpec k_dep_from_json(const std::string &text);

std::string read_text_file(const std::string &path);

} // namespace rwre
