#pragma once

#include <filesystem>
#include <string>

#include "revosim/engine.hpp"
#include "revosim/search_space.hpp"

namespace revosim {

inline constexpr const char* kVersion = "0.1.0";

/// Loads a SpaceSpec from a JSON config file. Unknown keys are rejected;
/// errors name the offending field.
SpaceSpec load_space_spec(const std::filesystem::path& path);

/// Loads a SearchConfig from a JSON config file (same error contract).
SearchConfig load_search_config(const std::filesystem::path& path);

/// Parses a compact policy spec: "store-all", "skip-bottom",
/// "prob:<epsilon>", "tier:<min_donations>:<window>"; an optional
/// "@<capacity>" suffix bounds the store.
CachePolicy parse_policy(const std::string& text);
std::string policy_to_string(const CachePolicy& policy);

/// Provenance record written next to every produced artifact.
struct RunManifest {
  std::string command;
  std::string space_config;
  std::string search_config;
  std::string trace_file;
  std::uint64_t seed = 0;
  std::string policy;
  std::string version = kVersion;
};

/// Writes dir/manifest.json, replacing any previous manifest so the
/// directory always holds exactly one.
void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& dir);

/// Writes via a temp file + rename so failures never leave partial output.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace revosim
