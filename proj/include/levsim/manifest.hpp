#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace levsim {

inline constexpr const char* kVersion = "0.1.0";

// Side record emitted by every CLI run: the resolved configuration, seeds and
// flags it would take to reproduce the outputs.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;
  nlohmann::json config;  // resolved snapshot, angular units
  nlohmann::json flags;   // resolved subcommand options
  std::vector<std::uint64_t> seeds;
  std::string version = kVersion;
  std::vector<std::string> outputs;
  double duration_s = 0.0;
  nlohmann::json extra;  // counters, diagnostics
};

nlohmann::json manifest_to_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace levsim
