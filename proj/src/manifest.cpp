#include "levsim/manifest.hpp"

#include <fstream>

#include "levsim/errors.hpp"

namespace levsim {

nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json j;
  j["subcommand"] = m.subcommand;
  j["argv"] = m.argv;
  j["config"] = m.config;
  j["flags"] = m.flags;
  j["seeds"] = m.seeds;
  j["version"] = m.version;
  j["outputs"] = m.outputs;
  j["duration_s"] = m.duration_s;
  if (!m.extra.is_null()) j["extra"] = m.extra;
  return j;
}

void write_manifest(const RunManifest& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot open manifest file: " + path);
  out << manifest_to_json(m).dump(2) << '\n';
  if (!out) fail(ErrorCode::IoError, "manifest write failed: " + path);
}

}  // namespace levsim
