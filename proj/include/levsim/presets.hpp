#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace levsim {

// Bundled study presets fig2..fig9. Keys under "assumed" document choices
// the preset makes beyond its published parameter list. Throws UnknownFigure
// for anything else (including fig1, which is a schematic with nothing to
// compute).
nlohmann::json preset_document(const std::string& figure_id);

std::vector<std::string> preset_ids();

// Runs the preset pipeline and returns the emitted artifact paths (CSV data,
// a gnuplot stub, and a manifest).
std::vector<std::string> run_repro(const std::string& figure_id,
                                   const std::string& outdir);

}  // namespace levsim
