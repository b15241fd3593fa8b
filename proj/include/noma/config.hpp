#pragma once

#include <filesystem>
#include <string>

#include "noma/simulation.hpp"

namespace noma {

// Reads a sweep/scenario config (JSON). Unknown keys are rejected; missing
// keys fall back to the scenario defaults. Throws ConfigError with the
// offending key in the message.
SweepConfig load_config(const std::filesystem::path& path);
SweepConfig parse_config(const std::string& json_text, const std::string& origin = "<inline>");

std::string report_to_json(const CoverageReport& report);
std::string coverage_to_csv(const CoverageReport& report);
std::string snr_to_csv(const SnrHistogram& hist);

// Write-temp-then-rename; a killed run never leaves a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace noma
