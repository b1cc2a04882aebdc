#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ibrw/bridge.hpp"
#include "ibrw/prediction.hpp"
#include "ibrw/profile.hpp"

namespace ibrw {

using Json = nlohmann::ordered_json;

/// Parses {"sigmas": [...], "lambdas": [...]}. Malformed documents raise
/// InputError; well-formed documents that break an invariant raise
/// ValidationError.
VarianceProfile profile_from_json(const Json& doc);
VarianceProfile read_profile(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

Json to_json(const VarianceProfile& profile);
Json to_json(const EffectiveProfile& eff);
Json to_json(const PredictionReport& report);
Json to_json(const EstimateSample& estimate);

std::string to_string(CorrectionMode mode);
CorrectionMode correction_mode_from_string(const std::string& name);
std::string to_string(TimeMode mode);
TimeMode time_mode_from_string(const std::string& name);

/// Shortest text that is still 17 significant digits ("%.17g").
std::string format_double(double value);

}  // namespace ibrw
