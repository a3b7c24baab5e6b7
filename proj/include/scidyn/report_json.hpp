#pragma once

// JSON serialization of analysis results. Objects have sorted keys, reals
// are rounded to 12 significant digits at export, non-finite reals become
// null, and every exported document carries "scidyn_schema": 1.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "scidyn/centrality.hpp"
#include "scidyn/entropy.hpp"
#include "scidyn/layout.hpp"

namespace scidyn {

inline constexpr int json_schema_version = 1;

nlohmann::json to_json(const DecompositionReport& report);
nlohmann::json to_json(const DivergenceReport& report);
nlohmann::json to_json(const std::vector<TransitionStep>& steps);
nlohmann::json to_json(const StressReport& report);
nlohmann::json to_json(const AnimationTrack& track);
nlohmann::json to_json(const CentralitySeries& series, const TimeSlicedGraph& graph);
nlohmann::json to_json(const std::vector<Construct>& constructs);

/// Adds the schema marker and a "kind" tag to an object.
nlohmann::json tagged(const std::string& kind, nlohmann::json body);

/// Rounds every real in place to 12 significant digits.
void round_reals(nlohmann::json& doc);

/// Deterministic text: rounded reals, two-space indent, trailing newline.
std::string dump_report(nlohmann::json doc);

/// Writes dump_report(doc) to path. Throws IoError.
void export_json(const nlohmann::json& doc, const std::filesystem::path& path);

/// Reads back a track written by to_json(AnimationTrack).
AnimationTrack track_from_json(const nlohmann::json& doc);

}  // namespace scidyn
