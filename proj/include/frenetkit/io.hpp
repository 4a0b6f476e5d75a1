#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "frenetkit/estimator.hpp"
#include "frenetkit/tangents.hpp"
#include "frenetkit/witness.hpp"

namespace frenetkit {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// One bag of knobs for the CLI. Tolerances are shared across the sub-configs
/// when loaded from file.
struct RunConfig {
    Tolerances tol{};
    EstimatorConfig estimator{};
    DetectConfig detect{};
    OutgoingConfig outgoing{};
    RatioConfig ratio{};
    double feas_tol = 1e-9;
    std::uint64_t seed = 0;
    Exec exec = Exec::Auto;
};

RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& cfg);

json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j);

json sequence_to_json(const PointSequence& seq);
PointSequence sequence_from_json(const json& j);

json set_to_json(const SampledSet& S);
SampledSet set_from_json(const json& j);

json frame_to_json(const Frame& f);
json estimate_to_json(const FrameEstimate& est, std::uint64_t seed);
json outgoing_to_json(const OutgoingReport& rep);
json record_to_json(const TangentRecord& rec);
json tangent_report_to_json(const TangentReport& rep, std::uint64_t seed);
json formula_to_json(const PLFormula& f);
json ratio_table_to_json(const RatioTable& t);

std::string ratio_table_csv(const RatioTable& t);

/// Two-column plot data (sample index, angle to the level estimate) for one
/// estimation level.
std::string level_angles_csv(const LevelDiagnostics& level);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace frenetkit
