#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "gcpc/inference.hpp"
#include "gcpc/regression.hpp"
#include "gcpc/simulation.hpp"
#include "gcpc/summaries.hpp"
#include "gcpc/unimodality.hpp"

namespace gcpc_cli {

using nlohmann::json;

inline constexpr const char* kResultSchema = "gcpc-command-result/1";
inline constexpr const char* kCampaignSchema = "gcpc-campaign/1";
inline constexpr const char* kVersion = "0.1.0";

/// Ingest conventions for an angle column.
struct AngleColumnSpec {
    std::string column = "0";
    std::string unit = "radians";   // radians | degrees
    std::string range = "pmpi";     // pmpi ([-pi,pi]) | zero-two-pi ([0,2pi))
};

/// Raw column values -> canonical radians.
std::vector<double> ingest_angles(const std::vector<double>& raw,
                                  const AngleColumnSpec& spec);
/// Canonical radians -> the caller's unit and range convention.
double express_angle(double radians, const AngleColumnSpec& spec);

json envelope(const std::string& command, const json& inputs, const json& outputs,
              const std::vector<std::string>& warnings);

json params_to_json(const gcpc::GcpcParams& p);
json fit_to_json(const gcpc::FitResult& fit, const AngleColumnSpec& spec);
json lrt_to_json(const gcpc::LrtResult& lrt, const AngleColumnSpec& spec);
json verdict_to_json(const gcpc::UnimodalityVerdict& v);
json regression_to_json(const gcpc::RegressionFit& fit);
json report_to_json(const gcpc::sim::SimReport& report);
std::string report_cells_csv(const gcpc::sim::SimReport& report);

/// Throws std::invalid_argument on schema violations (exit code 65).
gcpc::sim::SimCampaign parse_campaign(const json& config);
json campaign_to_json(const gcpc::sim::SimCampaign& campaign);

}  // namespace gcpc_cli
