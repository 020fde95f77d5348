#pragma once

// JSON output. Every document carries "schema": kReportSchema.

#include "rsim/experiment.hpp"
#include "rsim/network.hpp"
#include "rsim/oracles.hpp"
#include "rsim/stats.hpp"

#include <json.hpp>
#include <string>

namespace rsim {

inline constexpr const char* kReportSchema = "rsim.report/1";

nlohmann::json to_json(const Report& r);
nlohmann::json to_json(const ValidationReport& v);
nlohmann::json to_json(const TrafficSolution& t);
nlohmann::json to_json(const oracle::KSReport& ks);
nlohmann::json to_json(const ExperimentResult& res, const RunSpec& spec);

std::string describe(const StateFunctional& h);
/// "total", "class:k" (1-based) or "indicator:c".
StateFunctional parse_functional(const std::string& text);

}  // namespace rsim
