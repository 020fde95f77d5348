#pragma once

// JSON network description.
//
//   {
//     "name": "...",
//     "stations": d,
//     "classes": [
//       {"name": "...", "station": i,                      (1-based)
//        "interarrival": {"kind": "pareto", "shape": 10, "scale": 0.0556} | null,
//        "service": {...},
//        "decompose": {"lambda": "minimal" | {"scale": 1.5} | {"explicit": 0.7}}}
//     ],
//     "routing": [[...], ...]                              (K x K)
//   }
//
// Families ("kind"; "family" is accepted too) and their keys:
//   exponential {rate}            gamma {shape, rate}
//   lognormal {mu, sigma2}        pareto {shape, scale}
//   hyperexp2 {p1, rate1, rate2}  weibull {shape, scale}
//   uniform {lo, hi}              exp_plus_weibull {rate, shape, scale}
//   truncated_tail {parent, cut}  truncated_head {parent, cut}

#include "rsim/distlib.hpp"
#include "rsim/network.hpp"

#include <json.hpp>
#include <string>

namespace rsim {

struct LoadedConfig {
  std::string name;
  NetworkConfig net;
  nlohmann::json source;
};

DensityFamily family_from_json(const nlohmann::json& j);
nlohmann::json family_to_json(const DensityFamily& fam);

LambdaChoice lambda_choice_from_json(const nlohmann::json& j);
nlohmann::json lambda_choice_to_json(const LambdaChoice& c);

/// Throws ConfigInvalid with the offending path in the message.
LoadedConfig config_from_json(const nlohmann::json& j);
LoadedConfig load_config(const std::string& path);

nlohmann::json config_to_json(const LoadedConfig& cfg);

}  // namespace rsim
