#pragma once

#include <filesystem>

#include "json.hpp"
#include "polling/model.hpp"

namespace polling {

// Model document layout:
//
//   {
//     "queues": [
//       {"lambda_high": 0.2, "lambda_low": 0.4,
//        "service_high": {"family": "exponential", "params": {"mean": 1}},
//        "service_low":  {"family": "exponential", "params": {"mean": 1}},
//        "discipline": "mixed_ge"}
//     ],
//     "switchovers": [{"family": "deterministic", "params": {"value": 10}}]
//   }
//
// Family params: deterministic {value}, exponential {mean}, erlang {phases, mean},
// hyperexponential {probs, rates}, uniform {low, high}. A service entry may be
// omitted when the matching arrival rate is 0. Unknown keys are rejected.

Distribution distribution_from_json(const nlohmann::json& j, const std::string& path = "");
nlohmann::json to_json(const Distribution& d);

PollingModel model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PollingModel& m);

/// Parses text; syntax errors carry line/column, schema errors the JSON path.
PollingModel parse_model(const std::string& text);
PollingModel load_model(const std::filesystem::path& path);

}  // namespace polling
