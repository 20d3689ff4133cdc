#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "occam/lda.hpp"
#include "occam/rank_eval.hpp"
#include "occam/types.hpp"

namespace occam {

// Serializes with sorted keys and doubles printed as %.17g, so equal values
// always produce identical bytes.
std::string dump_stable(const nlohmann::json& j, int indent = 2);

nlohmann::json to_json(const ScoreParams& params);
nlohmann::json to_json(const ScoreReport& report, bool include_wall_time = true);
ScoreReport score_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const ArgmaxReport& report);
nlohmann::json to_json(const ConfidenceReport& report);

}  // namespace occam
