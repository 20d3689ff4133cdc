#include "occam/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <string_view>

#include "occam/error.hpp"

namespace occam {
namespace {

using nlohmann::json;

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write(const json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int level) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(key).dump();
        out += indent < 0 ? ":" : ": ";
        write(value, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k > 0) out += ',';
        newline(depth + 1);
        write(j[k], indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

MetricKind parse_metric_kind(std::string_view s) {
  if (s == "INT") return MetricKind::Int;
  if (s == "CV") return MetricKind::Cv;
  if (s == "COMBINED") return MetricKind::Combined;
  throw Error(ErrorCode::MalformedFile, "unknown metric '" + std::string(s) + "'");
}

}  // namespace

std::string dump_stable(const json& j, int indent) {
  std::string out;
  write(j, indent, 0, out);
  return out;
}

json to_json(const ScoreParams& p) {
  json j = json::object();
  j["distance"] = p.distance;
  if (p.aggregation) j["aggregation"] = *p.aggregation;
  if (p.alpha) j["alpha"] = *p.alpha;
  if (p.epsilon) j["epsilon"] = *p.epsilon;
  if (p.normalization) j["normalization"] = *p.normalization;
  if (p.negated) j["negated"] = true;
  return j;
}

json to_json(const ScoreReport& r, bool include_wall_time) {
  json j = json::object();
  j["model_id"] = r.model_id;
  j["metric"] = to_string(r.metric);
  j["score"] = r.score ? json(*r.score) : json(nullptr);
  j["undefined"] = !r.defined();
  if (!r.defined()) j["undefined_reason"] = r.undefined_reason;
  j["params"] = to_json(r.params);
  j["n_samples"] = r.n_samples;
  j["n_classes"] = r.n_classes;
  j["dim"] = r.dim;
  if (include_wall_time) j["wall_time_s"] = r.wall_time;
  j["warnings"] = r.warnings;
  if (!r.components.empty()) j["components"] = r.components;
  return j;
}

ScoreReport score_report_from_json(const json& j) {
  try {
    ScoreReport r;
    r.model_id = j.at("model_id").get<std::string>();
    r.metric = parse_metric_kind(j.at("metric").get<std::string>());
    if (!j.at("score").is_null()) r.score = j.at("score").get<double>();
    r.undefined_reason = j.value("undefined_reason", std::string{});
    const auto& p = j.at("params");
    r.params.distance = p.at("distance").get<std::string>();
    if (p.contains("aggregation")) r.params.aggregation = p["aggregation"].get<std::string>();
    if (p.contains("alpha")) r.params.alpha = p["alpha"].get<double>();
    if (p.contains("epsilon")) r.params.epsilon = p["epsilon"].get<double>();
    if (p.contains("normalization")) r.params.normalization = p["normalization"].get<std::string>();
    r.params.negated = p.value("negated", false);
    r.n_samples = j.at("n_samples").get<std::size_t>();
    r.n_classes = j.at("n_classes").get<std::size_t>();
    r.dim = j.at("dim").get<std::size_t>();
    r.wall_time = j.value("wall_time_s", 0.0);
    r.warnings = j.value("warnings", std::vector<std::string>{});
    if (j.contains("components")) r.components = j["components"].get<std::map<std::string, double>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedFile, std::string("score report: ") + e.what());
  }
}

json to_json(const EvalReport& r) {
  return {{"tau", r.tau}, {"tau_w", r.tau_w}, {"m", r.m}, {"ties_pred", r.n_ties_pred},
          {"ties_gt", r.n_ties_gt}};
}

json to_json(const ArgmaxReport& r) {
  return {{"n_checked", r.n_checked}, {"n_agree", r.n_agree}, {"n_ambiguous", r.n_ambiguous}};
}

json to_json(const ConfidenceReport& r) {
  return {{"n_points", r.n_points}, {"max_deviation", r.max_deviation}};
}

}  // namespace occam
