#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "occam/report_json.hpp"

namespace {

TEST(StableJson, SortedKeysAndRoundTripDoubles) {
  nlohmann::json j = {{"zeta", 0.1}, {"alpha", 2.0}, {"mid", {3, 1}}, {"n", 7}};
  EXPECT_EQ(occam::dump_stable(j, -1), R"({"alpha":2.0,"mid":[3,1],"n":7,"zeta":0.10000000000000001})");
  const double third = 1.0 / 3.0;
  const auto s = occam::dump_stable(nlohmann::json(third));
  EXPECT_EQ(std::stod(s), third);
  EXPECT_EQ(occam::dump_stable(nlohmann::json(std::numeric_limits<double>::quiet_NaN())), "null");
  EXPECT_EQ(occam::dump_stable(nlohmann::json(1e300 * 1e10)), "null");
  EXPECT_EQ(occam::dump_stable(nlohmann::json(1e-300)), "1e-300");
}

TEST(StableJson, IndentedLayout) {
  nlohmann::json j = {{"b", nlohmann::json::array()}, {"a", nlohmann::json::object()}, {"c", "x\"y"}};
  EXPECT_EQ(occam::dump_stable(j), "{\n  \"a\": {},\n  \"b\": [],\n  \"c\": \"x\\\"y\"\n}");
}

TEST(ScoreReportJson, RoundTrip) {
  occam::ScoreReport r;
  r.model_id = "m";
  r.metric = occam::MetricKind::Cv;
  r.score = 0.25;
  r.params.distance = "euclidean";
  r.params.alpha = 2.0;
  r.params.epsilon = 1e-10;
  r.params.normalization = "minmax";
  r.n_samples = 10;
  r.n_classes = 2;
  r.dim = 3;
  r.wall_time = 0.5;
  r.warnings = {"w"};
  const auto j = occam::to_json(r);
  for (const char* key : {"model_id", "metric", "score", "params", "n_samples", "n_classes", "dim", "wall_time_s", "warnings"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_FALSE(occam::to_json(r, false).contains("wall_time_s"));
  const auto back = occam::score_report_from_json(j);
  EXPECT_EQ(occam::dump_stable(occam::to_json(back)), occam::dump_stable(j));

  r.score.reset();
  r.undefined_reason = "single class";
  const auto u = occam::to_json(r);
  EXPECT_TRUE(u["score"].is_null());
  EXPECT_FALSE(occam::score_report_from_json(u).defined());
  EXPECT_EQ(fixtures::error_of([] { occam::score_report_from_json(nlohmann::json::object()); }),
            occam::ErrorCode::MalformedFile);
}

TEST(EvalReportJson, Keys) {
  occam::EvalReport e;
  e.tau = 0.5;
  e.tau_w = 0.25;
  e.m = 4;
  const auto j = occam::to_json(e);
  EXPECT_EQ(occam::dump_stable(j, -1), R"({"m":4,"tau":0.5,"tau_w":0.25,"ties_gt":0,"ties_pred":0})");
}

}  // namespace
