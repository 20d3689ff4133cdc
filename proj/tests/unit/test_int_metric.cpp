#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "occam/int_metric.hpp"
#include "occam/synth.hpp"

namespace {

using occam::DistanceMetric;
using occam::IntAggregation;
using occam::IntScoreConfig;

TEST(IntMetric, ThreeFourFive) {
  const auto ds = fixtures::to_dataset({{0, 0}, {3, 4}}, {0, 1});
  const auto r = occam::int_score(ds, {}, {}, "m");
  ASSERT_TRUE(r.defined());
  EXPECT_EQ(*r.score, 5.0);
  EXPECT_EQ(r.n_classes, 2u);
  EXPECT_EQ(r.params.distance, "euclidean");
  EXPECT_EQ(*r.params.aggregation, "mean");
}

TEST(IntMetric, Equilateral) {
  const auto ds = fixtures::to_dataset({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}, {0, 1, 2});
  EXPECT_NEAR(occam::int_value(ds, {}), 1.0, 1e-12);
  IntScoreConfig raw;
  raw.aggregation = IntAggregation::RawOrderedSum;
  EXPECT_NEAR(occam::int_value(ds, raw), 6.0, 1e-12);
}

TEST(IntMetric, SingleClassIsUndefined) {
  const auto ds = fixtures::to_dataset({{0, 0}, {1, 1}}, {7, 7});
  const auto r = occam::int_score(ds, {});
  EXPECT_FALSE(r.defined());
  EXPECT_FALSE(r.undefined_reason.empty());
  EXPECT_EQ(fixtures::error_of([&] { occam::int_value(ds, {}); }), occam::ErrorCode::UndefinedScore);
}

TEST(IntMetric, GaussianBlobsMatchTripleLoopOracle) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.1);
  oracle::Matrix x;
  std::vector<std::int64_t> y;
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 100; ++i) {
      x.push_back({10.0 * c + noise(rng), noise(rng)});
      y.push_back(c);
    }
  const auto ds = fixtures::to_dataset(x, y);
  const double want = oracle::int_mean_over_pairs(x, y, oracle::Metric::Euclidean);
  EXPECT_LE(oracle::rel_diff(occam::int_value(ds, {}), want), 1e-10);
}

TEST(IntMetric, AggregationScaleRelation) {
  std::mt19937_64 rng(77);
  for (std::size_t c = 2; c <= 6; ++c) {
    const auto data = oracle::random_data(rng, 60, 5, c);
    const auto ds = fixtures::to_dataset(data.x, data.y);
    IntScoreConfig raw;
    raw.aggregation = IntAggregation::RawOrderedSum;
    const double cd = static_cast<double>(c);
    EXPECT_LE(oracle::rel_diff(occam::int_value(ds, {}), occam::int_value(ds, raw) / (cd * (cd - 1))), 1e-15);
    EXPECT_LE(oracle::rel_diff(occam::int_value(ds, raw),
                               oracle::int_ordered_sum(data.x, data.y, oracle::Metric::Euclidean)),
              1e-10);
  }
}

TEST(IntMetric, ScaleEquivariance) {
  std::mt19937_64 rng(4);
  const auto data = oracle::random_data(rng, 80, 7, 4);
  for (const double c : {0.25, 3.0, 1000.0}) {
    auto scaled = data.x;
    for (auto& r : scaled)
      for (auto& v : r) v *= c;
    const double base = occam::int_value(fixtures::to_dataset(data.x, data.y), {});
    const double s = occam::int_value(fixtures::to_dataset(scaled, data.y), {});
    EXPECT_LE(oracle::rel_diff(s, c * base), 1e-9);
  }
}

TEST(IntMetric, SeparationMonotonicity) {
  occam::BlobSpec spec;
  spec.n_classes = 2;
  spec.per_class = 50;
  spec.dim = 3;
  spec.sigma = 1.0;
  spec.seed = 17;
  spec.centers = {{0, 0, 0}, {0, 0, 0}};
  const auto base = occam::generate_blobs(spec);
  double previous = -1.0;
  for (int step = 0; step < 5; ++step) {
    // Translate class 1 along the second axis by `shift`.
    const double shift = 2.0 * step;
    std::vector<double> values = base.embeddings.data();
    for (std::size_t i = 0; i < base.size(); ++i)
      if (base.labels.index(i) == 1) values[i * 3 + 1] += shift;
    const occam::LabeledDataset moved(occam::EmbeddingMatrix(base.size(), 3, values), base.labels);
    const double v = occam::int_value(moved, {});
    EXPECT_GT(v, previous) << "step " << step;
    previous = v;
  }
}

TEST(IntMetric, PermutationInvariance) {
  std::mt19937_64 rng(10);
  const auto data = oracle::random_data(rng, 120, 9, 5);
  std::vector<std::size_t> perm(120);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto ds = fixtures::to_dataset(data.x, data.y);
  const auto shuffled = ds.select(perm);
  for (const auto m : {DistanceMetric::Euclidean, DistanceMetric::Manhattan, DistanceMetric::Cosine}) {
    IntScoreConfig cfg;
    cfg.metric = m;
    EXPECT_LE(oracle::rel_diff(occam::int_value(ds, cfg), occam::int_value(shuffled, cfg)), 1e-12);
  }
}

TEST(IntMetric, NonContiguousLabelsAndSingletons) {
  const auto ds = fixtures::to_dataset({{0}, {2}, {5}, {6}}, {40, 3, 40, 900});
  // classes: 3 -> {2}, 40 -> {0, 5}, 900 -> {6}
  const double d_3_40 = (2.0 + 3.0) / 2.0;
  const double d_3_900 = 4.0;
  const double d_40_900 = (6.0 + 1.0) / 2.0;
  EXPECT_NEAR(occam::int_value(ds, {}), (d_3_40 + d_3_900 + d_40_900) / 3.0, 1e-15);
  const auto m = occam::interclass_distances(ds, DistanceMetric::Euclidean);
  EXPECT_EQ(m[0 * 3 + 1], d_3_40);
  EXPECT_EQ(m[1 * 3 + 0], d_3_40);
  EXPECT_EQ(m[1 * 3 + 1], 0.0);
}

TEST(IntMetric, CosineZeroRowWarning) {
  const auto ds = fixtures::to_dataset({{0, 0}, {1, 0}, {0, 1}}, {0, 1, 1});
  IntScoreConfig cfg;
  cfg.metric = DistanceMetric::Cosine;
  const auto r = occam::int_score(ds, cfg);
  EXPECT_EQ(*r.score, 1.0);
  EXPECT_EQ(r.warnings.size(), 1u);
}

}  // namespace
