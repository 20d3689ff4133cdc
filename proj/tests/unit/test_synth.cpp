#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "occam/int_metric.hpp"
#include "occam/synth.hpp"

namespace {

TEST(CounterRng, Deterministic) {
  occam::CounterRng a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  bool differs_stream = false, differs_seed = false;
  for (int k = 0; k < 100; ++k) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs_stream |= x != c.next_u64();
    differs_seed |= x != d.next_u64();
  }
  EXPECT_TRUE(differs_stream);
  EXPECT_TRUE(differs_seed);
}

TEST(CounterRng, UniformAndNormalMoments) {
  occam::CounterRng r(1, 0);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int k = 0; k < n; ++k) {
    const double u = r.next_uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
  }
  for (int k = 0; k < n; ++k) {
    const double z = r.next_normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
  for (int k = 0; k < 1000; ++k) EXPECT_LT(r.next_below(7), 7u);
}

TEST(Blobs, SameSeedSameBits) {
  occam::BlobSpec spec;
  spec.seed = 11;
  spec.dim = 5;
  const auto a = occam::generate_blobs(spec);
  const auto b = occam::generate_blobs(spec);
  EXPECT_EQ(a.embeddings.data(), b.embeddings.data());
  EXPECT_EQ(a.labels.labels(), b.labels.labels());
  spec.seed = 12;
  EXPECT_NE(occam::generate_blobs(spec).embeddings.data(), a.embeddings.data());
}

TEST(Blobs, BalancedAndShaped) {
  occam::BlobSpec spec;
  spec.n_classes = 4;
  spec.per_class = 25;
  spec.dim = 3;
  const auto ds = occam::generate_blobs(spec);
  EXPECT_EQ(ds.size(), 100u);
  EXPECT_EQ(ds.dim(), 3u);
  for (const auto& members : ds.labels.partition()) EXPECT_EQ(members.size(), 25u);
}

TEST(Blobs, ExplicitCentersAndVanishingSigma) {
  occam::BlobSpec spec;
  spec.n_classes = 2;
  spec.per_class = 10;
  spec.dim = 2;
  spec.centers = {{0.0, 0.0}, {3.0, 4.0}};
  spec.sigma = 1e-9;
  const auto ds = occam::generate_blobs(spec);
  EXPECT_NEAR(occam::int_value(ds, {}), 5.0, 1e-6);
}

TEST(Blobs, TriangleAtUnitSeparation) {
  const auto spec = occam::triangle_blob_spec(1.0, 1e-8, 20, 0);
  ASSERT_EQ(spec.centers.size(), 3u);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b)
      EXPECT_NEAR(std::hypot(spec.centers[a][0] - spec.centers[b][0], spec.centers[a][1] - spec.centers[b][1]),
                  1e-8, 1e-20);
  const auto big = occam::triangle_blob_spec(1.0e8, 1e-8, 20, 0);
  EXPECT_NEAR(occam::int_value(occam::generate_blobs(big), {}), 1.0, 1e-6);
}

TEST(Blobs, SampleMeansConverge) {
  occam::BlobSpec spec;
  spec.n_classes = 2;
  spec.per_class = 2000;
  spec.dim = 2;
  spec.centers = {{1.0, -2.0}, {-4.0, 0.5}};
  double err = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    spec.seed = seed;
    const auto ds = occam::generate_blobs(spec);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const auto c = static_cast<std::size_t>(ds.labels.labels()[i]);
      err += ds.embeddings(i, 0) - spec.centers[c][0];
    }
  }
  EXPECT_NEAR(err / (20.0 * 4000.0), 0.0, 0.01);
}

TEST(Blobs, InvalidSpecs) {
  occam::BlobSpec s;
  s.sigma = 0.0;
  EXPECT_EQ(fixtures::error_of([&] { occam::generate_blobs(s); }), occam::ErrorCode::InvalidSpec);
  s = {};
  s.centers = {{0.0, 0.0}};
  EXPECT_EQ(fixtures::error_of([&] { occam::generate_blobs(s); }), occam::ErrorCode::InvalidSpec);
  s = {};
  s.per_class = 0;
  EXPECT_EQ(fixtures::error_of([&] { occam::validate(s); }), occam::ErrorCode::InvalidSpec);
}

TEST(Subsample, StratifiedCounts) {
  occam::BlobSpec spec;
  spec.n_classes = 3;
  spec.per_class = 100;
  const auto ds = occam::generate_blobs(spec);
  const auto sub = occam::stratified_subsample(ds, 40, 5);
  EXPECT_EQ(sub.dataset.size(), 120u);
  for (const auto& m : sub.dataset.labels.partition()) EXPECT_EQ(m.size(), 40u);
  EXPECT_TRUE(std::is_sorted(sub.indices.begin(), sub.indices.end()));
  EXPECT_EQ(std::set<std::size_t>(sub.indices.begin(), sub.indices.end()).size(), 120u);
  EXPECT_TRUE(sub.warnings.empty());
  for (std::size_t k = 0; k < sub.indices.size(); ++k) {
    EXPECT_EQ(sub.dataset.embeddings(k, 0), ds.embeddings(sub.indices[k], 0));
  }
  const auto again = occam::stratified_subsample(ds, 40, 5);
  EXPECT_EQ(again.indices, sub.indices);
  EXPECT_NE(occam::stratified_subsample(ds, 40, 6).indices, sub.indices);
}

TEST(Subsample, ShortClassWarns) {
  occam::LabeledDataset ds{fixtures::to_matrix({{0}, {1}, {2}, {3}, {4}}), occam::LabelVector({0, 0, 0, 0, 1})};
  const auto sub = occam::stratified_subsample(ds, 3, 0);
  EXPECT_EQ(sub.dataset.size(), 4u);
  ASSERT_EQ(sub.warnings.size(), 1u);
  EXPECT_NE(sub.warnings[0].find("class 1"), std::string::npos);
}

}  // namespace
