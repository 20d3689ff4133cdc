#include "occam/int_metric.hpp"

#include <chrono>

#include "occam/error.hpp"

namespace occam {

std::string to_string(IntAggregation aggregation) {
  return aggregation == IntAggregation::MeanOverPairs ? "mean" : "raw";
}

IntAggregation parse_int_aggregation(std::string_view name) {
  if (name == "mean") return IntAggregation::MeanOverPairs;
  if (name == "raw") return IntAggregation::RawOrderedSum;
  throw Error(ErrorCode::InvalidArgument, "unknown aggregation '" + std::string(name) + "'");
}

std::vector<double> interclass_distances(const LabeledDataset& ds, DistanceMetric metric,
                                         const ExecPolicy& policy) {
  const auto groups = ds.labels.partition();
  const std::size_t c = groups.size();
  std::vector<double> out(c * c, 0.0);
  for (std::size_t a = 0; a < c; ++a) {
    for (std::size_t b = a + 1; b < c; ++b) {
      const double d = cross_group_mean_distance(ds.embeddings, groups[a], groups[b], metric, policy);
      out[a * c + b] = d;
      out[b * c + a] = d;
    }
  }
  return out;
}

double int_value(const LabeledDataset& ds, const IntScoreConfig& cfg, const ExecPolicy& policy) {
  const std::size_t c = ds.num_classes();
  if (c < 2) {
    throw Error(ErrorCode::UndefinedScore, "INT is undefined for a single-class dataset");
  }
  const auto d = interclass_distances(ds, cfg.metric, policy);
  // Upper triangle in ascending (a, b) order.
  std::vector<double> pairs;
  pairs.reserve(c * (c - 1) / 2);
  for (std::size_t a = 0; a < c; ++a) {
    for (std::size_t b = a + 1; b < c; ++b) pairs.push_back(d[a * c + b]);
  }
  const double upper = tree_sum(pairs.data(), pairs.size());
  if (cfg.aggregation == IntAggregation::RawOrderedSum) return 2.0 * upper;
  const double cd = static_cast<double>(c);
  return upper * (2.0 / (cd * (cd - 1.0)));
}

ScoreReport int_score(const LabeledDataset& ds, const IntScoreConfig& cfg, const ExecPolicy& policy,
                      std::string model_id) {
  const auto start = std::chrono::steady_clock::now();
  ScoreReport r;
  r.model_id = std::move(model_id);
  r.metric = MetricKind::Int;
  r.params.distance = to_string(cfg.metric);
  r.params.aggregation = to_string(cfg.aggregation);
  r.n_samples = ds.size();
  r.n_classes = ds.num_classes();
  r.dim = ds.dim();
  if (cfg.metric == DistanceMetric::Cosine) {
    if (const auto zeros = count_zero_rows(ds.embeddings); zeros > 0) {
      r.warnings.push_back("cosine: " + std::to_string(zeros) +
                           " zero-norm rows treated as distance 1 to all other rows");
    }
  }
  try {
    r.score = int_value(ds, cfg, policy);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UndefinedScore) throw;
    r.undefined_reason = e.what();
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace occam
