#include "occam/concept_variation.hpp"

#include <cfloat>
#include <chrono>
#include <cmath>
#include <numbers>

#include "occam/distance.hpp"
#include "occam/error.hpp"

namespace occam {
namespace {

const double kUnderflowArg = std::log(DBL_MIN);

}  // namespace

EmbeddingMatrix normalize_min_max(const EmbeddingMatrix& x) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  std::vector<double> lo(d), hi(d);
  for (std::size_t j = 0; j < d; ++j) lo[j] = hi[j] = x(0, j);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], x(i, j));
      hi[j] = std::max(hi[j], x(i, j));
    }
  }
  std::vector<double> out(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double range = hi[j] - lo[j];
      out[i * d + j] = range > 0.0 ? (x(i, j) - lo[j]) / range : 0.0;
    }
  }
  return {n, d, std::move(out)};
}

double concept_weight(double distance, double sqrt_dim, double alpha, double epsilon) noexcept {
  const double div = std::max(sqrt_dim - distance, epsilon);
  const double arg = -(alpha * std::numbers::ln2) * (distance / div);
  if (arg < kUnderflowArg) return 0.0;
  return std::exp(arg);
}

CvResult concept_variation(const LabeledDataset& ds, const CvConfig& cfg, const ExecPolicy& policy) {
  if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be a positive finite number");
  }
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be a positive finite number");
  }
  const std::size_t n = ds.size();
  if (n < 2) throw Error(ErrorCode::UndefinedScore, "concept variation needs at least 2 samples");

  const EmbeddingMatrix normalized = normalize_min_max(ds.embeddings);
  const DistanceMatrix dist = pairwise_distances(normalized, DistanceMetric::Euclidean, policy);
  const double sqrt_dim = std::sqrt(static_cast<double>(ds.dim()));

  CvResult result;
  result.per_example.assign(n, 0.0);
  std::vector<char> degenerate(n, 0);
  const std::size_t block = policy.resolved_block(n);
  const std::size_t n_blocks = (n + block - 1) / block;
  parallel_for(n_blocks, policy.resolved_threads(), [&](std::size_t bi) {
    const std::size_t i1 = std::min(n, (bi + 1) * block);
    for (std::size_t i = bi * block; i < i1; ++i) {
      const auto row = dist.row(i);
      const std::size_t yi = ds.labels.index(i);
      double total = 0.0;
      double differing = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double w = concept_weight(row[j], sqrt_dim, cfg.alpha, cfg.epsilon);
        total += w;
        if (ds.labels.index(j) != yi) differing += w;
      }
      if (total > 0.0) {
        result.per_example[i] = differing / total;
      } else {
        degenerate[i] = 1;
      }
    }
  });
  for (const char flag : degenerate) result.degenerate_rows += flag != 0;

  const double nd = static_cast<double>(n);
  result.mean = tree_sum(result.per_example.data(), n) / nd;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = result.per_example[i] - result.mean;
    sq[i] = c * c;
  }
  result.std = std::sqrt(tree_sum(sq.data(), n) / nd);
  return result;
}

ScoreReport cv_score(const LabeledDataset& ds, const CvConfig& cfg, const ExecPolicy& policy,
                     std::string model_id) {
  const auto start = std::chrono::steady_clock::now();
  ScoreReport r;
  r.model_id = std::move(model_id);
  r.metric = MetricKind::Cv;
  r.params.distance = "euclidean";
  r.params.alpha = cfg.alpha;
  r.params.epsilon = cfg.epsilon;
  r.params.normalization = "minmax";
  r.n_samples = ds.size();
  r.n_classes = ds.num_classes();
  r.dim = ds.dim();
  try {
    const CvResult cv = concept_variation(ds, cfg, policy);
    r.score = cv.std;
    if (cv.degenerate_rows > 0) {
      r.warnings.push_back("DegenerateWeights: " + std::to_string(cv.degenerate_rows) +
                           " rows had zero total weight; their concept variation is set to 0");
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UndefinedScore) throw;
    r.undefined_reason = e.what();
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace occam
