#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "occam/parallel.hpp"
#include "occam/types.hpp"

namespace occam {

enum class CvNormalization { PerFeatureMinMax };

struct CvConfig {
  double alpha = 2.0;
  double epsilon = 1e-10;
  CvNormalization normalization = CvNormalization::PerFeatureMinMax;
};

struct CvResult {
  std::vector<double> per_example;  // v(x_i)
  double mean = 0.0;
  double std = 0.0;                 // population std (divisor N)
  std::size_t degenerate_rows = 0;  // rows whose weight sum was 0; their v is 0
};

// Per feature: (x - min) / (max - min); constant features map to 0.
EmbeddingMatrix normalize_min_max(const EmbeddingMatrix& x);

// w = 2^(-alpha * D / max(sqrt_dim - D, epsilon)), evaluated as
// exp(-alpha ln2 D / div) and flushed to 0 below the normal range.
double concept_weight(double distance, double sqrt_dim, double alpha, double epsilon) noexcept;

// Throws UndefinedScore for N < 2 and InvalidArgument for alpha/epsilon <= 0.
CvResult concept_variation(const LabeledDataset& ds, const CvConfig& cfg,
                           const ExecPolicy& policy = {});

// score = sigma_v. Undefined report for N < 2; degenerate rows become a warning.
ScoreReport cv_score(const LabeledDataset& ds, const CvConfig& cfg,
                     const ExecPolicy& policy = {}, std::string model_id = {});

}  // namespace occam
