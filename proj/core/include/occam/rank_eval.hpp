#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "occam/types.hpp"

namespace occam {

using ScoreMap = std::map<std::string, double>;

struct EvalReport {
  double tau = 0.0;
  double tau_w = 0.0;
  std::size_t m = 0;
  std::size_t n_ties_pred = 0;  // tied pairs
  std::size_t n_ties_gt = 0;
};

// Kendall tau-a with sgn(0) = 0: (concordant - discordant) / (M(M-1)/2).
double kendall_tau(const ScoreMap& pred, const ScoreMap& gt);
double kendall_tau(const ScoreMap& pred, const GroundTruth& gt);

// Additive hyperbolic weighted tau: pair weight 1/(r_i+1) + 1/(r_j+1) with
// zero-based descending ranks r (ties share their mean position). Computed
// with ranks from gt and from pred, then averaged.
double weighted_kendall_tau(const ScoreMap& pred, const ScoreMap& gt);
double weighted_kendall_tau(const ScoreMap& pred, const GroundTruth& gt);

// Throws KeyMismatch (message lists the symmetric difference) or TooFewModels.
EvalReport evaluate_ranking(const ScoreMap& pred, const GroundTruth& gt);

}  // namespace occam
