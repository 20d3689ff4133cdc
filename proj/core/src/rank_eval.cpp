#include "occam/rank_eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "occam/error.hpp"

namespace occam {
namespace {

struct Aligned {
  std::vector<double> pred;
  std::vector<double> gt;
};

Aligned align(const ScoreMap& pred, const ScoreMap& gt) {
  std::vector<std::string> missing;
  for (const auto& [id, _] : pred) {
    if (!gt.contains(id)) missing.push_back(id);
  }
  for (const auto& [id, _] : gt) {
    if (!pred.contains(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string msg = "model ids differ between predictions and ground truth:";
    for (const auto& id : missing) msg += " " + id;
    throw Error(ErrorCode::KeyMismatch, msg);
  }
  if (pred.size() < 2) throw Error(ErrorCode::TooFewModels, "rank evaluation needs at least 2 models");
  Aligned a;
  for (const auto& [id, value] : pred) {
    if (!std::isfinite(value)) throw Error(ErrorCode::NonFinite, "score for '" + id + "' is not finite");
    a.pred.push_back(value);
    a.gt.push_back(gt.at(id));
  }
  return a;
}

int sgn(double x) noexcept { return (x > 0.0) - (x < 0.0); }

// Zero-based positions in descending order; tied values share their mean position.
std::vector<double> descending_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t s = 0; s < order.size();) {
    std::size_t e = s + 1;
    while (e < order.size() && v[order[e]] == v[order[s]]) ++e;
    const double mean_pos = 0.5 * static_cast<double>(s + e - 1);
    for (std::size_t k = s; k < e; ++k) rank[order[k]] = mean_pos;
    s = e;
  }
  return rank;
}

double weighted_with_ranks(const Aligned& a, const std::vector<double>& rank) {
  double num = 0.0;
  double den = 0.0;
  const std::size_t m = a.pred.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double w = 1.0 / (rank[i] + 1.0) + 1.0 / (rank[j] + 1.0);
      num += w * sgn(a.gt[i] - a.gt[j]) * sgn(a.pred[i] - a.pred[j]);
      den += w;
    }
  }
  return num / den;
}

std::size_t tied_pairs(const std::vector<double>& v) {
  std::size_t ties = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) ties += v[i] == v[j];
  }
  return ties;
}

}  // namespace

double kendall_tau(const ScoreMap& pred, const ScoreMap& gt) {
  const Aligned a = align(pred, gt);
  const std::size_t m = a.pred.size();
  std::int64_t net = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) net += sgn(a.gt[i] - a.gt[j]) * sgn(a.pred[i] - a.pred[j]);
  }
  const auto pairs = static_cast<std::int64_t>(m * (m - 1) / 2);
  return static_cast<double>(net) / static_cast<double>(pairs);
}

double kendall_tau(const ScoreMap& pred, const GroundTruth& gt) { return kendall_tau(pred, gt.values()); }

double weighted_kendall_tau(const ScoreMap& pred, const ScoreMap& gt) {
  const Aligned a = align(pred, gt);
  const double by_gt = weighted_with_ranks(a, descending_ranks(a.gt));
  const double by_pred = weighted_with_ranks(a, descending_ranks(a.pred));
  return 0.5 * (by_gt + by_pred);
}

double weighted_kendall_tau(const ScoreMap& pred, const GroundTruth& gt) {
  return weighted_kendall_tau(pred, gt.values());
}

EvalReport evaluate_ranking(const ScoreMap& pred, const GroundTruth& gt) {
  EvalReport r;
  r.tau = kendall_tau(pred, gt);
  r.tau_w = weighted_kendall_tau(pred, gt);
  const Aligned a = align(pred, gt.values());
  r.m = a.pred.size();
  r.n_ties_pred = tied_pairs(a.pred);
  r.n_ties_gt = tied_pairs(a.gt);
  return r;
}

}  // namespace occam
