#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "occam/types.hpp"

namespace occam {

/// Multinomial regression head softmax(W^T z + b). Column c of `weights`
/// (d x C) is the class weight vector W_c.
struct SoftmaxHead {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;

  Eigen::Index dim() const noexcept { return weights.rows(); }
  Eigen::Index num_classes() const noexcept { return weights.cols(); }
};

/// Centers mu_c = W_c + v with W^T v = u, u_c = -b_c - 1/2 ||W_c||^2.
struct CenterSet {
  Eigen::MatrixXd centers;  // d x C, column c is mu_c
  Eigen::VectorXd shift;    // v
  Eigen::VectorXd offsets;  // u
  Eigen::VectorXd singular_values;
  double residual = 0.0;    // ||W^T v - u||_inf
};

constexpr double kRankTolerance = 1e-10;
constexpr double kResidualTolerance = 1e-8;
constexpr double kAmbiguityGap = 1e-9;

// Minimum-norm v via the SVD pseudo-inverse. Throws RankDeficient when any of
// the C singular values is <= 1e-10 * sigma_max, NoSolution when the residual
// exceeds 1e-8.
CenterSet compute_centers(const SoftmaxHead& head);

struct ArgmaxReport {
  std::size_t n_checked = 0;  // non-ambiguous points
  std::size_t n_agree = 0;
  std::size_t n_ambiguous = 0;
};

// Compares argmax_c (x^T W_c + b_c) with argmin_c ||x - mu_c||^2 for every
// row of `points`. Points whose top-two logit gap is below 1e-9 are counted
// as ambiguous and not checked.
ArgmaxReport verify_argmax_equivalence(const SoftmaxHead& head, const CenterSet& centers,
                                       const EmbeddingMatrix& points);

struct ConfidenceReport {
  std::size_t n_points = 0;
  double max_deviation = 0.0;
};

// Max over points and classes of |softmax(W^T x + b)_c - softmax(-1/2||x - mu||^2)_c|.
ConfidenceReport verify_confidence_equality(const SoftmaxHead& head, const CenterSet& centers,
                                            const EmbeddingMatrix& points);

}  // namespace occam
