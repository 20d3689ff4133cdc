#include "occam/lda.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "occam/error.hpp"

namespace occam {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMatrix> as_eigen(const EmbeddingMatrix& x) {
  return {x.data().data(), static_cast<Eigen::Index>(x.rows()), static_cast<Eigen::Index>(x.cols())};
}

void check_shapes(const SoftmaxHead& head, const CenterSet& centers, const EmbeddingMatrix& points) {
  if (head.bias.size() != head.num_classes()) {
    throw Error(ErrorCode::LengthMismatch, "bias length must equal the number of classes");
  }
  if (centers.centers.rows() != head.dim() || centers.centers.cols() != head.num_classes()) {
    throw Error(ErrorCode::LengthMismatch, "center set does not match the head's shape");
  }
  if (static_cast<Eigen::Index>(points.cols()) != head.dim()) {
    throw Error(ErrorCode::LengthMismatch, "points must have the head's input dimension");
  }
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double top = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - top).exp();
  return e / e.sum();
}

}  // namespace

CenterSet compute_centers(const SoftmaxHead& head) {
  const Eigen::Index d = head.dim();
  const Eigen::Index c = head.num_classes();
  if (c < 1 || d < 1) throw Error(ErrorCode::InvalidArgument, "head must have d >= 1 and C >= 1");
  if (head.bias.size() != c) {
    throw Error(ErrorCode::LengthMismatch, "bias length must equal the number of classes");
  }
  if (!head.weights.allFinite() || !head.bias.allFinite()) {
    throw Error(ErrorCode::NonFinite, "head parameters must be finite");
  }
  if (d < c) {
    throw Error(ErrorCode::RankDeficient, "rank(W) <= d < C; nearest-center construction needs rank C");
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(head.weights, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXd u_mat = svd.matrixU();
  Eigen::MatrixXd v_mat = svd.matrixV();
  const Eigen::VectorXd sigma = svd.singularValues();

  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (!(sigma(k) > kRankTolerance * sigma_max)) {
      std::ostringstream msg;
      msg << "W has rank " << k << " < C = " << c << " (singular value " << sigma(k)
          << " below tolerance)";
      throw Error(ErrorCode::RankDeficient, msg.str());
    }
  }

  // Largest-magnitude entry of each left singular vector is made positive.
  for (Eigen::Index k = 0; k < u_mat.cols(); ++k) {
    Eigen::Index arg = 0;
    u_mat.col(k).cwiseAbs().maxCoeff(&arg);
    if (u_mat(arg, k) < 0.0) {
      u_mat.col(k) *= -1.0;
      v_mat.col(k) *= -1.0;
    }
  }

  CenterSet out;
  out.singular_values = sigma;
  out.offsets = -head.bias - 0.5 * head.weights.colwise().squaredNorm().transpose();
  out.shift = u_mat * (sigma.cwiseInverse().asDiagonal() * (v_mat.transpose() * out.offsets));
  out.centers = head.weights.colwise() + out.shift;
  out.residual = (head.weights.transpose() * out.shift - out.offsets).cwiseAbs().maxCoeff();
  if (!(out.residual <= kResidualTolerance)) {
    std::ostringstream msg;
    msg << "W^T v = u residual " << out.residual << " exceeds " << kResidualTolerance;
    throw Error(ErrorCode::NoSolution, msg.str());
  }
  return out;
}

ArgmaxReport verify_argmax_equivalence(const SoftmaxHead& head, const CenterSet& centers,
                                       const EmbeddingMatrix& points) {
  check_shapes(head, centers, points);
  const auto x = as_eigen(points);
  const Eigen::Index c = head.num_classes();
  ArgmaxReport report;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Eigen::VectorXd xi = x.row(i).transpose();
    const Eigen::VectorXd logits = head.weights.transpose() * xi + head.bias;

    Eigen::Index best = 0;
    logits.maxCoeff(&best);
    double runner_up = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < c; ++k) {
      if (k != best) runner_up = std::max(runner_up, logits(k));
    }
    if (c > 1 && logits(best) - runner_up < kAmbiguityGap) {
      ++report.n_ambiguous;
      continue;
    }

    Eigen::Index nearest = 0;
    (centers.centers.colwise() - xi).colwise().squaredNorm().minCoeff(&nearest);
    ++report.n_checked;
    report.n_agree += nearest == best;
  }
  return report;
}

ConfidenceReport verify_confidence_equality(const SoftmaxHead& head, const CenterSet& centers,
                                            const EmbeddingMatrix& points) {
  check_shapes(head, centers, points);
  const auto x = as_eigen(points);
  ConfidenceReport report;
  report.n_points = static_cast<std::size_t>(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Eigen::VectorXd xi = x.row(i).transpose();
    const Eigen::VectorXd p_head = softmax(head.weights.transpose() * xi + head.bias);
    const Eigen::VectorXd center_logits =
        -0.5 * (centers.centers.colwise() - xi).colwise().squaredNorm().transpose();
    const Eigen::VectorXd p_center = softmax(center_logits);
    report.max_deviation = std::max(report.max_deviation, (p_head - p_center).cwiseAbs().maxCoeff());
  }
  return report;
}

}  // namespace occam
