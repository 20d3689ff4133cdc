#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "occam/parallel.hpp"
#include "occam/types.hpp"

namespace occam {

enum class DistanceMetric { Euclidean, SquaredEuclidean, Manhattan, Cosine };

std::string to_string(DistanceMetric metric);
DistanceMetric parse_distance_metric(std::string_view name);

// Distance between two rows of equal length. Cosine is 1 - cos similarity;
// a zero vector has similarity 0 with anything (distance 1). Callers that
// compare a row with itself handle the zero diagonal.
double distance(std::span<const double> a, std::span<const double> b, DistanceMetric metric);

/// Symmetric N x N distance matrix with a zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  double& at(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

// Throws CapacityExceeded if N*N*8 bytes exceeds policy.memory_cap.
DistanceMatrix pairwise_distances(const EmbeddingMatrix& x, DistanceMetric metric,
                                  const ExecPolicy& policy = {});

// Mean of dist(x_i, x_j) over i in a, j in b, without an N x N buffer.
// Each row of `a` accumulates its distances in ascending position order of
// `b`; row partials are combined with tree_sum, so the result does not
// depend on block size or thread count.
double cross_group_mean_distance(const EmbeddingMatrix& x, std::span<const std::size_t> idx_a,
                                 std::span<const std::size_t> idx_b, DistanceMetric metric,
                                 const ExecPolicy& policy = {});

// Rows with zero L2 norm (reported as a warning for cosine runs).
std::size_t count_zero_rows(const EmbeddingMatrix& x);

}  // namespace occam
