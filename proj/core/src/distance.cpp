#include "occam/distance.hpp"

#include <algorithm>
#include <cmath>

#include "occam/error.hpp"

namespace occam {
namespace {

// Eight interleaved partial sums combined in a fixed tree. The lane layout,
// and therefore every rounding step, depends only on the vector length.
constexpr std::size_t kLanes = 8;

inline double combine(const double (&acc)[kLanes], double tail) noexcept {
  return (((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]))) + tail;
}

inline double squared_l2(const double* a, const double* b, std::size_t d) noexcept {
  double acc[kLanes] = {};
  std::size_t k = 0;
  for (; k + kLanes <= d; k += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      const double diff = a[k + l] - b[k + l];
      acc[l] += diff * diff;
    }
  }
  double tail = 0.0;
  for (; k < d; ++k) {
    const double diff = a[k] - b[k];
    tail += diff * diff;
  }
  return combine(acc, tail);
}

inline double l1(const double* a, const double* b, std::size_t d) noexcept {
  double acc[kLanes] = {};
  std::size_t k = 0;
  for (; k + kLanes <= d; k += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) acc[l] += std::abs(a[k + l] - b[k + l]);
  }
  double tail = 0.0;
  for (; k < d; ++k) tail += std::abs(a[k] - b[k]);
  return combine(acc, tail);
}

inline double dot(const double* a, const double* b, std::size_t d) noexcept {
  double acc[kLanes] = {};
  std::size_t k = 0;
  for (; k + kLanes <= d; k += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) acc[l] += a[k + l] * b[k + l];
  }
  double tail = 0.0;
  for (; k < d; ++k) tail += a[k] * b[k];
  return combine(acc, tail);
}

inline double cosine_from(double ab, double norm_a, double norm_b) noexcept {
  if (norm_a == 0.0 || norm_b == 0.0) return 1.0;
  const double d = 1.0 - ab / (norm_a * norm_b);
  return std::clamp(d, 0.0, 2.0);
}

// Packed copy of selected rows plus their L2 norms (cosine only).
struct PackedRows {
  std::vector<double> values;
  std::vector<double> norms;
  std::size_t n = 0;
  std::size_t d = 0;

  const double* row(std::size_t i) const noexcept { return values.data() + i * d; }
};

PackedRows pack(const EmbeddingMatrix& x, std::span<const std::size_t> idx, bool with_norms) {
  PackedRows p;
  p.n = idx.size();
  p.d = x.cols();
  p.values.resize(p.n * p.d);
  for (std::size_t i = 0; i < p.n; ++i) {
    const auto r = x.row(idx[i]);
    std::copy(r.begin(), r.end(), p.values.begin() + static_cast<std::ptrdiff_t>(i * p.d));
  }
  if (with_norms) {
    p.norms.resize(p.n);
    for (std::size_t i = 0; i < p.n; ++i) p.norms[i] = std::sqrt(dot(p.row(i), p.row(i), p.d));
  }
  return p;
}

inline double packed_distance(const PackedRows& a, std::size_t i, const PackedRows& b, std::size_t j,
                              DistanceMetric metric) noexcept {
  const double* ra = a.row(i);
  const double* rb = b.row(j);
  switch (metric) {
    case DistanceMetric::Euclidean: return std::sqrt(squared_l2(ra, rb, a.d));
    case DistanceMetric::SquaredEuclidean: return squared_l2(ra, rb, a.d);
    case DistanceMetric::Manhattan: return l1(ra, rb, a.d);
    case DistanceMetric::Cosine: return cosine_from(dot(ra, rb, a.d), a.norms[i], b.norms[j]);
  }
  return 0.0;
}

}  // namespace

std::string to_string(DistanceMetric metric) {
  switch (metric) {
    case DistanceMetric::Euclidean: return "euclidean";
    case DistanceMetric::SquaredEuclidean: return "sqeuclidean";
    case DistanceMetric::Manhattan: return "manhattan";
    case DistanceMetric::Cosine: return "cosine";
  }
  return "euclidean";
}

DistanceMetric parse_distance_metric(std::string_view name) {
  if (name == "euclidean") return DistanceMetric::Euclidean;
  if (name == "sqeuclidean") return DistanceMetric::SquaredEuclidean;
  if (name == "manhattan") return DistanceMetric::Manhattan;
  if (name == "cosine") return DistanceMetric::Cosine;
  throw Error(ErrorCode::InvalidArgument, "unknown distance metric '" + std::string(name) + "'");
}

double tree_sum(const double* values, std::size_t n) noexcept {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += values[k];
    return s;
  }
  const std::size_t half = n / 2;
  return tree_sum(values, half) + tree_sum(values + half, n - half);
}

double distance(std::span<const double> a, std::span<const double> b, DistanceMetric metric) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "distance: dimension mismatch");
  const std::size_t d = a.size();
  switch (metric) {
    case DistanceMetric::Euclidean: return std::sqrt(squared_l2(a.data(), b.data(), d));
    case DistanceMetric::SquaredEuclidean: return squared_l2(a.data(), b.data(), d);
    case DistanceMetric::Manhattan: return l1(a.data(), b.data(), d);
    case DistanceMetric::Cosine:
      return cosine_from(dot(a.data(), b.data(), d), std::sqrt(dot(a.data(), a.data(), d)),
                         std::sqrt(dot(b.data(), b.data(), d)));
  }
  return 0.0;
}

DistanceMatrix pairwise_distances(const EmbeddingMatrix& x, DistanceMetric metric,
                                  const ExecPolicy& policy) {
  const std::size_t n = x.rows();
  if (n > 0 && (n * n) / n != n) throw Error(ErrorCode::CapacityExceeded, "N*N overflows");
  const double bytes = static_cast<double>(n) * static_cast<double>(n) * sizeof(double);
  if (bytes > static_cast<double>(policy.memory_cap)) {
    throw Error(ErrorCode::CapacityExceeded,
                "distance matrix needs " + std::to_string(static_cast<unsigned long long>(bytes)) +
                    " bytes, cap is " + std::to_string(policy.memory_cap));
  }
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  const PackedRows rows = pack(x, all, metric == DistanceMetric::Cosine);

  DistanceMatrix out(n);
  const std::size_t block = policy.resolved_block(n);
  const std::size_t n_blocks = (n + block - 1) / block;
  parallel_for(n_blocks, policy.resolved_threads(), [&](std::size_t bi) {
    const std::size_t i0 = bi * block;
    const std::size_t i1 = std::min(n, i0 + block);
    for (std::size_t j0 = i0; j0 < n; j0 += block) {
      const std::size_t j1 = std::min(n, j0 + block);
      for (std::size_t i = i0; i < i1; ++i) {
        for (std::size_t j = std::max(j0, i + 1); j < j1; ++j) {
          const double v = packed_distance(rows, i, rows, j, metric);
          out.at(i, j) = v;
          out.at(j, i) = v;
        }
      }
    }
  });
  return out;
}

double cross_group_mean_distance(const EmbeddingMatrix& x, std::span<const std::size_t> idx_a,
                                 std::span<const std::size_t> idx_b, DistanceMetric metric,
                                 const ExecPolicy& policy) {
  if (idx_a.empty() || idx_b.empty()) {
    throw Error(ErrorCode::EmptyGroup, "cross_group_mean_distance: empty group");
  }
  std::vector<char> in_a(x.rows(), 0);
  for (const std::size_t i : idx_a) {
    if (i >= x.rows()) throw Error(ErrorCode::InvalidArgument, "row index out of range");
    in_a[i] = 1;
  }
  for (const std::size_t j : idx_b) {
    if (j >= x.rows()) throw Error(ErrorCode::InvalidArgument, "row index out of range");
    if (in_a[j]) throw Error(ErrorCode::InvalidArgument, "groups must be disjoint");
  }
  const bool norms = metric == DistanceMetric::Cosine;
  const PackedRows a = pack(x, idx_a, norms);
  const PackedRows b = pack(x, idx_b, norms);

  std::vector<double> row_sums(a.n, 0.0);
  const std::size_t block = policy.resolved_block(std::max(a.n, b.n));
  const std::size_t n_blocks = (a.n + block - 1) / block;
  parallel_for(n_blocks, policy.resolved_threads(), [&](std::size_t bi) {
    const std::size_t i0 = bi * block;
    const std::size_t i1 = std::min(a.n, i0 + block);
    for (std::size_t j0 = 0; j0 < b.n; j0 += block) {
      const std::size_t j1 = std::min(b.n, j0 + block);
      for (std::size_t i = i0; i < i1; ++i) {
        double s = row_sums[i];
        for (std::size_t j = j0; j < j1; ++j) s += packed_distance(a, i, b, j, metric);
        row_sums[i] = s;
      }
    }
  });
  const double total = tree_sum(row_sums.data(), row_sums.size());
  return total / (static_cast<double>(a.n) * static_cast<double>(b.n));
}

std::size_t count_zero_rows(const EmbeddingMatrix& x) {
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto r = x.row(i);
    if (std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; })) ++zeros;
  }
  return zeros;
}

}  // namespace occam
