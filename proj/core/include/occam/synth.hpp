#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "occam/types.hpp"

namespace occam {

/// Counter-based SplitMix64 stream. Output k of a stream with key K is
/// mix64(K + (k + 1) * 0x9E3779B97F4A7C15), so a stream's values depend only
/// on (seed, stream id, position).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next_u64() noexcept;
  // Uniform in [0, 1) with 53 random bits.
  double next_uniform() noexcept;
  // Standard normal via Box-Muller; consumes two uniforms per pair.
  double next_normal() noexcept;
  // Uniform integer in [0, bound) by rejection (unbiased).
  std::uint64_t next_below(std::uint64_t bound) noexcept;

  static std::uint64_t mix64(std::uint64_t z) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_normal_;
};

struct BlobSpec {
  std::size_t n_classes = 3;
  std::size_t per_class = 100;
  std::size_t dim = 2;
  std::vector<std::vector<double>> centers;  // optional; size n_classes when set
  double center_spread = 10.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

void validate(const BlobSpec& spec);

// Class c uses stream c; random centers (when none are given) use a stream
// of their own. Rows are grouped by class, labels 0..C-1.
LabeledDataset generate_blobs(const BlobSpec& spec);

// The overlap study: three classes on an equilateral triangle in 2-D with
// side `separation_in_sigma * sigma`.
BlobSpec triangle_blob_spec(double separation_in_sigma, double sigma, std::size_t per_class,
                            std::uint64_t seed);

struct Subsample {
  LabeledDataset dataset;
  std::vector<std::size_t> indices;  // ascending original row indices
  std::vector<std::string> warnings;
};

// min(per_class, class size) rows per class, uniformly without replacement
// (partial Fisher-Yates on stream = class id), returned in original order.
Subsample stratified_subsample(const LabeledDataset& ds, std::size_t per_class,
                               std::uint64_t seed);

}  // namespace occam
