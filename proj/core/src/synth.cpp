#include "occam/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "occam/error.hpp"

namespace occam {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
// Stream id reserved for random center placement.
constexpr std::uint64_t kCenterStream = ~std::uint64_t{0};

}  // namespace

std::uint64_t CounterRng::mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(seed ^ mix64(stream + kGolden))) {}

std::uint64_t CounterRng::next_u64() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::next_uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_normal() noexcept {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  // 1 - U lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - next_uniform();
  const double u2 = next_uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

std::uint64_t CounterRng::next_below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t r = next_u64();
  while (r >= limit) r = next_u64();
  return r % bound;
}

void validate(const BlobSpec& spec) {
  if (spec.n_classes < 1) throw Error(ErrorCode::InvalidSpec, "n_classes must be >= 1");
  if (spec.per_class < 1) throw Error(ErrorCode::InvalidSpec, "per_class must be >= 1");
  if (spec.dim < 1) throw Error(ErrorCode::InvalidSpec, "dim must be >= 1");
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
    throw Error(ErrorCode::InvalidSpec, "sigma must be positive and finite");
  }
  if (!std::isfinite(spec.center_spread) || spec.center_spread < 0.0) {
    throw Error(ErrorCode::InvalidSpec, "center_spread must be finite and non-negative");
  }
  if (!spec.centers.empty()) {
    if (spec.centers.size() != spec.n_classes) {
      throw Error(ErrorCode::InvalidSpec, "centers must list exactly n_classes entries");
    }
    for (const auto& c : spec.centers) {
      if (c.size() != spec.dim) throw Error(ErrorCode::InvalidSpec, "every center must have length dim");
      for (const double v : c) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidSpec, "centers must be finite");
      }
    }
  }
}

LabeledDataset generate_blobs(const BlobSpec& spec) {
  validate(spec);
  std::vector<std::vector<double>> centers = spec.centers;
  if (centers.empty()) {
    CounterRng rng(spec.seed, kCenterStream);
    centers.assign(spec.n_classes, std::vector<double>(spec.dim));
    for (auto& c : centers) {
      for (double& v : c) v = spec.center_spread * (2.0 * rng.next_uniform() - 1.0);
    }
  }
  const std::size_t n = spec.n_classes * spec.per_class;
  std::vector<double> values;
  values.reserve(n * spec.dim);
  std::vector<std::int64_t> labels;
  labels.reserve(n);
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    CounterRng rng(spec.seed, c);
    for (std::size_t i = 0; i < spec.per_class; ++i) {
      for (std::size_t k = 0; k < spec.dim; ++k) values.push_back(centers[c][k] + spec.sigma * rng.next_normal());
      labels.push_back(static_cast<std::int64_t>(c));
    }
  }
  return {EmbeddingMatrix(n, spec.dim, std::move(values)), LabelVector(std::move(labels))};
}

BlobSpec triangle_blob_spec(double separation_in_sigma, double sigma, std::size_t per_class,
                            std::uint64_t seed) {
  const double side = separation_in_sigma * sigma;
  BlobSpec spec;
  spec.n_classes = 3;
  spec.per_class = per_class;
  spec.dim = 2;
  spec.sigma = sigma;
  spec.seed = seed;
  spec.centers = {{0.0, 0.0}, {side, 0.0}, {0.5 * side, 0.5 * std::sqrt(3.0) * side}};
  return spec;
}

Subsample stratified_subsample(const LabeledDataset& ds, std::size_t per_class, std::uint64_t seed) {
  const auto groups = ds.labels.partition();
  const auto& ids = ds.labels.class_ids();
  Subsample out{ds, {}, {}};
  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    std::vector<std::size_t> pool = groups[c];
    if (pool.size() < per_class) {
      out.warnings.push_back("class " + std::to_string(ids[c]) + " has " + std::to_string(pool.size()) +
                             " samples, fewer than " + std::to_string(per_class) + "; all are kept");
    }
    const std::size_t take = std::min(per_class, pool.size());
    CounterRng rng(seed, static_cast<std::uint64_t>(ids[c]));
    for (std::size_t k = 0; k < take; ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(rng.next_below(pool.size() - k));
      std::swap(pool[k], pool[pick]);
    }
    chosen.insert(chosen.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(chosen.begin(), chosen.end());
  out.dataset = ds.select(chosen);
  out.indices = std::move(chosen);
  return out;
}

}  // namespace occam
