#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace occam {

/// Dense row-major N x d matrix of float64 features. Row i is sample i.
///
/// Construction validates shape (N >= 1, d >= 1) and finiteness, so every
/// instance that exists is usable by the metrics.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }
  const std::vector<double>& data() const noexcept { return data_; }

  // Row subset in the given order.
  EmbeddingMatrix select_rows(std::span<const std::size_t> indices) const;

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Class labels aligned to embedding rows. Original ids are kept for
/// reporting; `index(i)` is the contiguous 0..C-1 remapping (ascending id).
class LabelVector {
 public:
  explicit LabelVector(std::vector<std::int64_t> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t num_classes() const noexcept { return class_ids_.size(); }

  std::int64_t label(std::size_t i) const noexcept { return labels_[i]; }
  std::size_t index(std::size_t i) const noexcept { return index_[i]; }

  const std::vector<std::int64_t>& labels() const noexcept { return labels_; }
  const std::vector<std::int64_t>& class_ids() const noexcept { return class_ids_; }

  // Row indices of each class, ascending, indexed by contiguous class index.
  std::vector<std::vector<std::size_t>> partition() const;

  LabelVector select(std::span<const std::size_t> indices) const;

  friend bool operator==(const LabelVector& a, const LabelVector& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::int64_t> labels_;
  std::vector<std::int64_t> class_ids_;
  std::vector<std::size_t> index_;
};

struct LabeledDataset {
  LabeledDataset(EmbeddingMatrix embeddings, LabelVector labels);

  EmbeddingMatrix embeddings;
  LabelVector labels;

  std::size_t size() const noexcept { return embeddings.rows(); }
  std::size_t dim() const noexcept { return embeddings.cols(); }
  std::size_t num_classes() const noexcept { return labels.num_classes(); }

  LabeledDataset select(std::span<const std::size_t> indices) const;
};

enum class MetricKind { Int, Cv, Combined };

std::string to_string(MetricKind kind);

struct ScoreParams {
  std::string distance = "euclidean";
  std::optional<std::string> aggregation;  // INT only
  std::optional<double> alpha;             // CV only
  std::optional<double> epsilon;           // CV only
  std::optional<std::string> normalization;
  bool negated = false;
};

/// Transferability score T_m for one model plus the metadata needed to
/// reproduce it. An undefined score has `score == std::nullopt` and a reason.
struct ScoreReport {
  std::string model_id;
  MetricKind metric = MetricKind::Int;
  std::optional<double> score;
  std::string undefined_reason;
  ScoreParams params;
  std::size_t n_samples = 0;
  std::size_t n_classes = 0;
  std::size_t dim = 0;
  double wall_time = 0.0;
  std::vector<std::string> warnings;
  // Raw and normalized components for combined scores.
  std::map<std::string, double> components;

  bool defined() const noexcept { return score.has_value(); }
};

/// model_id -> fine-tuned accuracy G_m in [0, 1].
class GroundTruth {
 public:
  explicit GroundTruth(std::map<std::string, double> accuracy);

  const std::map<std::string, double>& values() const noexcept { return accuracy_; }
  std::size_t size() const noexcept { return accuracy_.size(); }

 private:
  std::map<std::string, double> accuracy_;
};

}  // namespace occam
