#include "occam/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "occam/error.hpp"

namespace occam {

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows_ == 0 || cols_ == 0) {
    throw Error(ErrorCode::WrongRank, "embedding matrix must have N >= 1 rows and d >= 1 columns");
  }
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::LengthMismatch, "embedding payload size does not match N x d");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (!std::isfinite(data_[k])) {
      std::ostringstream msg;
      msg << "non-finite value at row " << k / cols_ << ", column " << k % cols_;
      throw Error(ErrorCode::NonFinite, msg.str());
    }
  }
}

EmbeddingMatrix EmbeddingMatrix::select_rows(std::span<const std::size_t> indices) const {
  std::vector<double> out;
  out.reserve(indices.size() * cols_);
  for (const std::size_t i : indices) {
    const auto r = row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return {indices.size(), cols_, std::move(out)};
}

LabelVector::LabelVector(std::vector<std::int64_t> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 0) {
      throw Error(ErrorCode::NegativeLabel,
                  "negative label " + std::to_string(labels_[i]) + " at row " + std::to_string(i));
    }
  }
  class_ids_ = labels_;
  std::sort(class_ids_.begin(), class_ids_.end());
  class_ids_.erase(std::unique(class_ids_.begin(), class_ids_.end()), class_ids_.end());
  index_.resize(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    index_[i] = static_cast<std::size_t>(
        std::lower_bound(class_ids_.begin(), class_ids_.end(), labels_[i]) - class_ids_.begin());
  }
}

std::vector<std::vector<std::size_t>> LabelVector::partition() const {
  std::vector<std::vector<std::size_t>> groups(class_ids_.size());
  for (std::size_t i = 0; i < index_.size(); ++i) groups[index_[i]].push_back(i);
  return groups;
}

LabelVector LabelVector::select(std::span<const std::size_t> indices) const {
  std::vector<std::int64_t> out;
  out.reserve(indices.size());
  for (const std::size_t i : indices) out.push_back(labels_[i]);
  return LabelVector(std::move(out));
}

LabeledDataset::LabeledDataset(EmbeddingMatrix x, LabelVector y)
    : embeddings(std::move(x)), labels(std::move(y)) {
  if (labels.size() != embeddings.rows()) {
    throw Error(ErrorCode::LengthMismatch,
                "label count " + std::to_string(labels.size()) + " does not match " +
                    std::to_string(embeddings.rows()) + " embedding rows");
  }
}

LabeledDataset LabeledDataset::select(std::span<const std::size_t> indices) const {
  return {embeddings.select_rows(indices), labels.select(indices)};
}

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Int: return "INT";
    case MetricKind::Cv: return "CV";
    case MetricKind::Combined: return "COMBINED";
  }
  return "INT";
}

GroundTruth::GroundTruth(std::map<std::string, double> accuracy) : accuracy_(std::move(accuracy)) {
  if (accuracy_.empty()) {
    throw Error(ErrorCode::MalformedFile, "ground truth is empty");
  }
  for (const auto& [id, acc] : accuracy_) {
    if (!std::isfinite(acc)) {
      throw Error(ErrorCode::NonFinite, "ground truth for '" + id + "' is not finite");
    }
    if (acc < 0.0 || acc > 1.0) {
      throw Error(ErrorCode::OutOfRange, "ground truth for '" + id + "' is outside [0, 1]");
    }
  }
}

}  // namespace occam
