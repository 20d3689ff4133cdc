#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "occam/types.hpp"

namespace occam {

std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path);

// NPY (float32/float64, 2-D) or CSV of reals with an optional header row.
// The format is chosen by the NPY magic, not the file extension.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);

// NPY 1-D integer array or single-column CSV. Pass std::nullopt to skip the
// length check.
LabelVector load_labels(const std::filesystem::path& path,
                        std::optional<std::size_t> n_expected);

// JSON object {model_id: accuracy}.
GroundTruth load_ground_truth(const std::filesystem::path& path);

LabeledDataset load_dataset(const std::filesystem::path& embeddings,
                            const std::filesystem::path& labels);

void save_embeddings_npy(const std::filesystem::path& path, const EmbeddingMatrix& x);
void save_labels_npy(const std::filesystem::path& path, const LabelVector& y);

// Exposed for the loaders' tests.
EmbeddingMatrix parse_embeddings_csv(const std::string& text);
std::vector<std::int64_t> parse_labels_csv(const std::string& text);

}  // namespace occam
