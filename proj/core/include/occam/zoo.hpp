#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "occam/concept_variation.hpp"
#include "occam/int_metric.hpp"
#include "occam/parallel.hpp"
#include "occam/types.hpp"

namespace occam {

struct ZooEntry {
  std::string model_id;
  std::filesystem::path embeddings_path;
  std::filesystem::path labels_path;
};

// JSON array of {"model_id", "embeddings", "labels"}. Relative paths resolve
// against the manifest's directory. Throws MalformedFile on schema errors or
// duplicate ids.
std::vector<ZooEntry> load_manifest(const std::filesystem::path& path);

enum class CombinedNormalization { MinMaxAcrossZoo, None };

struct RankedEntry {
  std::string model_id;
  ScoreReport report;
  std::size_t rank = 0;  // 1-based dense rank
};

struct EntryFailure {
  std::string model_id;
  std::string error;  // ErrorCode name
  std::string message;
};

struct ZooRanking {
  MetricKind metric = MetricKind::Int;
  CombinedNormalization combined_normalization = CombinedNormalization::MinMaxAcrossZoo;
  std::vector<RankedEntry> entries;  // defined scores descending, ties by id; undefined last
  std::vector<EntryFailure> failures;
  ScoreParams params;
};

/// Content-addressed store of score reports keyed by file digests, metric and
/// parameters. A default-constructed cache is disabled.
class ScoreCache {
 public:
  ScoreCache() = default;
  explicit ScoreCache(std::filesystem::path dir);

  // Cache rooted at $OCCAM_CACHE_DIR, or disabled when unset/empty.
  static ScoreCache from_environment();

  bool enabled() const noexcept { return dir_.has_value(); }
  std::optional<ScoreReport> lookup(const std::string& key) const;
  void store(const std::string& key, const ScoreReport& report) const;

 private:
  std::optional<std::filesystem::path> dir_;
};

std::string sha256_hex(const std::vector<unsigned char>& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct RankOptions {
  MetricKind metric = MetricKind::Int;
  IntScoreConfig int_cfg;
  CvConfig cv_cfg;
  CombinedNormalization combined_normalization = CombinedNormalization::MinMaxAcrossZoo;
  bool negate_cv = false;  // rank by -sigma_v instead of sigma_v
};

// Scores an in-memory zoo. Entries may come in any order.
ZooRanking rank_datasets(const std::vector<std::pair<std::string, LabeledDataset>>& zoo,
                         const RankOptions& options, const ExecPolicy& policy = {});

// Loads and scores file-backed entries; load/score errors become failures.
ZooRanking rank_zoo(const std::vector<ZooEntry>& zoo, const RankOptions& options,
                    const ExecPolicy& policy = {}, const ScoreCache& cache = {});

// Orders scored entries and assigns dense ranks. The combined score (if any)
// is expected to be in report.score already.
void sort_and_rank(std::vector<RankedEntry>& entries);

nlohmann::json to_json(const ZooRanking& ranking);

ScoreParams params_for(const RankOptions& options);

}  // namespace occam
