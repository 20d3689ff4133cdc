#include "occam/zoo.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>

#include "occam/error.hpp"
#include "occam/io.hpp"
#include "occam/report_json.hpp"

namespace occam {
namespace {

using nlohmann::json;

struct Scored {
  std::optional<ScoreReport> int_report;
  std::optional<ScoreReport> cv_report;
  std::optional<EntryFailure> failure;
};

ScoreReport negated(ScoreReport r) {
  if (r.score) r.score = -*r.score;
  r.params.negated = true;
  return r;
}

void score_one(const LabeledDataset& ds, const std::string& id, const RankOptions& options,
               const ExecPolicy& policy, Scored& out) {
  if (options.metric != MetricKind::Cv) out.int_report = int_score(ds, options.int_cfg, policy, id);
  if (options.metric != MetricKind::Int) {
    out.cv_report = cv_score(ds, options.cv_cfg, policy, id);
    if (options.negate_cv) out.cv_report = negated(*out.cv_report);
  }
}

EntryFailure failure_from(const std::string& id, const Error& e) {
  return {id, std::string(to_string(e.code())), e.what()};
}

// Min-max normalized value within [lo, hi]; a degenerate range maps to 0.
double unit_scale(double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.0; }

ZooRanking assemble(const std::vector<std::string>& ids, std::vector<Scored>& scored,
                    const RankOptions& options) {
  ZooRanking ranking;
  ranking.metric = options.metric;
  ranking.combined_normalization = options.combined_normalization;
  ranking.params = params_for(options);

  double int_lo = 0, int_hi = 0, cv_lo = 0, cv_hi = 0;
  if (options.metric == MetricKind::Combined) {
    bool first = true;
    for (const auto& s : scored) {
      if (s.failure || !s.int_report->defined() || !s.cv_report->defined()) continue;
      const double a = *s.int_report->score;
      const double b = *s.cv_report->score;
      if (first) {
        int_lo = int_hi = a;
        cv_lo = cv_hi = b;
        first = false;
      }
      int_lo = std::min(int_lo, a);
      int_hi = std::max(int_hi, a);
      cv_lo = std::min(cv_lo, b);
      cv_hi = std::max(cv_hi, b);
    }
  }

  for (std::size_t k = 0; k < ids.size(); ++k) {
    auto& s = scored[k];
    if (s.failure) {
      ranking.failures.push_back(*s.failure);
      continue;
    }
    RankedEntry entry;
    entry.model_id = ids[k];
    if (options.metric == MetricKind::Int) {
      entry.report = *s.int_report;
    } else if (options.metric == MetricKind::Cv) {
      entry.report = *s.cv_report;
    } else {
      const ScoreReport& ir = *s.int_report;
      const ScoreReport& cr = *s.cv_report;
      ScoreReport r = ir;
      r.metric = MetricKind::Combined;
      r.params = ranking.params;
      r.wall_time = ir.wall_time + cr.wall_time;
      r.warnings.insert(r.warnings.end(), cr.warnings.begin(), cr.warnings.end());
      r.score.reset();
      if (ir.score) r.components["int_raw"] = *ir.score;
      if (cr.score) r.components["cv_raw"] = *cr.score;
      if (ir.defined() && cr.defined()) {
        double a = *ir.score;
        double b = *cr.score;
        if (options.combined_normalization == CombinedNormalization::MinMaxAcrossZoo) {
          a = unit_scale(a, int_lo, int_hi);
          b = unit_scale(b, cv_lo, cv_hi);
          r.components["int_norm"] = a;
          r.components["cv_norm"] = b;
        }
        r.score = a + b;
      } else {
        r.undefined_reason = !ir.defined() ? ir.undefined_reason : cr.undefined_reason;
      }
      entry.report = std::move(r);
    }
    ranking.entries.push_back(std::move(entry));
  }
  sort_and_rank(ranking.entries);
  std::sort(ranking.failures.begin(), ranking.failures.end(),
            [](const EntryFailure& a, const EntryFailure& b) { return a.model_id < b.model_id; });
  return ranking;
}

ExecPolicy inner_policy(const ExecPolicy& policy, std::size_t entries) {
  ExecPolicy inner = policy;
  const unsigned threads = policy.resolved_threads();
  inner.threads = std::max(1u, threads / static_cast<unsigned>(std::max<std::size_t>(1, entries)));
  return inner;
}

void check_unique(const std::vector<std::string>& ids) {
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw Error(ErrorCode::InvalidArgument, "duplicate model_id '" + id + "'");
  }
}

std::string cache_key(const std::string& emb_digest, const std::string& label_digest,
                      MetricKind metric, const ScoreParams& params) {
  const std::string material = emb_digest + "|" + label_digest + "|" + to_string(metric) + "|" +
                               dump_stable(to_json(params), -1);
  return sha256_hex(std::vector<unsigned char>(material.begin(), material.end()));
}

}  // namespace

ScoreParams params_for(const RankOptions& options) {
  ScoreParams p;
  if (options.metric != MetricKind::Cv) {
    p.distance = to_string(options.int_cfg.metric);
    p.aggregation = to_string(options.int_cfg.aggregation);
  }
  if (options.metric != MetricKind::Int) {
    p.alpha = options.cv_cfg.alpha;
    p.epsilon = options.cv_cfg.epsilon;
    p.normalization = "minmax";
    p.negated = options.negate_cv;
  }
  return p;
}

std::vector<ZooEntry> load_manifest(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const auto j = json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded() || !j.is_array()) {
    throw Error(ErrorCode::MalformedFile, "zoo manifest must be a JSON array");
  }
  const auto base = path.parent_path();
  std::vector<ZooEntry> zoo;
  std::set<std::string> seen;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("model_id") || !item.contains("embeddings") ||
        !item.contains("labels") || !item["model_id"].is_string() || !item["embeddings"].is_string() ||
        !item["labels"].is_string()) {
      throw Error(ErrorCode::MalformedFile,
                  "manifest entries need string fields model_id, embeddings, labels");
    }
    ZooEntry e;
    e.model_id = item["model_id"].get<std::string>();
    if (!seen.insert(e.model_id).second) {
      throw Error(ErrorCode::MalformedFile, "duplicate model_id '" + e.model_id + "' in manifest");
    }
    const auto resolve = [&](const std::string& p) {
      const std::filesystem::path fp(p);
      return fp.is_absolute() ? fp : base / fp;
    };
    e.embeddings_path = resolve(item["embeddings"].get<std::string>());
    e.labels_path = resolve(item["labels"].get<std::string>());
    zoo.push_back(std::move(e));
  }
  if (zoo.empty()) throw Error(ErrorCode::MalformedFile, "zoo manifest is empty");
  return zoo;
}

ScoreCache::ScoreCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

ScoreCache ScoreCache::from_environment() {
  const char* dir = std::getenv("OCCAM_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return {};
  return ScoreCache(dir);
}

std::optional<ScoreReport> ScoreCache::lookup(const std::string& key) const {
  if (!dir_) return std::nullopt;
  const auto file = *dir_ / (key + ".json");
  std::error_code ec;
  if (!std::filesystem::exists(file, ec)) return std::nullopt;
  try {
    const auto bytes = read_file_bytes(file);
    const auto j = json::parse(bytes.begin(), bytes.end(), nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return score_report_from_json(j);
  } catch (const Error&) {
    return std::nullopt;
  }
}

void ScoreCache::store(const std::string& key, const ScoreReport& report) const {
  if (!dir_) return;
  std::error_code ec;
  std::filesystem::create_directories(*dir_, ec);
  const auto file = *dir_ / (key + ".json");
  const auto tmp = *dir_ / (key + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) return;
    out << dump_stable(to_json(report), 2);
  }
  std::filesystem::rename(tmp, file, ec);
}

std::string sha256_hex(const std::vector<unsigned char>& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    hex += kHex[digest[k] >> 4];
    hex += kHex[digest[k] & 0xF];
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file_bytes(path)); }

void sort_and_rank(std::vector<RankedEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
    const bool da = a.report.defined();
    const bool db = b.report.defined();
    if (da != db) return da;
    if (da && *a.report.score != *b.report.score) return *a.report.score > *b.report.score;
    return a.model_id < b.model_id;
  });
  std::size_t rank = 0;
  std::optional<double> previous;
  for (auto& e : entries) {
    if (e.report.defined()) {
      if (!previous || *previous != *e.report.score) ++rank;
      previous = e.report.score;
      e.rank = rank;
    } else {
      e.rank = rank + 1;
    }
  }
}

ZooRanking rank_datasets(const std::vector<std::pair<std::string, LabeledDataset>>& zoo,
                         const RankOptions& options, const ExecPolicy& policy) {
  std::vector<std::string> ids;
  for (const auto& [id, _] : zoo) ids.push_back(id);
  check_unique(ids);
  std::vector<Scored> scored(zoo.size());
  const ExecPolicy inner = inner_policy(policy, zoo.size());
  parallel_for(zoo.size(), policy.resolved_threads(), [&](std::size_t k) {
    try {
      score_one(zoo[k].second, ids[k], options, inner, scored[k]);
    } catch (const Error& e) {
      scored[k].failure = failure_from(ids[k], e);
    }
  });
  return assemble(ids, scored, options);
}

ZooRanking rank_zoo(const std::vector<ZooEntry>& zoo, const RankOptions& options,
                    const ExecPolicy& policy, const ScoreCache& cache) {
  std::vector<std::string> ids;
  for (const auto& e : zoo) ids.push_back(e.model_id);
  check_unique(ids);
  std::vector<Scored> scored(zoo.size());
  const ExecPolicy inner = inner_policy(policy, zoo.size());

  RankOptions int_only = options;
  int_only.metric = MetricKind::Int;
  RankOptions cv_only = options;
  cv_only.metric = MetricKind::Cv;

  parallel_for(zoo.size(), policy.resolved_threads(), [&](std::size_t k) {
    const ZooEntry& entry = zoo[k];
    try {
      std::string emb_digest, label_digest;
      if (cache.enabled()) {
        emb_digest = sha256_file(entry.embeddings_path);
        label_digest = sha256_file(entry.labels_path);
      }
      std::optional<LabeledDataset> ds;
      const auto get = [&](MetricKind kind, const RankOptions& opts) {
        const std::string key =
            cache.enabled() ? cache_key(emb_digest, label_digest, kind, params_for(opts)) : std::string{};
        if (auto hit = cache.lookup(key)) {
          hit->model_id = entry.model_id;
          return *hit;
        }
        if (!ds) ds.emplace(load_dataset(entry.embeddings_path, entry.labels_path));
        Scored tmp;
        score_one(*ds, entry.model_id, opts, inner, tmp);
        ScoreReport r = kind == MetricKind::Int ? *tmp.int_report : *tmp.cv_report;
        cache.store(key, r);
        return r;
      };
      if (options.metric != MetricKind::Cv) scored[k].int_report = get(MetricKind::Int, int_only);
      if (options.metric != MetricKind::Int) scored[k].cv_report = get(MetricKind::Cv, cv_only);
    } catch (const Error& e) {
      scored[k].failure = failure_from(entry.model_id, e);
    } catch (const std::exception& e) {
      scored[k].failure = EntryFailure{entry.model_id, "IoError", e.what()};
    }
  });
  return assemble(ids, scored, options);
}

json to_json(const ZooRanking& ranking) {
  json out = json::object();
  out["metric"] = to_string(ranking.metric);
  out["params"] = to_json(ranking.params);
  if (ranking.metric == MetricKind::Combined) {
    out["combined_normalization"] =
        ranking.combined_normalization == CombinedNormalization::MinMaxAcrossZoo ? "minmax" : "none";
  }
  json entries = json::array();
  for (const auto& e : ranking.entries) {
    json item = json::object();
    item["model_id"] = e.model_id;
    item["score"] = e.report.score ? json(*e.report.score) : json(nullptr);
    item["rank"] = e.rank;
    if (!e.report.defined()) {
      item["undefined"] = true;
      item["undefined_reason"] = e.report.undefined_reason;
    }
    if (!e.report.components.empty()) item["components"] = e.report.components;
    if (!e.report.warnings.empty()) item["warnings"] = e.report.warnings;
    entries.push_back(std::move(item));
  }
  out["ranking"] = std::move(entries);
  json failures = json::array();
  for (const auto& f : ranking.failures) {
    failures.push_back({{"model_id", f.model_id}, {"error", f.error}, {"message", f.message}});
  }
  out["failures"] = std::move(failures);
  return out;
}

}  // namespace occam
