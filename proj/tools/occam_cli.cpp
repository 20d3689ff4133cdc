#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "occam/occam.hpp"

namespace {

using nlohmann::json;
using occam::Error;
using occam::ErrorCode;

struct Common {
  unsigned threads = 0;
  std::size_t block_size = 64;
  std::size_t memory_cap = std::size_t{8} << 30;
  std::string output;
  std::string format = "json";

  occam::ExecPolicy policy() const {
    occam::ExecPolicy p;
    p.threads = threads;
    p.block_size = block_size;
    p.memory_cap = memory_cap;
    return p;
  }
};

struct MetricFlags {
  std::string distance = "euclidean";
  std::string aggregation = "mean";
  double alpha = 2.0;
  double epsilon = 1e-10;
  bool negate_cv = false;
  CLI::Option* distance_opt = nullptr;

  occam::IntScoreConfig int_cfg() const {
    return {occam::parse_distance_metric(distance), occam::parse_int_aggregation(aggregation)};
  }
  occam::CvConfig cv_cfg() const {
    occam::CvConfig c;
    c.alpha = alpha;
    c.epsilon = epsilon;
    return c;
  }
  bool distance_given() const { return distance_opt != nullptr && distance_opt->count() > 0; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--block-size", c.block_size, "Tile rows for distance kernels (0 = whole matrix)");
  cmd->add_option("--memory-cap", c.memory_cap, "Byte limit for N x N buffers (accepts KB/MB/GB)")
      ->transform(CLI::AsSizeValue(false));
  cmd->add_option("-o,--output", c.output, "Write the report here instead of stdout");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "table"}));
}

void add_metric_flags(CLI::App* cmd, MetricFlags& m) {
  m.distance_opt = cmd->add_option("--distance", m.distance, "Distance used by INT")
                       ->check(CLI::IsMember({"euclidean", "sqeuclidean", "manhattan", "cosine"}));
  cmd->add_option("--aggregation", m.aggregation, "INT aggregation over class pairs")
      ->check(CLI::IsMember({"mean", "raw"}));
  cmd->add_option("--alpha", m.alpha, "CV concept weight decay");
  cmd->add_option("--epsilon", m.epsilon, "CV denominator guard");
  cmd->add_flag("--negate-cv", m.negate_cv, "Rank by -sigma_v instead of sigma_v");
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(c.output, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + c.output + "' for writing");
  out << text;
  if (!out.flush()) throw Error(ErrorCode::IoError, "failed writing '" + c.output + "'");
}

void warn(const std::string& message) {
  std::cerr << occam::dump_stable(json{{"warning", message}}, -1) << "\n";
}

std::string fmt(const std::optional<double>& v) {
  if (!v) return "undefined";
  std::ostringstream s;
  s << std::setprecision(10) << *v;
  return s.str();
}

std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()));
    for (std::size_t k = 0; k < r.size(); ++k) width[k] = std::max(width[k], r[k].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      out << std::left << std::setw(static_cast<int>(width[k])) << r[k];
      if (k + 1 < r.size()) out << "  ";
    }
    out << "\n";
  }
  return out.str();
}

// ---- score ----

struct ScoreArgs {
  std::string embeddings, labels, model_id, metric = "int";
  MetricFlags m;
  Common c;
};

int run_score(const ScoreArgs& a) {
  const auto int_cfg = a.m.int_cfg();
  const auto cv_cfg = a.m.cv_cfg();
  const auto ds = occam::load_dataset(a.embeddings, a.labels);
  const std::string id = a.model_id.empty() ? std::filesystem::path(a.embeddings).stem().string() : a.model_id;
  const auto policy = a.c.policy();

  std::vector<occam::ScoreReport> reports;
  if (a.metric != "cv") reports.push_back(occam::int_score(ds, int_cfg, policy, id));
  if (a.metric != "int") {
    auto r = occam::cv_score(ds, cv_cfg, policy, id);
    if (a.metric == "cv" && a.m.distance_given()) {
      r.warnings.push_back("--distance is ignored for cv; concept variation always uses euclidean distance");
    }
    if (a.m.negate_cv) {
      if (r.score) r.score = -*r.score;
      r.params.negated = true;
    }
    reports.push_back(std::move(r));
  }

  if (a.c.format == "table") {
    std::vector<std::vector<std::string>> rows{{"model_id", "metric", "score", "n", "classes", "dim", "time_s"}};
    for (const auto& r : reports) {
      rows.push_back({r.model_id, occam::to_string(r.metric), fmt(r.score), std::to_string(r.n_samples),
                      std::to_string(r.n_classes), std::to_string(r.dim), fmt(r.wall_time)});
    }
    emit(a.c, table(rows));
  } else {
    json out = reports.size() == 1 ? occam::to_json(reports[0]) : json::array();
    if (reports.size() > 1) {
      for (const auto& r : reports) out.push_back(occam::to_json(r));
    }
    emit(a.c, occam::dump_stable(out) + "\n");
  }

  for (const auto& r : reports) {
    if (!r.defined()) throw Error(ErrorCode::UndefinedScore, occam::to_string(r.metric) + ": " + r.undefined_reason);
  }
  return 0;
}

// ---- rank ----

struct RankArgs {
  std::string manifest, metric = "int", combined_norm = "minmax";
  MetricFlags m;
  Common c;
};

int run_rank(const RankArgs& a) {
  occam::RankOptions opt;
  opt.metric = a.metric == "int" ? occam::MetricKind::Int
               : a.metric == "cv" ? occam::MetricKind::Cv
                                  : occam::MetricKind::Combined;
  opt.int_cfg = a.m.int_cfg();
  opt.cv_cfg = a.m.cv_cfg();
  opt.negate_cv = a.m.negate_cv;
  opt.combined_normalization = a.combined_norm == "none" ? occam::CombinedNormalization::None
                                                         : occam::CombinedNormalization::MinMaxAcrossZoo;
  const auto entries = occam::load_manifest(a.manifest);
  const auto ranking = occam::rank_zoo(entries, opt, a.c.policy(), occam::ScoreCache::from_environment());

  if (a.c.format == "table") {
    std::vector<std::vector<std::string>> rows{{"rank", "model_id", "score"}};
    for (const auto& e : ranking.entries) rows.push_back({std::to_string(e.rank), e.model_id, fmt(e.report.score)});
    for (const auto& f : ranking.failures) rows.push_back({"-", f.model_id, "failed: " + f.error});
    emit(a.c, table(rows));
  } else {
    emit(a.c, occam::dump_stable(occam::to_json(ranking)) + "\n");
  }

  for (const auto& f : ranking.failures) warn("model '" + f.model_id + "' skipped: " + f.message);
  if (ranking.entries.empty()) throw Error(ErrorCode::MalformedFile, "no manifest entry could be scored");
  return 0;
}

// ---- eval ----

struct EvalArgs {
  std::string pred, gt;
  Common c;
};

// A plain {"model_id": score} object, or the output of `occam rank`, in
// which case the negated rank is used as the predicted score.
occam::ScoreMap load_predictions(const std::string& path) {
  const auto bytes = occam::read_file_bytes(path);
  const auto j = json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::MalformedFile, path + ": expected a JSON object");
  occam::ScoreMap pred;
  if (j.contains("ranking") && j["ranking"].is_array()) {
    for (const auto& e : j["ranking"]) {
      if (!e.is_object() || !e.contains("model_id") || !e.contains("rank") || !e["rank"].is_number()) {
        throw Error(ErrorCode::MalformedFile, path + ": ranking entries need model_id and rank");
      }
      pred[e["model_id"].get<std::string>()] = -e["rank"].get<double>();
    }
    return pred;
  }
  for (const auto& [id, v] : j.items()) {
    if (!v.is_number()) throw Error(ErrorCode::MalformedFile, path + ": score for '" + id + "' is not a number");
    pred[id] = v.get<double>();
  }
  return pred;
}

int run_eval(const EvalArgs& a) {
  const auto pred = load_predictions(a.pred);
  const auto gt = occam::load_ground_truth(a.gt);
  const auto r = occam::evaluate_ranking(pred, gt);
  if (a.c.format == "table") {
    emit(a.c, table({{"tau", "tau_w", "m", "ties_pred", "ties_gt"},
                     {fmt(r.tau), fmt(r.tau_w), std::to_string(r.m), std::to_string(r.n_ties_pred),
                      std::to_string(r.n_ties_gt)}}));
  } else {
    emit(a.c, occam::dump_stable(occam::to_json(r)) + "\n");
  }
  return 0;
}

// ---- synth ----

struct SynthArgs {
  std::string prefix;
  occam::BlobSpec spec;
  std::optional<double> separation;
  std::size_t subsample = 0;
  Common c;
};

int run_synth(SynthArgs a) {
  occam::BlobSpec spec = a.spec;
  if (a.separation) {
    if (spec.n_classes != 3 || spec.dim != 2) {
      throw Error(ErrorCode::InvalidSpec, "--separation builds the 3-class 2-D triangle; use --classes 3 --dim 2");
    }
    spec = occam::triangle_blob_spec(*a.separation, spec.sigma, spec.per_class, spec.seed);
  }
  occam::validate(spec);
  auto ds = occam::generate_blobs(spec);
  std::vector<std::string> warnings;
  if (a.subsample > 0) {
    auto sub = occam::stratified_subsample(ds, a.subsample, spec.seed);
    warnings = std::move(sub.warnings);
    ds = std::move(sub.dataset);
  }

  const std::string emb = a.prefix + "_embeddings.npy";
  const std::string lab = a.prefix + "_labels.npy";
  const std::string side = a.prefix + "_spec.json";
  occam::save_embeddings_npy(emb, ds.embeddings);
  occam::save_labels_npy(lab, ds.labels);

  json s = {{"n_classes", spec.n_classes}, {"per_class", spec.per_class}, {"dim", spec.dim},
            {"sigma", spec.sigma},         {"center_spread", spec.center_spread}, {"seed", spec.seed}};
  if (!spec.centers.empty()) s["centers"] = spec.centers;
  if (a.separation) s["separation_in_sigma"] = *a.separation;
  if (a.subsample > 0) s["subsample_per_class"] = a.subsample;
  json sidecar = {{"spec", s}, {"embeddings", emb}, {"labels", lab}, {"n_samples", ds.size()}, {"warnings", warnings}};
  std::ofstream out(side, std::ios::binary | std::ios::trunc);
  out << occam::dump_stable(sidecar) << "\n";
  if (!out.flush()) throw Error(ErrorCode::IoError, "failed writing '" + side + "'");

  sidecar["spec_file"] = side;
  if (a.c.format == "table") {
    emit(a.c, table({{"embeddings", "labels", "spec", "n_samples"}, {emb, lab, side, std::to_string(ds.size())}}));
  } else {
    emit(a.c, occam::dump_stable(sidecar) + "\n");
  }
  for (const auto& w : warnings) warn(w);
  return 0;
}

// ---- verify-lda ----

struct LdaArgs {
  std::string weights, bias, points;
  std::size_t n_points = 1000;
  std::uint64_t seed = 0;
  Common c;
};

std::vector<double> as_doubles(const occam::npy::Array& a) {
  if (a.header.kind == occam::npy::ScalarKind::Float) return a.doubles;
  return {a.integers.begin(), a.integers.end()};
}

int run_verify_lda(const LdaArgs& a) {
  const auto w = occam::npy::read(a.weights);
  const auto b = occam::npy::read(a.bias);
  if (w.header.shape.size() != 2) throw Error(ErrorCode::WrongRank, a.weights + ": W must be 2-D (d x C)");
  if (b.header.shape.size() != 1) throw Error(ErrorCode::WrongRank, a.bias + ": b must be 1-D (C)");
  const auto d = static_cast<Eigen::Index>(w.header.shape[0]);
  const auto c = static_cast<Eigen::Index>(w.header.shape[1]);
  if (static_cast<Eigen::Index>(b.header.shape[0]) != c) {
    throw Error(ErrorCode::LengthMismatch, "b has " + std::to_string(b.header.shape[0]) + " entries, W has " +
                                               std::to_string(c) + " columns");
  }
  const auto wv = as_doubles(w);
  const auto bv = as_doubles(b);
  occam::SoftmaxHead head{Eigen::MatrixXd(d, c), Eigen::VectorXd(c)};
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < c; ++k) head.weights(i, k) = wv[static_cast<std::size_t>(i * c + k)];
  for (Eigen::Index k = 0; k < c; ++k) head.bias(k) = bv[static_cast<std::size_t>(k)];

  std::optional<occam::EmbeddingMatrix> x;
  if (!a.points.empty()) {
    x = occam::load_embeddings(a.points);
  } else {
    occam::CounterRng rng(a.seed, 0);
    std::vector<double> v(a.n_points * static_cast<std::size_t>(d));
    for (auto& e : v) e = rng.next_normal();
    x = occam::EmbeddingMatrix(a.n_points, static_cast<std::size_t>(d), std::move(v));
  }

  const auto centers = occam::compute_centers(head);
  const auto argmax = occam::verify_argmax_equivalence(head, centers, *x);
  const auto conf = occam::verify_confidence_equality(head, centers, *x);
  const bool uniform_bias = (head.bias.array() == head.bias(0)).all();

  json out = {{"d", d},
              {"n_classes", c},
              {"residual", centers.residual},
              {"singular_values", std::vector<double>(centers.singular_values.begin(), centers.singular_values.end())},
              {"shift", std::vector<double>(centers.shift.begin(), centers.shift.end())},
              {"argmax", occam::to_json(argmax)},
              {"confidence", occam::to_json(conf)},
              {"uniform_bias", uniform_bias},
              {"argmax_equivalent", argmax.n_agree == argmax.n_checked}};
  if (a.c.format == "table") {
    emit(a.c, table({{"d", "C", "residual", "checked", "agree", "ambiguous", "max_conf_dev"},
                     {std::to_string(d), std::to_string(c), fmt(centers.residual), std::to_string(argmax.n_checked),
                      std::to_string(argmax.n_agree), std::to_string(argmax.n_ambiguous), fmt(conf.max_deviation)}}));
  } else {
    emit(a.c, occam::dump_stable(out) + "\n");
  }
  return 0;
}

int report_error(const std::string& code, const std::string& message, int exit_code) {
  std::cerr << occam::dump_stable(json{{"error", code}, {"message", message}, {"exit_code", exit_code}}, -1)
            << "\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transferability scores for pretrained representations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "occam 0.1.0");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score one embedded dataset");
  score_cmd->add_option("embeddings", score.embeddings, "Embedding matrix (.npy or .csv)")->required();
  score_cmd->add_option("labels", score.labels, "Labels (.npy or .csv)")->required();
  score_cmd->add_option("--metric", score.metric, "int, cv or both")->check(CLI::IsMember({"int", "cv", "both"}));
  score_cmd->add_option("--model-id", score.model_id, "Identifier written to the report (default: file stem)");
  add_metric_flags(score_cmd, score.m);
  add_common(score_cmd, score.c);

  RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank a model zoo described by a JSON manifest");
  rank_cmd->add_option("manifest", rank.manifest, "Zoo manifest")->required();
  rank_cmd->add_option("--metric", rank.metric, "int, cv or combined")
      ->check(CLI::IsMember({"int", "cv", "combined"}));
  rank_cmd->add_option("--combined-norm", rank.combined_norm, "Per-zoo scaling of combined components")
      ->check(CLI::IsMember({"minmax", "none"}));
  add_metric_flags(rank_cmd, rank.m);
  add_common(rank_cmd, rank.c);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Kendall tau of predicted scores against ground truth");
  eval_cmd->add_option("pred", eval.pred, "Predicted scores or `occam rank` output")->required();
  eval_cmd->add_option("gt", eval.gt, "Ground-truth accuracies in [0, 1]")->required();
  add_common(eval_cmd, eval.c);

  SynthArgs synth;
  double separation = 0.0;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic Gaussian blob dataset");
  synth_cmd->add_option("prefix", synth.prefix, "Output prefix")->required();
  synth_cmd->add_option("--classes", synth.spec.n_classes);
  synth_cmd->add_option("--per-class", synth.spec.per_class);
  synth_cmd->add_option("--dim", synth.spec.dim);
  synth_cmd->add_option("--sigma", synth.spec.sigma);
  synth_cmd->add_option("--spread", synth.spec.center_spread, "Half-width of the cube random centers are drawn from");
  synth_cmd->add_option("--seed", synth.spec.seed);
  auto* sep_opt = synth_cmd->add_option("--separation", separation, "Triangle side in units of sigma");
  synth_cmd->add_option("--subsample", synth.subsample, "Keep this many rows per class");
  add_common(synth_cmd, synth.c);

  LdaArgs lda;
  auto* lda_cmd = app.add_subcommand("verify-lda", "Check a softmax head against its nearest-center form");
  lda_cmd->add_option("--weights", lda.weights, "W, shape (d, C)")->required();
  lda_cmd->add_option("--bias", lda.bias, "b, shape (C,)")->required();
  lda_cmd->add_option("--points", lda.points, "Probe points, shape (n, d); random normals when omitted");
  lda_cmd->add_option("--n-points", lda.n_points);
  lda_cmd->add_option("--seed", lda.seed);
  add_common(lda_cmd, lda.c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("InvalidArgument", e.what(), 1);
  }

  try {
    if (*score_cmd) return run_score(score);
    if (*rank_cmd) return run_rank(rank);
    if (*eval_cmd) return run_eval(eval);
    if (*synth_cmd) {
      if (sep_opt->count() > 0) synth.separation = separation;
      return run_synth(synth);
    }
    if (*lda_cmd) return run_verify_lda(lda);
  } catch (const Error& e) {
    return report_error(std::string(occam::to_string(e.code())), e.what(), occam::exit_code_for(e.code()));
  } catch (const std::exception& e) {
    return report_error("IoError", e.what(), 1);
  }
  return 1;
}
