#include "occam/io.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

#include <nlohmann/json.hpp>

#include "occam/error.hpp"
#include "occam/npy.hpp"

namespace occam {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    if (!line.empty()) lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    fields.push_back(trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, out);
  return !token.empty() && res.ec == std::errc{} && res.ptr == end;
}

bool parse_int(std::string_view token, std::int64_t& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, out);
  return !token.empty() && res.ec == std::errc{} && res.ptr == end;
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedFile, what);
}

// Header row: the first token of the first line is not a number.
std::size_t data_start(const std::vector<std::string_view>& lines) {
  if (lines.empty()) return 0;
  double probe = 0.0;
  return parse_double(split_fields(lines.front()).front(), probe) ? 0 : 1;
}

}  // namespace

std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

EmbeddingMatrix parse_embeddings_csv(const std::string& text) {
  const auto lines = split_lines(text);
  const std::size_t first = data_start(lines);
  if (first >= lines.size()) malformed("CSV: no data rows");
  std::vector<double> values;
  std::size_t cols = 0;
  for (std::size_t li = first; li < lines.size(); ++li) {
    const auto fields = split_fields(lines[li]);
    if (cols == 0) cols = fields.size();
    if (fields.size() != cols) {
      malformed("CSV: row " + std::to_string(li + 1) + " has " + std::to_string(fields.size()) +
                " fields, expected " + std::to_string(cols));
    }
    for (const auto f : fields) {
      double v = 0.0;
      if (!parse_double(f, v)) malformed("CSV: '" + std::string(f) + "' is not a number");
      values.push_back(v);
    }
  }
  return {lines.size() - first, cols, std::move(values)};
}

std::vector<std::int64_t> parse_labels_csv(const std::string& text) {
  const auto lines = split_lines(text);
  std::vector<std::int64_t> labels;
  std::size_t first = 0;
  if (!lines.empty()) {
    double probe = 0.0;
    first = parse_double(lines.front(), probe) ? 0 : 1;
  }
  for (std::size_t li = first; li < lines.size(); ++li) {
    if (lines[li].find(',') != std::string_view::npos) malformed("label CSV must have a single column");
    std::int64_t v = 0;
    if (!parse_int(lines[li], v)) malformed("label '" + std::string(lines[li]) + "' is not an integer");
    labels.push_back(v);
  }
  return labels;
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  if (!npy::has_magic(bytes)) {
    return parse_embeddings_csv(std::string(bytes.begin(), bytes.end()));
  }
  auto arr = npy::decode(bytes);
  if (arr.header.shape.size() != 2) {
    throw Error(ErrorCode::WrongRank, "embeddings must be 2-D, got " +
                                          std::to_string(arr.header.shape.size()) + "-D");
  }
  if (arr.header.kind != npy::ScalarKind::Float) {
    malformed("embeddings must be float32 or float64, got '" + arr.header.descr + "'");
  }
  return {arr.header.shape[0], arr.header.shape[1], std::move(arr.doubles)};
}

LabelVector load_labels(const std::filesystem::path& path, std::optional<std::size_t> n_expected) {
  const auto bytes = read_file_bytes(path);
  std::vector<std::int64_t> labels;
  if (npy::has_magic(bytes)) {
    auto arr = npy::decode(bytes);
    const auto& shape = arr.header.shape;
    const bool column = shape.size() == 2 && shape[1] == 1;
    if (shape.size() != 1 && !column) {
      throw Error(ErrorCode::WrongRank, "labels must be a 1-D array");
    }
    if (arr.header.kind == npy::ScalarKind::Float) {
      malformed("labels must be integers, got '" + arr.header.descr + "'");
    }
    labels = std::move(arr.integers);
  } else {
    labels = parse_labels_csv(std::string(bytes.begin(), bytes.end()));
  }
  if (labels.empty()) malformed("label file '" + path.string() + "' is empty");
  if (n_expected && labels.size() != *n_expected) {
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(*n_expected) +
                                               " labels, found " + std::to_string(labels.size()));
  }
  return LabelVector(std::move(labels));
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const auto j = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) malformed("ground truth must be a JSON object");
  if (j.empty()) malformed("ground truth is empty");
  std::map<std::string, double> acc;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) malformed("ground truth for '" + key + "' is not a number");
    acc.emplace(key, value.get<double>());
  }
  return GroundTruth(std::move(acc));
}

LabeledDataset load_dataset(const std::filesystem::path& embeddings,
                            const std::filesystem::path& labels) {
  auto x = load_embeddings(embeddings);
  auto y = load_labels(labels, x.rows());
  return {std::move(x), std::move(y)};
}

void save_embeddings_npy(const std::filesystem::path& path, const EmbeddingMatrix& x) {
  npy::write_f8(path, {x.rows(), x.cols()}, x.data());
}

void save_labels_npy(const std::filesystem::path& path, const LabelVector& y) {
  npy::write_i8(path, {y.size()}, y.labels());
}

}  // namespace occam
