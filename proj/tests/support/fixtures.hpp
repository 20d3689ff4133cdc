#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "occam/error.hpp"
#include "occam/types.hpp"
#include "oracles.hpp"

namespace fixtures {

// Error code thrown by f, or std::nullopt if it returned normally.
template <typename F>
std::optional<occam::ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const occam::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline occam::EmbeddingMatrix to_matrix(const oracle::Matrix& x) {
  std::vector<double> flat;
  for (const auto& r : x) flat.insert(flat.end(), r.begin(), r.end());
  return {x.size(), x.front().size(), std::move(flat)};
}

inline oracle::Matrix to_rows(const occam::EmbeddingMatrix& x) {
  oracle::Matrix out(x.rows(), std::vector<double>(x.cols()));
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out[i][j] = x(i, j);
  return out;
}

inline occam::LabeledDataset to_dataset(const oracle::Matrix& x, const std::vector<std::int64_t>& y) {
  return {to_matrix(x), occam::LabelVector(y)};
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("occam_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

inline void write_bytes(const std::filesystem::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace fixtures
