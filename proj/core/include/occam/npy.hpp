#pragma once

// Reader/writer for the NPY array file format (magic "\x93NUMPY").

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace occam::npy {

enum class ScalarKind { Float, SignedInt, UnsignedInt, Bool };

struct Header {
  int major_version = 1;
  int minor_version = 0;
  std::string descr;  // e.g. "<f8"
  ScalarKind kind = ScalarKind::Float;
  std::size_t item_size = 8;
  bool little_endian = true;
  bool fortran_order = false;
  std::vector<std::size_t> shape;
  std::size_t data_offset = 0;  // byte offset of the payload

  std::size_t element_count() const noexcept;
};

// Parses the magic string, version and header dictionary.
Header parse_header(const std::vector<unsigned char>& bytes);

// Decoded payload. `doubles` is filled for float arrays, `integers` for
// integer and bool arrays. Values are returned in C (row-major) order.
struct Array {
  Header header;
  std::vector<double> doubles;
  std::vector<std::int64_t> integers;
};

Array decode(const std::vector<unsigned char>& bytes);
Array read(const std::filesystem::path& path);

std::vector<unsigned char> encode_f8(const std::vector<std::size_t>& shape,
                                     const std::vector<double>& values);
std::vector<unsigned char> encode_i8(const std::vector<std::size_t>& shape,
                                     const std::vector<std::int64_t>& values);

void write_f8(const std::filesystem::path& path, const std::vector<std::size_t>& shape,
              const std::vector<double>& values);
void write_i8(const std::filesystem::path& path, const std::vector<std::size_t>& shape,
              const std::vector<std::int64_t>& values);

bool has_magic(const std::vector<unsigned char>& bytes) noexcept;

}  // namespace occam::npy
