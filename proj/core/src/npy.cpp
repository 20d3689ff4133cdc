#include "occam/npy.hpp"

#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <string_view>

#include "occam/error.hpp"
#include "occam/io.hpp"

namespace occam::npy {
namespace {

constexpr unsigned char kMagic[] = {0x93, 'N', 'U', 'M', 'P', 'Y'};

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedFile, "NPY: " + what);
}

std::uint64_t read_uint(const unsigned char* p, std::size_t n, bool little) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t byte = little ? k : n - 1 - k;
    v |= static_cast<std::uint64_t>(p[byte]) << (8 * k);
  }
  return v;
}

void skip_space(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

// Value text following 'key': in the header dictionary.
std::string_view dict_value(std::string_view dict, std::string_view key) {
  for (const char quote : {'\'', '"'}) {
    const std::string needle = std::string(1, quote) + std::string(key) + quote;
    const auto at = dict.find(needle);
    if (at == std::string_view::npos) continue;
    std::size_t pos = at + needle.size();
    skip_space(dict, pos);
    if (pos >= dict.size() || dict[pos] != ':') malformed("missing ':' after " + std::string(key));
    ++pos;
    skip_space(dict, pos);
    return dict.substr(pos);
  }
  malformed("header has no '" + std::string(key) + "' entry");
}

void parse_descr(std::string_view value, Header& h) {
  if (value.empty() || (value[0] != '\'' && value[0] != '"')) malformed("descr is not a string");
  const char quote = value[0];
  const auto end = value.find(quote, 1);
  if (end == std::string_view::npos) malformed("unterminated descr");
  h.descr = std::string(value.substr(1, end - 1));
  if (h.descr.size() < 3) malformed("unsupported descr '" + h.descr + "'");
  const char order = h.descr[0];
  if (order == '<' || order == '|' || order == '=') {
    h.little_endian = true;
  } else if (order == '>') {
    h.little_endian = false;
  } else {
    malformed("unsupported byte order in descr '" + h.descr + "'");
  }
  const char type = h.descr[1];
  std::size_t size = 0;
  for (std::size_t k = 2; k < h.descr.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(h.descr[k]))) {
      malformed("unsupported descr '" + h.descr + "'");
    }
    size = size * 10 + static_cast<std::size_t>(h.descr[k] - '0');
  }
  h.item_size = size;
  switch (type) {
    case 'f':
      h.kind = ScalarKind::Float;
      if (size != 4 && size != 8) malformed("unsupported float width in '" + h.descr + "'");
      break;
    case 'i':
      h.kind = ScalarKind::SignedInt;
      break;
    case 'u':
      h.kind = ScalarKind::UnsignedInt;
      break;
    case 'b':
      h.kind = ScalarKind::Bool;
      break;
    default:
      malformed("unsupported dtype '" + h.descr + "'");
  }
  if (type != 'f' && size != 1 && size != 2 && size != 4 && size != 8) {
    malformed("unsupported integer width in '" + h.descr + "'");
  }
}

void parse_shape(std::string_view value, Header& h) {
  if (value.empty() || value[0] != '(') malformed("shape is not a tuple");
  const auto end = value.find(')');
  if (end == std::string_view::npos) malformed("unterminated shape tuple");
  const std::string_view body = value.substr(1, end - 1);
  std::size_t pos = 0;
  while (true) {
    skip_space(body, pos);
    if (pos >= body.size()) break;
    if (!std::isdigit(static_cast<unsigned char>(body[pos]))) malformed("bad shape entry");
    std::size_t dim = 0;
    while (pos < body.size() && std::isdigit(static_cast<unsigned char>(body[pos]))) {
      dim = dim * 10 + static_cast<std::size_t>(body[pos] - '0');
      ++pos;
    }
    h.shape.push_back(dim);
    skip_space(body, pos);
    if (pos < body.size()) {
      if (body[pos] != ',') malformed("bad shape separator");
      ++pos;
    }
  }
}

void append_header(std::vector<unsigned char>& out, const std::string& descr,
                   const std::vector<std::size_t>& shape) {
  std::string dict = "{'descr': '" + descr + "', 'fortran_order': False, 'shape': (";
  for (std::size_t k = 0; k < shape.size(); ++k) {
    dict += std::to_string(shape[k]);
    if (shape.size() == 1 || k + 1 < shape.size()) dict += ",";
    if (k + 1 < shape.size()) dict += " ";
  }
  dict += "), }";
  // Magic(6) + version(2) + length(2) + dict + padding + '\n' is a multiple of 64.
  const std::size_t unpadded = 10 + dict.size() + 1;
  const std::size_t padded = (unpadded + 63) / 64 * 64;
  dict.append(padded - unpadded, ' ');
  dict += '\n';
  if (dict.size() > 0xFFFF) malformed("header too long for version 1.0");
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<unsigned char>(dict.size() & 0xFF));
  out.push_back(static_cast<unsigned char>(dict.size() >> 8));
  out.insert(out.end(), dict.begin(), dict.end());
}

void write_bytes(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

void check_count(const std::vector<std::size_t>& shape, std::size_t n) {
  std::size_t expected = 1;
  for (const auto s : shape) expected *= s;
  if (expected != n) throw Error(ErrorCode::LengthMismatch, "NPY: shape does not match value count");
}

}  // namespace

std::size_t Header::element_count() const noexcept {
  std::size_t n = 1;
  for (const auto s : shape) n *= s;
  return n;
}

bool has_magic(const std::vector<unsigned char>& bytes) noexcept {
  return bytes.size() >= sizeof(kMagic) && std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) == 0;
}

Header parse_header(const std::vector<unsigned char>& bytes) {
  if (!has_magic(bytes)) malformed("bad magic string");
  if (bytes.size() < 10) malformed("truncated preamble");
  Header h;
  h.major_version = bytes[6];
  h.minor_version = bytes[7];
  std::size_t len_bytes = 0;
  if (h.major_version == 1) {
    len_bytes = 2;
  } else if (h.major_version == 2 || h.major_version == 3) {
    len_bytes = 4;
  } else {
    malformed("unsupported format version " + std::to_string(h.major_version));
  }
  if (bytes.size() < 8 + len_bytes) malformed("truncated preamble");
  const std::size_t header_len = read_uint(bytes.data() + 8, len_bytes, true);
  const std::size_t start = 8 + len_bytes;
  if (bytes.size() < start + header_len) malformed("truncated header");
  const std::string_view dict(reinterpret_cast<const char*>(bytes.data()) + start, header_len);
  if (dict.find('{') == std::string_view::npos) malformed("header is not a dictionary");

  parse_descr(dict_value(dict, "descr"), h);
  const auto fortran = dict_value(dict, "fortran_order");
  if (fortran.starts_with("True")) {
    h.fortran_order = true;
  } else if (fortran.starts_with("False")) {
    h.fortran_order = false;
  } else {
    malformed("fortran_order is not a boolean");
  }
  parse_shape(dict_value(dict, "shape"), h);
  h.data_offset = start + header_len;
  return h;
}

Array decode(const std::vector<unsigned char>& bytes) {
  Array arr;
  arr.header = parse_header(bytes);
  const Header& h = arr.header;
  const std::size_t n = h.element_count();
  if (bytes.size() - h.data_offset < n * h.item_size) malformed("payload shorter than shape implies");

  // Position in C order of the k-th stored element.
  std::vector<std::size_t> c_strides(h.shape.size(), 1);
  for (std::size_t a = h.shape.size(); a-- > 1;) c_strides[a - 1] = c_strides[a] * h.shape[a];
  auto target = [&](std::size_t k) {
    if (!h.fortran_order || h.shape.size() < 2) return k;
    std::size_t pos = 0;
    for (std::size_t a = 0; a < h.shape.size(); ++a) {
      pos += (k % h.shape[a]) * c_strides[a];
      k /= h.shape[a];
    }
    return pos;
  };

  const unsigned char* payload = bytes.data() + h.data_offset;
  if (h.kind == ScalarKind::Float) {
    arr.doubles.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t raw = read_uint(payload + k * h.item_size, h.item_size, h.little_endian);
      const double value = h.item_size == 8
                               ? std::bit_cast<double>(raw)
                               : static_cast<double>(std::bit_cast<float>(static_cast<std::uint32_t>(raw)));
      arr.doubles[target(k)] = value;
    }
  } else {
    arr.integers.resize(n);
    const unsigned shift = 64 - 8 * static_cast<unsigned>(h.item_size);
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t raw = read_uint(payload + k * h.item_size, h.item_size, h.little_endian);
      std::int64_t value = 0;
      if (h.kind == ScalarKind::SignedInt) {
        // Sign-extend from item_size bytes.
        value = shift == 0 ? static_cast<std::int64_t>(raw)
                           : static_cast<std::int64_t>(raw << shift) >> shift;
      } else {
        if (h.item_size == 8 && raw > static_cast<std::uint64_t>(INT64_MAX)) {
          malformed("unsigned value exceeds int64 range");
        }
        value = static_cast<std::int64_t>(raw);
      }
      arr.integers[target(k)] = value;
    }
  }
  return arr;
}

Array read(const std::filesystem::path& path) { return decode(read_file_bytes(path)); }

std::vector<unsigned char> encode_f8(const std::vector<std::size_t>& shape,
                                     const std::vector<double>& values) {
  check_count(shape, values.size());
  std::vector<unsigned char> out;
  append_header(out, "<f8", shape);
  out.reserve(out.size() + values.size() * 8);
  for (const double v : values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
  }
  return out;
}

std::vector<unsigned char> encode_i8(const std::vector<std::size_t>& shape,
                                     const std::vector<std::int64_t>& values) {
  check_count(shape, values.size());
  std::vector<unsigned char> out;
  append_header(out, "<i8", shape);
  out.reserve(out.size() + values.size() * 8);
  for (const std::int64_t v : values) {
    const auto bits = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
  }
  return out;
}

void write_f8(const std::filesystem::path& path, const std::vector<std::size_t>& shape,
              const std::vector<double>& values) {
  write_bytes(path, encode_f8(shape, values));
}

void write_i8(const std::filesystem::path& path, const std::vector<std::size_t>& shape,
              const std::vector<std::int64_t>& values) {
  write_bytes(path, encode_i8(shape, values));
}

}  // namespace occam::npy
