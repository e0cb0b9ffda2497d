#pragma once

// Label-set persistence. Layout (little-endian):
//   "GMIX" | u32 version | u32 l | u32 t | u64 n | u32 dim | u64 fingerprint
//   | n*dim f64 label coordinates, row-major by vertex id
// The k-d tree is not stored; rebuild it with build_index after loading.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gsim/labeling.hpp"

namespace gsim {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kIndexMagic = "GMIX";
inline constexpr std::uint32_t kIndexVersion = 1;

namespace detail {

inline void put_le(std::string& out, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xffu));
}

class LeReader {
 public:
  explicit LeReader(std::string_view data) : data_(data) {}

  std::uint64_t get(int bytes, const char* field) {
    if (pos_ + static_cast<std::size_t>(bytes) > data_.size())
      throw FormatError(std::string("index file truncated at ") + field);
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(bytes);
    return v;
  }
  std::string_view take(std::size_t bytes, const char* field) {
    if (pos_ + bytes > data_.size())
      throw FormatError(std::string("index file truncated at ") + field);
    auto s = data_.substr(pos_, bytes);
    pos_ += bytes;
    return s;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string serialize_labels(const LabelSet& ls) {
  const auto dim = ls.dimension();
  std::string out;
  out.reserve(36 + ls.size() * dim * 8);
  out.append(kIndexMagic);
  detail::put_le(out, kIndexVersion, 4);
  detail::put_le(out, static_cast<std::uint32_t>(ls.params.graphlet_size), 4);
  detail::put_le(out, ls.params.depth, 4);
  detail::put_le(out, ls.size(), 8);
  detail::put_le(out, dim, 4);
  detail::put_le(out, ls.fingerprint, 8);
  for (const auto& f : ls.labels) {
    if (f.dimension() != dim) throw std::invalid_argument("serialize_labels: ragged labels");
    for (double x : f.values) detail::put_le(out, std::bit_cast<std::uint64_t>(x), 8);
  }
  return out;
}

inline LabelSet deserialize_labels(std::string_view data) {
  detail::LeReader in(data);
  if (in.take(4, "magic") != kIndexMagic) throw FormatError("not an index file (bad magic)");
  auto version = in.get(4, "version");
  if (version != kIndexVersion)
    throw FormatError("unsupported index version " + std::to_string(version));
  LabelSet ls;
  ls.params.graphlet_size = static_cast<int>(in.get(4, "graphlet size"));
  ls.params.depth = static_cast<std::uint32_t>(in.get(4, "depth"));
  try {
    ls.params.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("bad index parameters: ") + e.what());
  }
  auto n = in.get(8, "vertex count");
  auto dim = in.get(4, "dimension");
  if (dim != ls.params.dimension()) throw FormatError("dimension does not match graphlet size");
  ls.fingerprint = in.get(8, "fingerprint");
  if (in.remaining() / 8 / dim < n) throw FormatError("index file truncated in label data");
  if (in.remaining() != n * dim * 8) throw FormatError("trailing bytes after label data");
  ls.labels.resize(n);
  for (auto& f : ls.labels) {
    f.l = ls.params.graphlet_size;
    f.values.resize(dim);
    for (auto& x : f.values) x = std::bit_cast<double>(in.get(8, "labels"));
  }
  return ls;
}

inline void save_index(const LabelSet& ls, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  auto bytes = serialize_labels(ls);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

inline LabelSet load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_labels(buf.str());
}

/// Message when `ls` was computed on a graph other than `g`.
inline std::optional<std::string> staleness_warning(const LabelSet& ls, const Graph& g) {
  if (ls.size() != g.n())
    return "index has " + std::to_string(ls.size()) + " labels but graph has " +
           std::to_string(g.n()) + " vertices";
  if (ls.fingerprint != fingerprint(g)) return std::string("index fingerprint does not match graph");
  return std::nullopt;
}

}  // namespace gsim
