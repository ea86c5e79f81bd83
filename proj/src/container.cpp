// Copyright 2026 The pzsc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pzsc/container.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "pzsc/error.hpp"

namespace pzsc {

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(const unsigned char* bytes) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  return static_cast<T>(value);
}

}  // namespace

void write_matrix(std::ostream& out, const Matrix& m) {
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (m.rows() > kMax || m.cols() > kMax) {
    throw IoError(IoErrorKind::kWrite, "matrix too large for the container");
  }
  out.write(kContainerMagic, 4);
  put_le<std::uint16_t>(out, kContainerVersion);
  put_le<std::uint16_t>(out, kDtypeF64);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
  std::vector<char> payload(static_cast<std::size_t>(m.size()) * 8);
  std::size_t pos = 0;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      const auto bits = std::bit_cast<std::uint64_t>(m(r, c));
      for (int b = 0; b < 8; ++b) payload[pos++] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    }
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError(IoErrorKind::kWrite, "failed writing matrix payload");
}

Matrix read_matrix(std::istream& in, const std::string& source) {
  std::array<unsigned char, kContainerHeaderBytes> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got >= 4 && std::memcmp(header.data(), kContainerMagic, 4) != 0) {
    throw IoError(IoErrorKind::kBadMagic, source + ": expected \"PMTX\"");
  }
  if (got < header.size()) {
    throw IoError(IoErrorKind::kTruncated,
                  source + ": header needs " + std::to_string(header.size()) +
                      " bytes, found " + std::to_string(got));
  }
  const auto version = get_le<std::uint16_t>(header.data() + 4);
  if (version != kContainerVersion) {
    throw IoError(IoErrorKind::kBadVersion,
                  source + ": version " + std::to_string(version));
  }
  const auto dtype = get_le<std::uint16_t>(header.data() + 6);
  if (dtype != kDtypeF64) {
    throw IoError(IoErrorKind::kBadDtype, source + ": dtype code " + std::to_string(dtype));
  }
  const auto rows = get_le<std::uint32_t>(header.data() + 8);
  const auto cols = get_le<std::uint32_t>(header.data() + 12);
  const std::uint64_t expected = std::uint64_t{rows} * cols * 8;
  // Chunked so a corrupted header cannot trigger a huge allocation.
  std::vector<unsigned char> payload;
  std::uint64_t actual = 0;
  constexpr std::uint64_t kChunk = 1 << 20;
  while (actual < expected) {
    const std::uint64_t want = std::min(kChunk, expected - actual);
    payload.resize(static_cast<std::size_t>(actual + want));
    in.read(reinterpret_cast<char*>(payload.data() + actual),
            static_cast<std::streamsize>(want));
    const auto n = static_cast<std::uint64_t>(in.gcount());
    actual += n;
    if (n < want) break;
  }
  if (actual != expected) {
    throw IoError(IoErrorKind::kTruncated,
                  source + ": expected " + std::to_string(expected) +
                      " payload bytes, found " + std::to_string(actual));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IoError(IoErrorKind::kDimensionMismatch,
                  source + ": trailing bytes after a " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " payload");
  }
  Matrix m(rows, cols);
  std::size_t pos = 0;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      m(r, c) = std::bit_cast<double>(get_le<std::uint64_t>(payload.data() + pos));
      pos += 8;
    }
  }
  return m;
}

void save_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoErrorKind::kWrite, "cannot create " + path);
  write_matrix(out, m);
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrorKind::kMissingFile, "cannot open " + path);
  return read_matrix(in, path);
}

void save_text(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoErrorKind::kWrite, "cannot create " + path);
  out << contents;
  if (!out) throw IoError(IoErrorKind::kWrite, "failed writing " + path);
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrorKind::kMissingFile, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::string contents;
  for (const auto& line : lines) {
    if (line.find('\n') != std::string::npos) {
      throw IoError(IoErrorKind::kWrite, path + ": entry contains a newline");
    }
    contents += line;
    contents += '\n';
  }
  save_text(path, contents);
}

std::vector<std::string> load_lines(const std::string& path) {
  const std::string contents = load_text(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < contents.size()) {
    auto end = contents.find('\n', start);
    if (end == std::string::npos) end = contents.size();
    std::string line = contents.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

}  // namespace pzsc
