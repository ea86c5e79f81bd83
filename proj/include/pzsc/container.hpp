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

#ifndef PZSC_CONTAINER_HPP
#define PZSC_CONTAINER_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pzsc/types.hpp"

namespace pzsc {

// Binary matrix container, all fields little-endian:
//
//   offset  size  field
//   0       4     magic "PMTX"
//   4       2     version (u16, currently 1)
//   6       2     dtype   (u16, 1 = f64)
//   8       4     rows    (u32)
//   12      4     cols    (u32)
//   16      8*r*c payload, row-major IEEE-754 binary64
//
// Producers holding f32 data convert to f64 before writing.
inline constexpr char kContainerMagic[4] = {'P', 'M', 'T', 'X'};
inline constexpr std::uint16_t kContainerVersion = 1;
inline constexpr std::uint16_t kDtypeF64 = 1;
inline constexpr std::size_t kContainerHeaderBytes = 16;

void write_matrix(std::ostream& out, const Matrix& m);
// `source` names the stream in error messages.
Matrix read_matrix(std::istream& in, const std::string& source = "<stream>");

void save_matrix(const std::string& path, const Matrix& m);
Matrix load_matrix(const std::string& path);

// UTF-8, one entry per line, '\n' terminated.
void save_lines(const std::string& path, const std::vector<std::string>& lines);
std::vector<std::string> load_lines(const std::string& path);

void save_text(const std::string& path, const std::string& contents);
std::string load_text(const std::string& path);

}  // namespace pzsc

#endif  // PZSC_CONTAINER_HPP
