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

#ifndef PZSC_ERROR_HPP
#define PZSC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pzsc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied something the operation cannot accept (dimension
// mismatch, empty class set, bad fraction, ...). The CLI maps it to exit 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// Non-finite values in parameters, objectives or gradients. CLI exit 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

enum class IoErrorKind {
  kMissingFile,
  kBadMagic,
  kBadVersion,
  kBadDtype,
  kTruncated,
  kDimensionMismatch,
  kParse,
  kWrite,
};

const char* to_string(IoErrorKind kind);

// File-level failures. Derives from InputError so the CLI treats a broken
// file like any other rejected input.
class IoError : public InputError {
 public:
  IoError(IoErrorKind kind, const std::string& what)
      : InputError(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  IoErrorKind kind() const noexcept { return kind_; }

 private:
  IoErrorKind kind_;
};

inline const char* to_string(IoErrorKind kind) {
  switch (kind) {
    case IoErrorKind::kMissingFile: return "missing file";
    case IoErrorKind::kBadMagic: return "bad magic";
    case IoErrorKind::kBadVersion: return "unsupported version";
    case IoErrorKind::kBadDtype: return "unsupported dtype";
    case IoErrorKind::kTruncated: return "truncated payload";
    case IoErrorKind::kDimensionMismatch: return "dimension mismatch";
    case IoErrorKind::kParse: return "parse error";
    case IoErrorKind::kWrite: return "write error";
  }
  return "io error";
}

}  // namespace pzsc

#endif  // PZSC_ERROR_HPP
