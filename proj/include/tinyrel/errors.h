// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tinyrel {

enum class ErrorKind {
  kUsage,      // bad arguments or preconditions
  kFormat,     // malformed input file or record
  kIo,         // file could not be opened/written
  kVersion,    // checkpoint version mismatch
  kTruncated,  // checkpoint ended early
  kShape,      // tensor shapes disagree with the declared config
  kNumeric,    // NaN/Inf or undefined numeric result
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// A format violation located at `path:line` (line is 1-based, 0 if unknown).
class FormatError : public Error {
 public:
  FormatError(std::string path, std::size_t line, const std::string& what);
  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

inline Error UsageError(const std::string& m) { return Error(ErrorKind::kUsage, m); }
inline Error NumericError(const std::string& m) { return Error(ErrorKind::kNumeric, m); }
inline Error IoError(const std::string& m) { return Error(ErrorKind::kIo, m); }

// Process exit code for an error category: 1 usage, 2 input format, 3 numeric.
int ExitCodeFor(ErrorKind kind);

}  // namespace tinyrel
