// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/errors.h"

namespace tinyrel {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return "usage";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kVersion: return "version";
    case ErrorKind::kTruncated: return "truncated";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kNumeric: return "numeric";
  }
  return "unknown";
}

FormatError::FormatError(std::string path, std::size_t line, const std::string& what)
    : Error(ErrorKind::kFormat,
            path + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
      path_(std::move(path)),
      line_(line) {}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return 1;
    case ErrorKind::kNumeric: return 3;
    default: return 2;
  }
}

}  // namespace tinyrel
