// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

namespace tinyrel {

struct ExternalSortOptions {
  std::size_t run_lines = 1 << 20;  // lines held in memory per sorted run
  std::string temp_dir;             // empty: system temp directory
};

struct ExternalSortStats {
  std::size_t lines = 0;
  std::size_t runs = 0;
};

// Sorts the data lines of a TSV file by (first field, second field) in byte
// order with bounded memory: sorted runs are spilled to temporary files and
// k-way merged. A first line starting with '#' is kept as the header. Equal
// keys keep their input order. Lines with fewer than two fields are a
// FormatError naming the input line.
ExternalSortStats ExternalSortByKey(const std::string& in_path, const std::string& out_path,
                                    const ExternalSortOptions& options = {});

}  // namespace tinyrel
