// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Lives in the library so tests can drive it
// in-process.

#pragma once

#include <iostream>

namespace tinyrel {

// Parses argv and runs one subcommand. Returns the process exit code:
// 0 ok, 1 usage, 2 format/io/version/truncated/shape, 3 numeric.
int RunCli(int argc, const char* const* argv, std::ostream& out = std::cout,
           std::ostream& err = std::cerr);

}  // namespace tinyrel
