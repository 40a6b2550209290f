// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

#include "tinyrel/cli.h"

int main(int argc, char** argv) { return tinyrel::RunCli(argc, argv); }
