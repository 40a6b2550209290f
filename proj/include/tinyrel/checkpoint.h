// Copyright 2026 The tinyrel Authors
// SPDX-License-Identifier: Apache-2.0

// Versioned binary checkpoint: header "B2DNN1", topology tag, config, shape
// table, vocab, then little-endian float32 parameters. See
// docs/checkpoint_format.md for the byte layout.

#pragma once

#include <string>

#include "tinyrel/student.h"
#include "tinyrel/vocab.h"

namespace tinyrel {

inline constexpr char kCheckpointMagic[] = "B2DNN1";

struct Checkpoint {
  StudentModel<float> model;
  Vocab vocab;
};

void SaveCheckpoint(const StudentModel<float>& model, const Vocab& vocab, const std::string& path);

// Throws Error with kind kVersion (magic prefix matches, version differs),
// kTruncated (file ends early), kShape (shape table disagrees with the
// config) or kFormat (anything else malformed).
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace tinyrel
