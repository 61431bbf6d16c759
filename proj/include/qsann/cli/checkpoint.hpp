// Copyright 2026 The QSANN Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

/// Versioned JSON checkpoints. Parameter arrays are stored as base64 of
/// little-endian IEEE-754 doubles next to their names and shapes; the
/// document also carries the model configuration, vocabulary, value
/// observables and the data split that produced the vocabulary.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "qsann/classifier.hpp"
#include "qsann/cli/config.hpp"
#include "qsann/data.hpp"

namespace qsann::cli {

inline constexpr int kCheckpointSchemaVersion = 1;

struct CheckpointInfo {
    /// The run configuration that trained the model.
    RunConfig config;
    std::uint64_t train_seed = 0;
    int epochs_run = 0;
};

struct LoadedCheckpoint {
    std::unique_ptr<Classifier> model;
    Vocabulary vocabulary;
    CheckpointInfo info;
};

/// Creates a model of the configured kind with zeroed parameters.
[[nodiscard]] std::unique_ptr<Classifier> make_model(const RunConfig &config,
                                                     std::size_t vocab_size);

[[nodiscard]] std::string encode_doubles(std::span<const double> values);
/// Throws ParseError on malformed input.
[[nodiscard]] std::vector<double> decode_doubles(const std::string &text);

void save_checkpoint(const std::filesystem::path &path, const Classifier &model,
                     const Vocabulary &vocabulary, const CheckpointInfo &info);

/// Throws ParseError when the file is missing, malformed or inconsistent.
[[nodiscard]] LoadedCheckpoint load_checkpoint(const std::filesystem::path &path);

} // namespace qsann::cli
