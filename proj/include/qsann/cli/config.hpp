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

/// Run configuration read from INI files.
///
///   [run]        name, model (qsann | csann | naive), seeds, jobs, output_dir, wall_time
///   [data]       path, split (e.g. "80,20" or "70,30,30"), split_seed
///   [model]      n_qubits, enc_depth, qkv_depth, layers, dim, lambda, gamma
///   [train]      learning_rate, epochs, batch_size, stop_window, stop_tol,
///                dev_early_stopping, shuffle
///   [simulation] noise (none | depolarizing | amplitude_damping), noise_p,
///                shots, shot_seed, attention (gaussian | inner_product)
///
/// Overrides use the dotted form `section.key=value`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsann/baselines.hpp"
#include "qsann/model.hpp"
#include "qsann/train.hpp"

namespace qsann::cli {

enum class ModelKind { Qsann, Csann, Naive };

[[nodiscard]] std::string_view to_string(ModelKind kind) noexcept;
[[nodiscard]] ModelKind parse_model_kind(std::string_view text);

/// Environment variable naming the default parent of output directories.
inline constexpr const char *kOutputRootEnv = "QSANN_OUTPUT_ROOT";

struct RunConfig {
    std::string name = "run";
    ModelKind model = ModelKind::Qsann;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8};
    /// Seeds trained concurrently.
    int jobs = 1;
    /// Empty means `$QSANN_OUTPUT_ROOT/<name>`, or `runs/<name>` without it.
    std::filesystem::path output_dir;
    bool wall_time = false;

    std::filesystem::path dataset;
    /// Relative split weights, normalized before use.
    std::vector<double> split{80, 20};
    std::uint64_t split_seed = 0;

    QsannConfig qsann;
    /// Embedding width. Derived for qsann (and must match if given);
    /// 16 by default for the baselines.
    std::optional<std::size_t> dim;

    TrainConfig train;
    SimulationOptions simulation;

    [[nodiscard]] std::size_t embedding_dim() const;
    [[nodiscard]] std::vector<double> split_ratios() const;
    [[nodiscard]] BaselineConfig baseline() const;
    [[nodiscard]] std::filesystem::path resolved_output_dir() const;

    /// Throws ConfigError on any inconsistency.
    void validate() const;

    /// Complete INI text; parsing it back gives an equal configuration.
    [[nodiscard]] std::string to_ini() const;
};

/// Sets one `section.key` entry. Throws ConfigError for unknown keys or
/// malformed values.
void apply_setting(RunConfig &config, std::string_view key, std::string_view value);

/// Applies `section.key=value` strings in order.
void apply_overrides(RunConfig &config, std::span<const std::string> overrides);

/// Parses INI text. Relative dataset paths are resolved against `base_dir`.
[[nodiscard]] RunConfig parse_config(std::istream &in,
                                     const std::filesystem::path &base_dir = {});

/// Reads a config file (or starts from defaults when `path` is empty),
/// applies the overrides and validates the result.
[[nodiscard]] RunConfig load_config(const std::filesystem::path &path,
                                    std::span<const std::string> overrides = {});

} // namespace qsann::cli
