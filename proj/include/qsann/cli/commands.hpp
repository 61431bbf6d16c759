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

/// Subcommands behind the `qsann` executable. Each returns a process exit
/// code: 0 on success, 1 for runtime failures, 2 for usage or configuration
/// errors.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsann/cli/config.hpp"
#include "qsann/train.hpp"

namespace qsann::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr int kArtifactSchemaVersion = 1;

struct SeedOutcome {
    std::uint64_t seed = 0;
    double train_acc = 0.0;
    std::optional<double> dev_acc;
    double test_acc = 0.0;
    int epochs_run = 0;
    bool converged = false;
    bool stopped_on_dev = false;
    bool aborted = false;
};

struct TrainSummary {
    std::vector<SeedOutcome> seeds;
    double test_mean = 0.0;
    double test_std = 0.0;
    double train_mean = 0.0;
    double train_std = 0.0;
    int exit_code = kExitOk;
};

/// Mean and sample standard deviation (zero for a single value).
[[nodiscard]] std::pair<double, double> mean_std(std::span<const double> values);

/// Trains every configured seed and writes
///   <out>/effective_config.ini, <out>/dataset_manifest.json,
///   <out>/seed_<k>/{checkpoint.json, metrics.jsonl}, <out>/summary.json.
/// Throws ConfigError (nothing written) when the dataset cannot be read.
[[nodiscard]] TrainSummary run_training(const RunConfig &config, std::ostream &log);

struct EvalOptions {
    std::filesystem::path checkpoint;
    /// Defaults to the dataset recorded in the checkpoint.
    std::filesystem::path dataset;
    /// train, dev, test, or all (every line of the file, no re-split).
    std::string split = "test";
    std::filesystem::path output;
};

struct EvalReport {
    std::string split;
    std::size_t samples = 0;
    double accuracy = 0.0;
    double mean_loss = 0.0;
};

[[nodiscard]] EvalReport run_eval(const EvalOptions &options);

struct AttentionOptions {
    std::filesystem::path checkpoint;
    std::filesystem::path dataset;
    std::string split = "test";
    std::vector<std::size_t> indices;
    std::filesystem::path output_dir = "attention";
};

/// Writes sample<i>_layer<l>_averaged.csv (one header row of words, one row
/// of column-averaged coefficients) and sample<i>_layer<l>_matrix.csv for
/// every selected sample. Returns the written paths.
[[nodiscard]] std::vector<std::filesystem::path> run_attention(const AttentionOptions &options);

struct NoiseSweepOptions {
    RunConfig base;
    std::vector<sim::NoiseKind> channels{sim::NoiseKind::Depolarizing,
                                         sim::NoiseKind::AmplitudeDamping};
    std::vector<double> levels{0.01, 0.1, 0.2};
};

struct NoiseSweepEntry {
    sim::NoiseKind channel = sim::NoiseKind::Depolarizing;
    double p = 0.0;
    std::vector<double> test_accuracies;
    double mean = 0.0;
    double std = 0.0;
};

/// Runs the full seed list for every (channel, p) pair under
/// <out>/<channel>_p<p>/ and writes <out>/noise_sweep.json.
[[nodiscard]] std::vector<NoiseSweepEntry> run_noise_sweep(const NoiseSweepOptions &options,
                                                           std::ostream &log);

/// Writes a two-class corpus with disjoint class vocabularies as TSV.
void write_toy_corpus(const std::filesystem::path &path, std::size_t count, std::uint64_t seed);

/// Parses argv and dispatches; never throws.
int run_cli(int argc, char **argv);

} // namespace qsann::cli
