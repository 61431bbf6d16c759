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

/// Adam optimization, evaluation and the per-sample training loop shared
/// by every Classifier.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qsann/classifier.hpp"
#include "qsann/data.hpp"
#include "qsann/errors.hpp"

namespace qsann {

struct TrainConfig {
    double learning_rate = 0.008;
    int epochs = 100;
    /// Samples averaged per optimizer step; 1 updates after every sample.
    int batch_size = 1;
    std::uint64_t seed = 0;
    /// Stop once the mean relative change of the training loss over the
    /// last `stop_window` epochs drops below `stop_tol`.
    int stop_window = 10;
    double stop_tol = 1e-4;
    /// Stop when the dev loss has not improved for `stop_window` epochs and
    /// restore the best parameters. Needs a dev split.
    bool dev_early_stopping = false;
    /// Visit training samples in a fresh seeded order every epoch.
    bool shuffle = true;
    /// Draw fresh initial parameters from `seed` before the first epoch.
    bool initialize = true;
    bool record_wall_time = false;

    void validate() const;
};

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t step = 0;
    GradientBlocks first_moment;
    GradientBlocks second_moment;

    [[nodiscard]] static AdamState for_model(const Classifier &model);
};

/// One bias-corrected Adam update. Throws NumericError, leaving the model
/// untouched, if any gradient entry is not finite.
void adam_step(Classifier &model, const GradientBlocks &grads, AdamState &state, double lr);

struct Evaluation {
    double accuracy = 0.0;
    double mean_loss = 0.0;
};

/// Accuracy with the 0.5 threshold and the regularized mean loss.
[[nodiscard]] Evaluation evaluate(std::span<const LabeledSequence> samples,
                                  const Classifier &model);

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    std::optional<double> test_acc;
    std::optional<double> dev_loss;
    std::optional<double> wall_time_s;
};

struct TrainResult {
    std::vector<EpochMetrics> log;
    int epochs_run = 0;
    bool converged = false;
    bool stopped_on_dev = false;
};

/// Raised when a loss or gradient becomes non-finite. Carries the metrics
/// so far and a copy of the model after the last finite epoch.
class TrainingAborted : public NumericError {
  public:
    TrainingAborted(const std::string &what, TrainResult partial,
                    std::shared_ptr<const Classifier> last_good)
        : NumericError(what), partial_(std::move(partial)), last_good_(std::move(last_good)) {}

    [[nodiscard]] const TrainResult &partial() const noexcept { return partial_; }
    [[nodiscard]] const std::shared_ptr<const Classifier> &last_good() const noexcept {
        return last_good_;
    }

  private:
    TrainResult partial_;
    std::shared_ptr<const Classifier> last_good_;
};

using EpochCallback = std::function<void(const EpochMetrics &)>;

/// Trains `model` in place on `data.train`; test and dev accuracies are
/// logged when those splits are non-empty.
TrainResult train(Classifier &model, const Dataset &data, const TrainConfig &config,
                  const EpochCallback &on_epoch = {});

} // namespace qsann
