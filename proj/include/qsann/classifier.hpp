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

/// Interface shared by the quantum model and the classical baselines so
/// that training, evaluation and checkpointing treat them alike.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsann/data.hpp"
#include "qsann/qsal.hpp"

namespace qsann {

struct Prediction {
    double y_hat = 0.5;
    int label = 1;
    /// One matrix per attention layer; empty for models without attention.
    std::vector<AttentionMatrix> attention;
};

[[nodiscard]] inline double sigmoid(double z) noexcept { return 1.0 / (1.0 + std::exp(-z)); }

/// Binary decision rule: label 1 iff y_hat >= 0.5.
[[nodiscard]] inline int decide(double y_hat) noexcept { return y_hat >= 0.5 ? 1 : 0; }

struct RegularizationConfig {
    /// Weight on |w|^2 / (2d).
    double lambda = 0.0;
    /// Weight on sum_s |x_s|^2 / (2d) over the embedded inputs of a sample.
    double gamma = 0.0;
};

struct ParameterCount {
    /// Query/key/value (or attention weight) parameters.
    std::size_t attention = 0;
    /// Fully-connected head, weights plus bias.
    std::size_t head = 0;
    std::size_t total = 0;

    friend bool operator==(const ParameterCount &, const ParameterCount &) = default;
};

template <class T> struct BasicParameterBlock {
    std::string name;
    std::vector<std::size_t> shape;
    std::span<T> values;
};
using ParameterBlock = BasicParameterBlock<double>;
using ConstParameterBlock = BasicParameterBlock<const double>;

/// Gradient storage aligned block-for-block with `Classifier::parameters()`.
using GradientBlocks = std::vector<std::vector<double>>;

class Classifier {
  public:
    virtual ~Classifier() = default;

    [[nodiscard]] virtual std::string_view kind() const = 0;
    [[nodiscard]] virtual Prediction predict(std::span<const TokenId> tokens) const = 0;

    /// (y_hat - y)^2 / 2 plus the regularization terms for one sample.
    [[nodiscard]] virtual double sample_loss(const LabeledSequence &sample) const = 0;

    /// Returns the sample loss and overwrites `grad` with its gradient.
    virtual double sample_gradient(const LabeledSequence &sample, GradientBlocks &grad) const = 0;

    /// Every trainable array, embeddings included. Order and names are stable.
    [[nodiscard]] virtual std::vector<ParameterBlock> parameters() = 0;
    [[nodiscard]] std::vector<ConstParameterBlock> parameters() const;

    /// Draws weights from N(0, 0.01^2) and zeroes the bias.
    virtual void initialize(std::uint64_t seed) = 0;

    /// Counts exclude the embedding table.
    [[nodiscard]] virtual ParameterCount parameter_count() const = 0;
    [[nodiscard]] virtual std::size_t vocabulary_size() const = 0;
    [[nodiscard]] virtual const RegularizationConfig &regularization() const = 0;

    [[nodiscard]] virtual std::unique_ptr<Classifier> clone() const = 0;

    /// Zero-filled gradient storage matching `parameters()`.
    [[nodiscard]] GradientBlocks zero_gradient() const;

  protected:
    Classifier() = default;
    Classifier(const Classifier &) = default;
    Classifier &operator=(const Classifier &) = default;
};

/// Regularized mean squared error over a batch:
/// mean over samples of `sample_loss`, i.e.
/// (1/2N) sum (y_hat - y)^2 + lambda/(2d) |w|^2 + gamma/(2d) mean_m sum_s |x_s|^2.
[[nodiscard]] double loss(std::span<const LabeledSequence> batch, const Classifier &model);

/// Fills `values` with N(0, std^2) draws.
void fill_gaussian(std::span<double> values, double stddev, std::mt19937_64 &rng);

} // namespace qsann
