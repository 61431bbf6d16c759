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

/// Quantum self-attention neural network: embedding lookup, stacked quantum
/// self-attention layers, mean pooling and a sigmoid head.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "qsann/classifier.hpp"
#include "qsann/data.hpp"
#include "qsann/qsal.hpp"

namespace qsann {

struct QsannConfig {
    int n_qubits = 2;
    int enc_depth = 1;
    int qkv_depth = 1;
    int layers = 1;
    RegularizationConfig regularization;

    /// d = n (D_enc + 2).
    [[nodiscard]] std::size_t dim() const noexcept { return layer_spec().dim(); }
    [[nodiscard]] LayerSpec layer_spec() const noexcept {
        return {n_qubits, enc_depth, qkv_depth};
    }
    void validate() const;
};

/// qkv = L * 3 * n (D_qkv + 2), head = d + 1.
[[nodiscard]] ParameterCount parameter_count(const QsannConfig &config);

/// Gradient of the single-sample loss with respect to every parameter.
struct GradientBundle {
    std::vector<QsalLayerParams> d_theta;
    Vector d_w;
    double d_b = 0.0;
    EmbeddingTable d_embeddings;
    double loss = 0.0;
};

class QsannModel final : public Classifier {
  public:
    /// Parameters start at zero; call `initialize` before training.
    QsannModel(QsannConfig config, std::size_t vocab_size, SimulationOptions options = {});
    /// Uses an explicit observable list, e.g. one restored from a checkpoint.
    QsannModel(QsannConfig config, std::size_t vocab_size, ObservableSet observables,
               SimulationOptions options = {});

    [[nodiscard]] std::string_view kind() const override { return "qsann"; }
    [[nodiscard]] const QsannConfig &config() const noexcept { return config_; }
    [[nodiscard]] const SimulationOptions &simulation() const noexcept {
        return layer_.backend().options();
    }
    [[nodiscard]] const ObservableSet &observables() const noexcept {
        return layer_.observables();
    }

    [[nodiscard]] std::span<const QsalLayerParams> layers() const noexcept { return layers_; }
    [[nodiscard]] std::span<QsalLayerParams> layers() noexcept { return layers_; }
    [[nodiscard]] const Vector &head_w() const noexcept { return head_w_; }
    [[nodiscard]] Vector &head_w() noexcept { return head_w_; }
    [[nodiscard]] double head_b() const noexcept { return head_b_; }
    void set_head_b(double b) noexcept { head_b_ = b; }
    [[nodiscard]] const EmbeddingTable &embeddings() const noexcept { return embeddings_; }
    [[nodiscard]] EmbeddingTable &embeddings() noexcept { return embeddings_; }

    /// Embeds, runs every layer, mean-pools and applies sigmoid(w . mean + b).
    [[nodiscard]] Prediction forward(std::span<const TokenId> tokens) const;
    [[nodiscard]] GradientBundle backward(const LabeledSequence &sample) const;

    [[nodiscard]] Prediction predict(std::span<const TokenId> tokens) const override {
        return forward(tokens);
    }
    [[nodiscard]] double sample_loss(const LabeledSequence &sample) const override;
    double sample_gradient(const LabeledSequence &sample, GradientBlocks &grad) const override;
    [[nodiscard]] std::vector<ParameterBlock> parameters() override;
    using Classifier::parameters;
    void initialize(std::uint64_t seed) override;
    [[nodiscard]] ParameterCount parameter_count() const override {
        return qsann::parameter_count(config_);
    }
    [[nodiscard]] std::size_t vocabulary_size() const override { return embeddings_.rows(); }
    [[nodiscard]] const RegularizationConfig &regularization() const override {
        return config_.regularization;
    }
    [[nodiscard]] std::unique_ptr<Classifier> clone() const override {
        return std::make_unique<QsannModel>(*this);
    }

    /// Test hook forwarded to the attention layer.
    void set_zero_value_observables(bool enabled) noexcept {
        layer_.set_zero_value_observables(enabled);
    }

  private:
    VectorSequence embed(std::span<const TokenId> tokens) const;
    double regularization_term(std::span<const TokenId> tokens) const;

    QsannConfig config_;
    QuantumSelfAttentionLayer layer_;
    std::vector<QsalLayerParams> layers_;
    Vector head_w_;
    double head_b_ = 0.0;
    EmbeddingTable embeddings_;
};

} // namespace qsann
