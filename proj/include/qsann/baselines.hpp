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

/// Classical reference models trained through the same harness as QSANN.
///
/// CSANN: a(s, j) = softmax_j(x_s^T W_q^T W_k x_j), y_s = sum_j a(s, j) W_v x_j,
/// followed by mean pooling and the sigmoid head. There is no residual
/// connection.
///
/// Naive: sigmoid(w . mean_s x_s + b).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "qsann/classifier.hpp"

namespace qsann {

struct BaselineConfig {
    std::size_t dim = 16;
    RegularizationConfig regularization;

    void validate() const;
};

class CsannModel final : public Classifier {
  public:
    CsannModel(BaselineConfig config, std::size_t vocab_size);

    [[nodiscard]] std::string_view kind() const override { return "csann"; }
    [[nodiscard]] const BaselineConfig &config() const noexcept { return config_; }

    /// Row-major d x d matrices.
    [[nodiscard]] std::vector<double> &w_query() noexcept { return w_q_; }
    [[nodiscard]] std::vector<double> &w_key() noexcept { return w_k_; }
    [[nodiscard]] std::vector<double> &w_value() noexcept { return w_v_; }
    [[nodiscard]] Vector &head_w() noexcept { return head_w_; }
    void set_head_b(double b) noexcept { head_b_ = b; }
    [[nodiscard]] EmbeddingTable &embeddings() noexcept { return embeddings_; }

    [[nodiscard]] Prediction predict(std::span<const TokenId> tokens) const override;
    [[nodiscard]] double sample_loss(const LabeledSequence &sample) const override;
    double sample_gradient(const LabeledSequence &sample, GradientBlocks &grad) const override;
    [[nodiscard]] std::vector<ParameterBlock> parameters() override;
    using Classifier::parameters;
    void initialize(std::uint64_t seed) override;
    /// attention = 3 d^2, head = d + 1.
    [[nodiscard]] ParameterCount parameter_count() const override;
    [[nodiscard]] std::size_t vocabulary_size() const override { return embeddings_.rows(); }
    [[nodiscard]] const RegularizationConfig &regularization() const override {
        return config_.regularization;
    }
    [[nodiscard]] std::unique_ptr<Classifier> clone() const override {
        return std::make_unique<CsannModel>(*this);
    }

  private:
    struct Forward;
    Forward run(std::span<const TokenId> tokens) const;
    double regularization_term(std::span<const TokenId> tokens) const;

    BaselineConfig config_;
    std::vector<double> w_q_, w_k_, w_v_;
    Vector head_w_;
    double head_b_ = 0.0;
    EmbeddingTable embeddings_;
};

class NaiveModel final : public Classifier {
  public:
    NaiveModel(BaselineConfig config, std::size_t vocab_size);

    [[nodiscard]] std::string_view kind() const override { return "naive"; }
    [[nodiscard]] const BaselineConfig &config() const noexcept { return config_; }
    [[nodiscard]] Vector &head_w() noexcept { return head_w_; }
    void set_head_b(double b) noexcept { head_b_ = b; }
    [[nodiscard]] EmbeddingTable &embeddings() noexcept { return embeddings_; }

    [[nodiscard]] Prediction predict(std::span<const TokenId> tokens) const override;
    [[nodiscard]] double sample_loss(const LabeledSequence &sample) const override;
    double sample_gradient(const LabeledSequence &sample, GradientBlocks &grad) const override;
    [[nodiscard]] std::vector<ParameterBlock> parameters() override;
    using Classifier::parameters;
    void initialize(std::uint64_t seed) override;
    [[nodiscard]] ParameterCount parameter_count() const override;
    [[nodiscard]] std::size_t vocabulary_size() const override { return embeddings_.rows(); }
    [[nodiscard]] const RegularizationConfig &regularization() const override {
        return config_.regularization;
    }
    [[nodiscard]] std::unique_ptr<Classifier> clone() const override {
        return std::make_unique<NaiveModel>(*this);
    }

  private:
    Vector mean_embedding(std::span<const TokenId> tokens) const;
    double regularization_term(std::span<const TokenId> tokens) const;

    BaselineConfig config_;
    Vector head_w_;
    double head_b_ = 0.0;
    EmbeddingTable embeddings_;
};

[[nodiscard]] inline Prediction csann_forward(std::span<const TokenId> tokens,
                                              const CsannModel &model) {
    return model.predict(tokens);
}
[[nodiscard]] inline Prediction naive_forward(std::span<const TokenId> tokens,
                                              const NaiveModel &model) {
    return model.predict(tokens);
}

} // namespace qsann
