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
#include "qsann/model.hpp"

#include <numeric>
#include <random>
#include <string>

#include "qsann/errors.hpp"

namespace qsann {

std::vector<ConstParameterBlock> Classifier::parameters() const {
    std::vector<ConstParameterBlock> out;
    for (auto &b : const_cast<Classifier *>(this)->parameters()) {
        out.push_back({std::move(b.name), std::move(b.shape), b.values});
    }
    return out;
}

GradientBlocks Classifier::zero_gradient() const {
    GradientBlocks g;
    for (const auto &b : parameters()) {
        g.emplace_back(b.values.size(), 0.0);
    }
    return g;
}

double loss(std::span<const LabeledSequence> batch, const Classifier &model) {
    if (batch.empty()) {
        throw EmptySequenceError("loss over an empty batch");
    }
    double sum = 0.0;
    for (const auto &sample : batch) {
        sum += model.sample_loss(sample);
    }
    return sum / static_cast<double>(batch.size());
}

void fill_gaussian(std::span<double> values, double stddev, std::mt19937_64 &rng) {
    std::normal_distribution<double> dist(0.0, stddev);
    for (auto &v : values) {
        v = dist(rng);
    }
}

// ---------------------------------------------------------------------------

void QsannConfig::validate() const {
    layer_spec().validate();
    if (layers < 1) {
        throw ConfigError("QSANN needs at least one attention layer");
    }
    if (regularization.lambda < 0.0 || regularization.gamma < 0.0) {
        throw ConfigError("regularization coefficients must be non-negative");
    }
}

ParameterCount parameter_count(const QsannConfig &config) {
    const std::size_t qkv = static_cast<std::size_t>(config.layers) * 3 *
                            config.layer_spec().qkv().param_count();
    const std::size_t head = config.dim() + 1;
    return {qkv, head, qkv + head};
}

QsannModel::QsannModel(QsannConfig config, std::size_t vocab_size, SimulationOptions options)
    : QsannModel(config, vocab_size,
                 ObservableSet::standard(config.n_qubits, config.layer_spec().dim()),
                 options) {}

QsannModel::QsannModel(QsannConfig config, std::size_t vocab_size, ObservableSet observables,
                       SimulationOptions options)
    : config_(config), layer_(config.layer_spec(), std::move(observables), options),
      layers_(static_cast<std::size_t>(std::max(config.layers, 0)),
              QsalLayerParams::zeros(config.layer_spec())),
      head_w_(config.dim(), 0.0), embeddings_(vocab_size, config.dim()) {
    config_.validate();
}

VectorSequence QsannModel::embed(std::span<const TokenId> tokens) const {
    if (tokens.empty()) {
        throw EmptySequenceError("cannot classify an empty sequence");
    }
    VectorSequence xs;
    xs.reserve(tokens.size());
    for (TokenId t : tokens) {
        const auto row = embeddings_.row(t);
        xs.emplace_back(row.begin(), row.end());
    }
    return xs;
}

double QsannModel::regularization_term(std::span<const TokenId> tokens) const {
    const double d = static_cast<double>(config_.dim());
    const auto &reg = config_.regularization;
    double w2 = std::inner_product(head_w_.begin(), head_w_.end(), head_w_.begin(), 0.0);
    double x2 = 0.0;
    for (TokenId t : tokens) {
        const auto row = embeddings_.row(t);
        x2 += std::inner_product(row.begin(), row.end(), row.begin(), 0.0);
    }
    return reg.lambda / (2.0 * d) * w2 + reg.gamma / (2.0 * d) * x2;
}

Prediction QsannModel::forward(std::span<const TokenId> tokens) const {
    VectorSequence xs = embed(tokens);
    Prediction pred;
    for (const auto &params : layers_) {
        auto out = layer_.forward(xs, params);
        xs = std::move(out.outputs);
        pred.attention.push_back(std::move(out.attention));
    }
    const double inv_s = 1.0 / static_cast<double>(xs.size());
    double z = head_b_;
    for (const auto &y : xs) {
        z += inv_s * std::inner_product(head_w_.begin(), head_w_.end(), y.begin(), 0.0);
    }
    pred.y_hat = sigmoid(z);
    pred.label = decide(pred.y_hat);
    return pred;
}

double QsannModel::sample_loss(const LabeledSequence &sample) const {
    const double err = forward(sample.tokens).y_hat - sample.label;
    return 0.5 * err * err + regularization_term(sample.tokens);
}

GradientBundle QsannModel::backward(const LabeledSequence &sample) const {
    const std::size_t d = config_.dim();
    const double dd = static_cast<double>(d);
    const auto &reg = config_.regularization;

    std::vector<LayerCache> caches;
    caches.reserve(layers_.size());
    VectorSequence xs = embed(sample.tokens);
    for (const auto &params : layers_) {
        caches.push_back(layer_.forward_cached(xs, params));
        xs = caches.back().outputs;
    }
    const std::size_t S = xs.size();
    const double inv_s = 1.0 / static_cast<double>(S);
    Vector pooled(d, 0.0);
    for (const auto &y : xs) {
        for (std::size_t m = 0; m < d; ++m) {
            pooled[m] += inv_s * y[m];
        }
    }
    const double y_hat = sigmoid(
        std::inner_product(head_w_.begin(), head_w_.end(), pooled.begin(), head_b_));
    const double err = y_hat - sample.label;
    const double sigma_tilde = err * y_hat * (1.0 - y_hat);

    GradientBundle g;
    g.loss = 0.5 * err * err + regularization_term(sample.tokens);
    g.d_b = sigma_tilde;
    g.d_w.resize(d);
    for (std::size_t m = 0; m < d; ++m) {
        g.d_w[m] = sigma_tilde * pooled[m] + reg.lambda / dd * head_w_[m];
    }

    // dL/dy_s of the last layer is the same for every position.
    VectorSequence upstream(S, Vector(d));
    for (auto &row : upstream) {
        for (std::size_t m = 0; m < d; ++m) {
            row[m] = sigma_tilde * inv_s * head_w_[m];
        }
    }
    g.d_theta.resize(layers_.size());
    for (std::size_t l = layers_.size(); l-- > 0;) {
        auto lg = layer_.backward(caches[l], layers_[l], upstream);
        g.d_theta[l] = {std::move(lg.theta_q), std::move(lg.theta_k), std::move(lg.theta_v)};
        upstream = lg.inputs.total();
    }

    g.d_embeddings = EmbeddingTable(embeddings_.rows(), d);
    for (std::size_t s = 0; s < S; ++s) {
        const TokenId t = sample.tokens[s];
        auto dst = g.d_embeddings.row(t);
        const auto x = embeddings_.row(t);
        for (std::size_t m = 0; m < d; ++m) {
            dst[m] += upstream[s][m] + reg.gamma / dd * x[m];
        }
    }
    return g;
}

double QsannModel::sample_gradient(const LabeledSequence &sample, GradientBlocks &grad) const {
    auto g = backward(sample);
    grad.clear();
    grad.emplace_back(g.d_embeddings.data().begin(), g.d_embeddings.data().end());
    for (auto &layer : g.d_theta) {
        grad.push_back(std::move(layer.theta_q));
        grad.push_back(std::move(layer.theta_k));
        grad.push_back(std::move(layer.theta_v));
    }
    grad.push_back(std::move(g.d_w));
    grad.push_back({g.d_b});
    return g.loss;
}

std::vector<ParameterBlock> QsannModel::parameters() {
    std::vector<ParameterBlock> out;
    out.push_back({"embeddings", {embeddings_.rows(), embeddings_.dim()}, embeddings_.data()});
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const std::string prefix = "layer" + std::to_string(l) + ".";
        auto &p = layers_[l];
        out.push_back({prefix + "theta_q", {p.theta_q.size()}, p.theta_q});
        out.push_back({prefix + "theta_k", {p.theta_k.size()}, p.theta_k});
        out.push_back({prefix + "theta_v", {p.theta_v.size()}, p.theta_v});
    }
    out.push_back({"head.w", {head_w_.size()}, head_w_});
    out.push_back({"head.b", {1}, std::span<double>(&head_b_, 1)});
    return out;
}

void QsannModel::initialize(std::uint64_t seed) {
    constexpr double kInitStd = 0.01;
    std::mt19937_64 rng(seed);
    for (auto &p : layers_) {
        fill_gaussian(p.theta_q, kInitStd, rng);
        fill_gaussian(p.theta_k, kInitStd, rng);
        fill_gaussian(p.theta_v, kInitStd, rng);
    }
    fill_gaussian(head_w_, kInitStd, rng);
    head_b_ = 0.0;
    fill_gaussian(embeddings_.data(), kInitStd, rng);
}

} // namespace qsann
