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
#include "qsann/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "qsann/errors.hpp"

namespace qsann {
namespace {

constexpr double kInitStd = 0.01;

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// out = M x for a row-major d x d matrix.
Vector matvec(const std::vector<double> &m, std::span<const double> x) {
    const std::size_t d = x.size();
    Vector out(d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
        out[r] = dot(std::span<const double>(m).subspan(r * d, d), x);
    }
    return out;
}

// out += M^T x
void add_matvec_transposed(const std::vector<double> &m, std::span<const double> x,
                           std::span<double> out) {
    const std::size_t d = x.size();
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            out[c] += m[r * d + c] * x[r];
        }
    }
}

// grad += a b^T
void add_outer(std::vector<double> &grad, std::span<const double> a, std::span<const double> b) {
    const std::size_t d = a.size();
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            grad[r * d + c] += a[r] * b[c];
        }
    }
}

double embedding_norm2(const EmbeddingTable &table, std::span<const TokenId> tokens) {
    double sum = 0.0;
    for (TokenId t : tokens) {
        const auto row = table.row(t);
        sum += dot(row, row);
    }
    return sum;
}

} // namespace

void BaselineConfig::validate() const {
    if (dim == 0) {
        throw ConfigError("baseline embedding dimension must be positive");
    }
    if (regularization.lambda < 0.0 || regularization.gamma < 0.0) {
        throw ConfigError("regularization coefficients must be non-negative");
    }
}

// ---------------------------------------------------------------------------
// CSANN

struct CsannModel::Forward {
    VectorSequence x, q, k, v, y;
    std::vector<double> attention; // S x S
    Vector pooled;
    double y_hat = 0.5;
};

CsannModel::CsannModel(BaselineConfig config, std::size_t vocab_size)
    : config_(config), w_q_(config.dim * config.dim, 0.0), w_k_(config.dim * config.dim, 0.0),
      w_v_(config.dim * config.dim, 0.0), head_w_(config.dim, 0.0),
      embeddings_(vocab_size, config.dim) {
    config_.validate();
}

CsannModel::Forward CsannModel::run(std::span<const TokenId> tokens) const {
    if (tokens.empty()) {
        throw EmptySequenceError("cannot classify an empty sequence");
    }
    const std::size_t S = tokens.size();
    const std::size_t d = config_.dim;
    Forward f;
    for (TokenId t : tokens) {
        const auto row = embeddings_.row(t);
        f.x.emplace_back(row.begin(), row.end());
        f.q.push_back(matvec(w_q_, row));
        f.k.push_back(matvec(w_k_, row));
        f.v.push_back(matvec(w_v_, row));
    }
    f.attention.assign(S * S, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < S; ++j) {
            f.attention[s * S + j] = dot(f.q[s], f.k[j]);
            top = std::max(top, f.attention[s * S + j]);
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < S; ++j) {
            f.attention[s * S + j] = std::exp(f.attention[s * S + j] - top);
            sum += f.attention[s * S + j];
        }
        for (std::size_t j = 0; j < S; ++j) {
            f.attention[s * S + j] /= sum;
        }
    }
    f.y.assign(S, Vector(d, 0.0));
    f.pooled.assign(d, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t j = 0; j < S; ++j) {
            for (std::size_t m = 0; m < d; ++m) {
                f.y[s][m] += f.attention[s * S + j] * f.v[j][m];
            }
        }
        for (std::size_t m = 0; m < d; ++m) {
            f.pooled[m] += f.y[s][m] / static_cast<double>(S);
        }
    }
    f.y_hat = sigmoid(dot(head_w_, f.pooled) + head_b_);
    return f;
}

double CsannModel::regularization_term(std::span<const TokenId> tokens) const {
    const double d = static_cast<double>(config_.dim);
    const auto &reg = config_.regularization;
    return reg.lambda / (2.0 * d) * dot(head_w_, head_w_) +
           reg.gamma / (2.0 * d) * embedding_norm2(embeddings_, tokens);
}

Prediction CsannModel::predict(std::span<const TokenId> tokens) const {
    auto f = run(tokens);
    Prediction p;
    p.y_hat = f.y_hat;
    p.label = decide(f.y_hat);
    p.attention.emplace_back(tokens.size(), std::move(f.attention));
    return p;
}

double CsannModel::sample_loss(const LabeledSequence &sample) const {
    const double err = run(sample.tokens).y_hat - sample.label;
    return 0.5 * err * err + regularization_term(sample.tokens);
}

double CsannModel::sample_gradient(const LabeledSequence &sample, GradientBlocks &grad) const {
    const auto f = run(sample.tokens);
    const std::size_t S = sample.tokens.size();
    const std::size_t d = config_.dim;
    const double dd = static_cast<double>(d);
    const auto &reg = config_.regularization;
    const double err = f.y_hat - sample.label;
    const double sigma_tilde = err * f.y_hat * (1.0 - f.y_hat);

    grad = zero_gradient();
    auto &g_emb = grad[0];
    auto &g_wq = grad[1];
    auto &g_wk = grad[2];
    auto &g_wv = grad[3];
    auto &g_w = grad[4];
    grad[5][0] = sigma_tilde;
    for (std::size_t m = 0; m < d; ++m) {
        g_w[m] = sigma_tilde * f.pooled[m] + reg.lambda / dd * head_w_[m];
    }

    // Every position receives the same dL/dy_s.
    Vector g_y(d);
    for (std::size_t m = 0; m < d; ++m) {
        g_y[m] = sigma_tilde * head_w_[m] / static_cast<double>(S);
    }
    VectorSequence g_q(S, Vector(d, 0.0)), g_k(S, Vector(d, 0.0)), g_v(S, Vector(d, 0.0));
    for (std::size_t s = 0; s < S; ++s) {
        Vector g_a(S);
        double weighted = 0.0;
        for (std::size_t j = 0; j < S; ++j) {
            g_a[j] = dot(g_y, f.v[j]);
            weighted += f.attention[s * S + j] * g_a[j];
            for (std::size_t m = 0; m < d; ++m) {
                g_v[j][m] += f.attention[s * S + j] * g_y[m];
            }
        }
        for (std::size_t j = 0; j < S; ++j) {
            const double g_e = f.attention[s * S + j] * (g_a[j] - weighted);
            for (std::size_t m = 0; m < d; ++m) {
                g_q[s][m] += g_e * f.k[j][m];
                g_k[j][m] += g_e * f.q[s][m];
            }
        }
    }
    for (std::size_t s = 0; s < S; ++s) {
        add_outer(g_wq, g_q[s], f.x[s]);
        add_outer(g_wk, g_k[s], f.x[s]);
        add_outer(g_wv, g_v[s], f.x[s]);
        std::span<double> g_x = std::span<double>(g_emb).subspan(sample.tokens[s] * d, d);
        add_matvec_transposed(w_q_, g_q[s], g_x);
        add_matvec_transposed(w_k_, g_k[s], g_x);
        add_matvec_transposed(w_v_, g_v[s], g_x);
        for (std::size_t m = 0; m < d; ++m) {
            g_x[m] += reg.gamma / dd * f.x[s][m];
        }
    }
    return 0.5 * err * err + regularization_term(sample.tokens);
}

std::vector<ParameterBlock> CsannModel::parameters() {
    const std::size_t d = config_.dim;
    return {
        {"embeddings", {embeddings_.rows(), d}, embeddings_.data()},
        {"w_query", {d, d}, w_q_},
        {"w_key", {d, d}, w_k_},
        {"w_value", {d, d}, w_v_},
        {"head.w", {d}, head_w_},
        {"head.b", {1}, std::span<double>(&head_b_, 1)},
    };
}

void CsannModel::initialize(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    fill_gaussian(w_q_, kInitStd, rng);
    fill_gaussian(w_k_, kInitStd, rng);
    fill_gaussian(w_v_, kInitStd, rng);
    fill_gaussian(head_w_, kInitStd, rng);
    head_b_ = 0.0;
    fill_gaussian(embeddings_.data(), kInitStd, rng);
}

ParameterCount CsannModel::parameter_count() const {
    const std::size_t d = config_.dim;
    return {3 * d * d, d + 1, 3 * d * d + d + 1};
}

// ---------------------------------------------------------------------------
// Naive

NaiveModel::NaiveModel(BaselineConfig config, std::size_t vocab_size)
    : config_(config), head_w_(config.dim, 0.0), embeddings_(vocab_size, config.dim) {
    config_.validate();
}

Vector NaiveModel::mean_embedding(std::span<const TokenId> tokens) const {
    if (tokens.empty()) {
        throw EmptySequenceError("cannot classify an empty sequence");
    }
    Vector mean(config_.dim, 0.0);
    for (TokenId t : tokens) {
        const auto row = embeddings_.row(t);
        for (std::size_t m = 0; m < mean.size(); ++m) {
            mean[m] += row[m] / static_cast<double>(tokens.size());
        }
    }
    return mean;
}

double NaiveModel::regularization_term(std::span<const TokenId> tokens) const {
    const double d = static_cast<double>(config_.dim);
    const auto &reg = config_.regularization;
    return reg.lambda / (2.0 * d) * dot(head_w_, head_w_) +
           reg.gamma / (2.0 * d) * embedding_norm2(embeddings_, tokens);
}

Prediction NaiveModel::predict(std::span<const TokenId> tokens) const {
    const double y_hat = sigmoid(dot(head_w_, mean_embedding(tokens)) + head_b_);
    return {y_hat, decide(y_hat), {}};
}

double NaiveModel::sample_loss(const LabeledSequence &sample) const {
    const double err = predict(sample.tokens).y_hat - sample.label;
    return 0.5 * err * err + regularization_term(sample.tokens);
}

double NaiveModel::sample_gradient(const LabeledSequence &sample, GradientBlocks &grad) const {
    const auto mean = mean_embedding(sample.tokens);
    const double y_hat = sigmoid(dot(head_w_, mean) + head_b_);
    const double err = y_hat - sample.label;
    const double sigma_tilde = err * y_hat * (1.0 - y_hat);
    const std::size_t d = config_.dim;
    const double dd = static_cast<double>(d);
    const double S = static_cast<double>(sample.tokens.size());
    const auto &reg = config_.regularization;

    grad = zero_gradient();
    for (std::size_t m = 0; m < d; ++m) {
        grad[1][m] = sigma_tilde * mean[m] + reg.lambda / dd * head_w_[m];
    }
    grad[2][0] = sigma_tilde;
    for (TokenId t : sample.tokens) {
        const auto x = embeddings_.row(t);
        for (std::size_t m = 0; m < d; ++m) {
            grad[0][t * d + m] += sigma_tilde * head_w_[m] / S + reg.gamma / dd * x[m];
        }
    }
    return 0.5 * err * err + regularization_term(sample.tokens);
}

std::vector<ParameterBlock> NaiveModel::parameters() {
    return {
        {"embeddings", {embeddings_.rows(), config_.dim}, embeddings_.data()},
        {"head.w", {config_.dim}, head_w_},
        {"head.b", {1}, std::span<double>(&head_b_, 1)},
    };
}

void NaiveModel::initialize(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    fill_gaussian(head_w_, kInitStd, rng);
    head_b_ = 0.0;
    fill_gaussian(embeddings_.data(), kInitStd, rng);
}

ParameterCount NaiveModel::parameter_count() const {
    return {0, config_.dim + 1, config_.dim + 1};
}

} // namespace qsann
