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
#include "qsann/train.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace qsann {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning rate must be positive");
    }
    if (epochs < 1) {
        throw ConfigError("epoch count must be at least 1");
    }
    if (batch_size < 1) {
        throw ConfigError("batch size must be at least 1");
    }
    if (stop_window < 1) {
        throw ConfigError("stop window must be at least 1");
    }
    if (stop_tol < 0.0) {
        throw ConfigError("stop tolerance must be non-negative");
    }
}

AdamState AdamState::for_model(const Classifier &model) {
    AdamState s;
    s.first_moment = model.zero_gradient();
    s.second_moment = model.zero_gradient();
    return s;
}

void adam_step(Classifier &model, const GradientBlocks &grads, AdamState &state, double lr) {
    auto blocks = model.parameters();
    if (grads.size() != blocks.size() || state.first_moment.size() != blocks.size() ||
        state.second_moment.size() != blocks.size()) {
        throw ConfigError("gradient or optimizer state does not match the model layout");
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (grads[b].size() != blocks[b].values.size() ||
            state.first_moment[b].size() != grads[b].size() ||
            state.second_moment[b].size() != grads[b].size()) {
            throw ConfigError("gradient block \"" + blocks[b].name + "\" has the wrong size");
        }
        for (std::size_t i = 0; i < grads[b].size(); ++i) {
            if (!std::isfinite(grads[b][i])) {
                throw NumericError("non-finite gradient in \"" + blocks[b].name + "\" at " +
                                   std::to_string(i));
            }
        }
    }
    const double t = static_cast<double>(state.step + 1);
    const double c1 = 1.0 - std::pow(state.beta1, t);
    const double c2 = 1.0 - std::pow(state.beta2, t);
    auto first = state.first_moment;
    auto second = state.second_moment;
    GradientBlocks updated(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        auto &m = first[b];
        auto &v = second[b];
        updated[b].assign(blocks[b].values.begin(), blocks[b].values.end());
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double g = grads[b][i];
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
            updated[b][i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + state.epsilon);
            if (!std::isfinite(updated[b][i])) {
                throw NumericError("update made \"" + blocks[b].name + "\" non-finite at " +
                                   std::to_string(i));
            }
        }
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        std::ranges::copy(updated[b], blocks[b].values.begin());
    }
    state.first_moment = std::move(first);
    state.second_moment = std::move(second);
    ++state.step;
}

Evaluation evaluate(std::span<const LabeledSequence> samples, const Classifier &model) {
    if (samples.empty()) {
        throw EmptySequenceError("evaluation set is empty");
    }
    std::size_t correct = 0;
    double loss_sum = 0.0;
    for (const auto &s : samples) {
        loss_sum += model.sample_loss(s);
        correct += model.predict(s.tokens).label == s.label ? 1 : 0;
    }
    const double n = static_cast<double>(samples.size());
    return {static_cast<double>(correct) / n, loss_sum / n};
}

namespace {

bool loss_converged(const std::vector<EpochMetrics> &log, int window, double tol) {
    const auto n = static_cast<int>(log.size());
    if (n <= window) {
        return false;
    }
    double sum = 0.0;
    for (int e = n - window; e < n; ++e) {
        const double prev = log[static_cast<std::size_t>(e - 1)].train_loss;
        const double cur = log[static_cast<std::size_t>(e)].train_loss;
        sum += std::abs(cur - prev) / std::max(std::abs(prev), 1e-300);
    }
    return sum / window < tol;
}

} // namespace

TrainResult train(Classifier &model, const Dataset &data, const TrainConfig &config,
                  const EpochCallback &on_epoch) {
    config.validate();
    if (data.train.empty()) {
        throw EmptySequenceError("training split is empty");
    }
    if (config.dev_early_stopping && data.dev.empty()) {
        throw ConfigError("dev-set early stopping needs a dev split");
    }
    if (config.initialize) {
        model.initialize(config.seed);
    }

    const auto started = std::chrono::steady_clock::now();
    std::mt19937_64 order_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(data.train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    AdamState adam = AdamState::for_model(model);
    GradientBlocks sample_grad;
    GradientBlocks batch_grad = model.zero_gradient();
    std::shared_ptr<const Classifier> last_good = model.clone();
    std::shared_ptr<const Classifier> best_dev;
    double best_dev_loss = std::numeric_limits<double>::infinity();
    int epochs_since_best = 0;

    TrainResult result;
    const auto abort = [&](const std::string &why) {
        throw TrainingAborted(why, result, last_good);
    };

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        if (config.shuffle) {
            for (std::size_t i = order.size(); i > 1; --i) {
                std::uniform_int_distribution<std::size_t> pick(0, i - 1);
                std::swap(order[i - 1], order[pick(order_rng)]);
            }
        }
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            for (auto &block : batch_grad) {
                std::fill(block.begin(), block.end(), 0.0);
            }
            const double scale = 1.0 / static_cast<double>(stop - start);
            for (std::size_t k = start; k < stop; ++k) {
                const double sample_loss = model.sample_gradient(data.train[order[k]], sample_grad);
                if (!std::isfinite(sample_loss)) {
                    abort("non-finite loss in epoch " + std::to_string(epoch));
                }
                for (std::size_t b = 0; b < batch_grad.size(); ++b) {
                    for (std::size_t i = 0; i < batch_grad[b].size(); ++i) {
                        batch_grad[b][i] += scale * sample_grad[b][i];
                    }
                }
            }
            try {
                adam_step(model, batch_grad, adam, config.learning_rate);
            } catch (const NumericError &e) {
                abort(e.what());
            }
        }

        EpochMetrics m;
        m.epoch = epoch;
        const auto train_eval = evaluate(data.train, model);
        m.train_loss = train_eval.mean_loss;
        m.train_acc = train_eval.accuracy;
        if (!std::isfinite(m.train_loss)) {
            abort("non-finite training loss after epoch " + std::to_string(epoch));
        }
        if (!data.test.empty()) {
            m.test_acc = evaluate(data.test, model).accuracy;
        }
        if (!data.dev.empty()) {
            m.dev_loss = evaluate(data.dev, model).mean_loss;
        }
        if (config.record_wall_time) {
            m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                          started)
                                .count();
        }
        result.log.push_back(m);
        result.epochs_run = epoch;
        last_good = model.clone();
        if (on_epoch) {
            on_epoch(m);
        }

        if (config.dev_early_stopping) {
            if (*m.dev_loss < best_dev_loss) {
                best_dev_loss = *m.dev_loss;
                best_dev = last_good;
                epochs_since_best = 0;
            } else if (++epochs_since_best >= config.stop_window) {
                auto dst = model.parameters();
                const auto src = best_dev->parameters();
                for (std::size_t b = 0; b < dst.size(); ++b) {
                    std::copy(src[b].values.begin(), src[b].values.end(),
                              dst[b].values.begin());
                }
                result.stopped_on_dev = true;
                break;
            }
        }
        if (loss_converged(result.log, config.stop_window, config.stop_tol)) {
            result.converged = true;
            break;
        }
    }
    return result;
}

} // namespace qsann
