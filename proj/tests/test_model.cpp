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
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gradcheck.hpp"
#include "oracle.hpp"
#include "qsann/errors.hpp"
#include "qsann/model.hpp"

using namespace qsann;

namespace {

LabeledSequence sample(std::vector<TokenId> tokens, int label) {
    std::vector<std::string> words(tokens.size(), "w");
    return LabeledSequence::make(std::move(tokens), std::move(words), label);
}

QsannConfig config(int n, int enc, int qkv, int layers = 1, double lambda = 0,
                   double gamma = 0) {
    QsannConfig c;
    c.n_qubits = n;
    c.enc_depth = enc;
    c.qkv_depth = qkv;
    c.layers = layers;
    c.regularization = {lambda, gamma};
    return c;
}

} // namespace

TEST(ParameterCount, PublishedConfigurations) {
    EXPECT_EQ(parameter_count(config(2, 1, 1)), (ParameterCount{18, 7, 25}));
    EXPECT_EQ(parameter_count(config(4, 1, 1)), (ParameterCount{36, 13, 49}));
    EXPECT_EQ(parameter_count(config(4, 4, 5)), (ParameterCount{84, 25, 109}));
    EXPECT_EQ(parameter_count(config(4, 1, 2)), (ParameterCount{48, 13, 61}));
    EXPECT_EQ(parameter_count(config(2, 1, 1, 3)), (ParameterCount{54, 7, 61}));
}

TEST(ParameterCount, MatchesParameterBlocks) {
    QsannModel model(config(4, 1, 2), 10);
    std::size_t non_embedding = 0;
    for (const auto &block : std::as_const(model).parameters()) {
        if (block.name != "embeddings") {
            non_embedding += block.values.size();
        }
    }
    EXPECT_EQ(non_embedding, model.parameter_count().total);
}

TEST(QsannConfig, Validation) {
    EXPECT_THROW(config(0, 1, 1).validate(), ConfigError);
    EXPECT_THROW(config(2, -1, 1).validate(), ConfigError);
    EXPECT_THROW(config(2, 1, 1, 0).validate(), ConfigError);
    EXPECT_THROW(config(2, 1, 1, 1, -0.1).validate(), ConfigError);
    EXPECT_THROW(QsannModel(config(2, 1, 1), 0), ConfigError);
}

TEST(Forward, ZeroHeadGivesOneHalf) {
    QsannModel model(config(2, 1, 1), 5);
    model.initialize(3);
    std::fill(model.head_w().begin(), model.head_w().end(), 0.0);
    model.set_head_b(0.0);
    for (const auto &tokens : {std::vector<TokenId>{1}, std::vector<TokenId>{1, 2, 3, 4}}) {
        const auto p = model.forward(tokens);
        EXPECT_DOUBLE_EQ(p.y_hat, 0.5);
        EXPECT_EQ(p.label, 1);
        EXPECT_EQ(p.attention.size(), 1u);
    }
}

TEST(Forward, EmptySequenceAndOutOfRangeToken) {
    QsannModel model(config(2, 1, 1), 5);
    EXPECT_THROW((void)model.forward(std::vector<TokenId>{}), EmptySequenceError);
    EXPECT_THROW((void)model.forward(std::vector<TokenId>{5}), IndexError);
}

TEST(Forward, MatchesDenseOracle) {
    std::mt19937_64 rng(31);
    QsannModel model(config(2, 1, 1, 1, 0.2, 0.4), 6);
    testing_support::randomize(model, rng, 1.5);
    const std::vector<TokenId> tokens{1, 4, 2};

    oracle::LayerReference ref;
    ref.observables.assign(model.observables().items().begin(), model.observables().items().end());
    ref.theta_q = model.layers()[0].theta_q;
    ref.theta_k = model.layers()[0].theta_k;
    ref.theta_v = model.layers()[0].theta_v;
    oracle::LayerReference::Seq xs;
    for (auto t : tokens) {
        const auto row = model.embeddings().row(t);
        xs.emplace_back(row.begin(), row.end());
    }
    const auto ys = ref.forward(xs);
    double z = model.head_b();
    for (std::size_t m = 0; m < 6; ++m) {
        double mean = 0;
        for (const auto &y : ys) {
            mean += y[m] / 3.0;
        }
        z += model.head_w()[m] * mean;
    }
    const double y_hat = 1 / (1 + std::exp(-z));
    EXPECT_NEAR(model.forward(tokens).y_hat, y_hat, 1e-12);

    double w2 = 0, x2 = 0;
    for (double w : model.head_w()) {
        w2 += w * w;
    }
    for (const auto &x : xs) {
        for (double v : x) {
            x2 += v * v;
        }
    }
    const double expected = 0.5 * (y_hat - 1) * (y_hat - 1) + 0.2 / 12 * w2 + 0.4 / 12 * x2;
    EXPECT_NEAR(model.sample_loss(sample(tokens, 1)), expected, 1e-12);
}

TEST(Forward, PermutationInvariant) {
    std::mt19937_64 rng(5);
    QsannModel model(config(3, 1, 1, 2), 8);
    testing_support::randomize(model, rng, 2.0);
    const double a = model.forward(std::vector<TokenId>{1, 2, 3, 7}).y_hat;
    const double b = model.forward(std::vector<TokenId>{7, 3, 1, 2}).y_hat;
    EXPECT_NEAR(a, b, 1e-12);
}

TEST(Forward, SingleTokenStackIsFiniteAndInsideUnitInterval) {
    std::mt19937_64 rng(6);
    QsannModel model(config(2, 1, 1, 3), 3);
    testing_support::randomize(model, rng, 3.0);
    for (std::size_t l = 1; l < 3; ++l) {
        model.layers()[l] = model.layers()[0];
    }
    const auto p = model.forward(std::vector<TokenId>{2});
    EXPECT_TRUE(std::isfinite(p.y_hat));
    EXPECT_GT(p.y_hat, 0.0);
    EXPECT_LT(p.y_hat, 1.0);
    EXPECT_EQ(p.attention.size(), 3u);
    EXPECT_DOUBLE_EQ(p.attention[2](0, 0), 1.0);
}

TEST(Loss, Examples) {
    QsannModel model(config(2, 1, 1), 4);
    const std::vector<LabeledSequence> one{sample({1, 2}, 1)};
    EXPECT_NEAR(loss(one, model), 0.125, 1e-15);
    EXPECT_THROW((void)loss(std::span<const LabeledSequence>{}, model), EmptySequenceError);

    // Saturated head: prediction equals the label, so the loss vanishes.
    model.set_head_b(60.0);
    EXPECT_NEAR(loss(one, model), 0.0, 1e-20);
}

TEST(Loss, BatchMeanAndNonNegative) {
    std::mt19937_64 rng(8);
    QsannModel model(config(2, 1, 1, 1, 0.3, 0.1), 6);
    testing_support::randomize(model, rng, 1.0);
    const std::vector<LabeledSequence> batch{sample({1, 2}, 1), sample({3}, 0),
                                             sample({4, 5, 1}, 0)};
    double sum = 0;
    for (const auto &s : batch) {
        sum += model.sample_loss(s);
        EXPECT_GE(model.sample_loss(s), 0.0);
    }
    EXPECT_NEAR(loss(batch, model), sum / 3, 1e-15);
}

TEST(Initialize, GaussianScaleAndZeroBias) {
    QsannModel model(config(4, 1, 1), 400);
    model.initialize(11);
    EXPECT_EQ(model.head_b(), 0.0);
    double sum = 0, sq = 0;
    const auto all = model.embeddings().data();
    for (double v : all) {
        sum += v;
        sq += v * v;
    }
    const double n = static_cast<double>(all.size());
    EXPECT_NEAR(sum / n, 0.0, 1e-3);
    EXPECT_NEAR(std::sqrt(sq / n), 0.01, 5e-4);

    QsannModel again(config(4, 1, 1), 400);
    again.initialize(11);
    EXPECT_EQ(again.layers()[0].theta_k, model.layers()[0].theta_k);
    EXPECT_EQ(again.head_w(), model.head_w());
}

TEST(Backward, PerfectPredictionLeavesOnlyEmbeddingRegularizer) {
    std::mt19937_64 rng(4);
    QsannModel model(config(2, 1, 1, 1, 0.0, 0.5), 4);
    testing_support::randomize(model, rng, 1.0);
    model.set_head_b(80.0);
    const auto g = model.backward(sample({1, 3}, 1));
    for (double v : g.d_w) {
        EXPECT_NEAR(v, 0.0, 1e-20);
    }
    EXPECT_NEAR(g.d_b, 0.0, 1e-20);
    for (const auto &layer : g.d_theta) {
        for (double v : layer.theta_q) {
            EXPECT_NEAR(v, 0.0, 1e-20);
        }
    }
    // Remaining embedding gradient is gamma/d * x for the used rows.
    for (TokenId t : {1u, 3u}) {
        for (std::size_t m = 0; m < 6; ++m) {
            EXPECT_NEAR(g.d_embeddings.row(t)[m], 0.5 / 6 * model.embeddings().row(t)[m], 1e-15);
        }
    }
    for (double v : g.d_embeddings.row(2)) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Backward, RepeatedTokensAccumulate) {
    std::mt19937_64 rng(19);
    QsannModel model(config(2, 1, 1, 1, 0.1, 0.1), 3);
    testing_support::randomize(model, rng, 1.0);
    testing_support::expect_gradient_matches(model, sample({1, 1, 2}, 0), 1e-5, 1e-5, 1e-3);
}

class ModelGradient : public ::testing::TestWithParam<int> {};

TEST_P(ModelGradient, MatchesFiniteDifferences) {
    const int trial = GetParam();
    std::mt19937_64 rng(500 + static_cast<std::uint64_t>(trial));
    const int n = 1 + trial % 3;
    const auto c = config(n, n == 1 ? 1 : 1 + (trial / 3) % 2, trial % 3, 1, 0.05 * (trial % 4),
                          0.05 * (trial % 5));
    QsannModel model(c, 5);
    testing_support::randomize(model, rng, 1.5);
    const std::size_t S = 1 + static_cast<std::size_t>(trial % 3);
    std::vector<TokenId> tokens;
    std::uniform_int_distribution<TokenId> pick(0, 4);
    for (std::size_t s = 0; s < S; ++s) {
        tokens.push_back(pick(rng));
    }
    const auto checked =
        testing_support::expect_gradient_matches(model, sample(tokens, trial % 2), 1e-5, 1e-5, 1e-3);
    EXPECT_EQ(checked, model.parameter_count().total + 5 * c.dim());
}

INSTANTIATE_TEST_SUITE_P(RandomInstances, ModelGradient, ::testing::Range(0, 24));

TEST(ModelGradient, StackedLayers) {
    std::mt19937_64 rng(90);
    QsannModel model(config(2, 1, 1, 2, 0.1, 0.2), 4);
    testing_support::randomize(model, rng, 1.5);
    testing_support::expect_gradient_matches(model, sample({0, 3, 2}, 1), 1e-5, 1e-5, 1e-3);
}

TEST(ModelGradient, UnderDepolarizingNoise) {
    std::mt19937_64 rng(91);
    SimulationOptions options;
    options.noise = NoiseModel{sim::NoiseKind::Depolarizing, 0.1};
    QsannModel model(config(2, 1, 1, 1, 0.1, 0.1), 4, options);
    testing_support::randomize(model, rng, 1.5);
    testing_support::expect_gradient_matches(model, sample({1, 2}, 0), 1e-5, 1e-5, 1e-3);
}
