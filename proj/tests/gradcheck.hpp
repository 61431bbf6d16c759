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

// Central finite-difference checks over every parameter block of a
// Classifier.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qsann/classifier.hpp"

namespace qsann::testing_support {

inline void randomize(Classifier &model, std::mt19937_64 &rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    for (auto &block : model.parameters()) {
        for (auto &v : block.values) {
            v = u(rng);
        }
    }
}

/// Compares `sample_gradient` against central differences of `sample_loss`
/// with step h; each component must agree within max(abs_tol, rel_tol |fd|).
/// Returns the number of components checked.
inline std::size_t expect_gradient_matches(Classifier &model, const LabeledSequence &sample,
                                           double h, double abs_tol, double rel_tol) {
    auto grad = model.zero_gradient();
    const double loss = model.sample_gradient(sample, grad);
    EXPECT_NEAR(loss, model.sample_loss(sample), 1e-12);
    std::size_t checked = 0;
    auto blocks = model.parameters();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        auto values = blocks[b].values;
        EXPECT_EQ(grad[b].size(), values.size()) << blocks[b].name;
        for (std::size_t k = 0; k < values.size(); ++k) {
            const double saved = values[k];
            values[k] = saved + h;
            const double plus = model.sample_loss(sample);
            values[k] = saved - h;
            const double minus = model.sample_loss(sample);
            values[k] = saved;
            const double fd = (plus - minus) / (2 * h);
            EXPECT_NEAR(grad[b][k], fd, std::max(abs_tol, rel_tol * std::abs(fd)))
                << blocks[b].name << "[" << k << "]";
            ++checked;
        }
    }
    return checked;
}

} // namespace qsann::testing_support
