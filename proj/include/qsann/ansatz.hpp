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

/// Strongly-entangling ansatz shared by the encoder and the query, key and
/// value circuits.
///
/// Layout for n qubits and depth D (n * (D + 2) angles):
///   RX(params[q])          on every qubit q
///   RY(params[n + q])      on every qubit q
///   D times:
///     CNOT(q -> q + 1 mod n) for q = 0 .. n - 1
///     RY(params[(2 + l) * n + q]) on every qubit q
/// A single-qubit register has no entangling ring.

#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "qsann/sim.hpp"

namespace qsann::ansatz {

struct AnsatzSpec {
    int n_qubits = 1;
    int depth = 0;

    [[nodiscard]] std::size_t param_count() const noexcept {
        return static_cast<std::size_t>(n_qubits) * static_cast<std::size_t>(depth + 2);
    }
    /// Throws ConfigError for n outside [1, kMaxQubits] or negative depth.
    void validate() const;

    friend bool operator==(const AnsatzSpec &, const AnsatzSpec &) = default;
};

using ParamVector = std::vector<double>;

[[nodiscard]] std::vector<sim::Gate> build_circuit(const AnsatzSpec &spec,
                                                   std::span<const double> params);

/// U_enc(x) H^n |0^n>.
[[nodiscard]] sim::StateVector encode_input(std::span<const double> x,
                                            const AnsatzSpec &spec);

/// Hadamard column followed by the ansatz, as a gate list.
[[nodiscard]] std::vector<sim::Gate> encoder_circuit(const AnsatzSpec &spec,
                                                     std::span<const double> x);

/// d<O>/d params[j] for U(params)|state>, by evaluating the circuit at
/// params[j] +- pi/2.
[[nodiscard]] double param_shift_grad(const sim::StateVector &state,
                                      const AnsatzSpec &spec,
                                      std::span<const double> params,
                                      const sim::PauliString &obs, std::size_t j);

/// Generic shift rule: `(f(params + e_j pi/2) - f(params - e_j pi/2)) / 2`.
/// `f` maps a parameter span to a value or to a vector of values.
template <class F>
auto shift_derivative(F &&f, std::span<const double> params, std::size_t j) {
    constexpr double kShift = 1.5707963267948966;
    std::vector<double> shifted(params.begin(), params.end());
    shifted[j] = params[j] + kShift;
    auto plus = f(std::span<const double>(shifted));
    shifted[j] = params[j] - kShift;
    auto minus = f(std::span<const double>(shifted));
    if constexpr (std::is_arithmetic_v<decltype(plus)>) {
        return (plus - minus) / 2.0;
    } else {
        for (std::size_t k = 0; k < plus.size(); ++k) {
            plus[k] = (plus[k] - minus[k]) / 2.0;
        }
        return plus;
    }
}

} // namespace qsann::ansatz
