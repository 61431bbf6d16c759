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
#include "qsann/ansatz.hpp"

#include <string>

#include "qsann/errors.hpp"

namespace qsann::ansatz {

using sim::Gate;
using sim::GateKind;

void AnsatzSpec::validate() const {
    if (n_qubits < 1 || n_qubits > sim::kMaxQubits) {
        throw ConfigError("ansatz qubit count out of range: " + std::to_string(n_qubits));
    }
    if (depth < 0) {
        throw ConfigError("ansatz depth must be non-negative");
    }
}

std::vector<Gate> build_circuit(const AnsatzSpec &spec, std::span<const double> params) {
    spec.validate();
    if (params.size() != spec.param_count()) {
        throw ConfigError("ansatz with n=" + std::to_string(spec.n_qubits) +
                          ", D=" + std::to_string(spec.depth) + " takes " +
                          std::to_string(spec.param_count()) + " angles, got " +
                          std::to_string(params.size()));
    }
    const int n = spec.n_qubits;
    const auto at = [&](int column, int q) {
        return params[static_cast<std::size_t>(column * n + q)];
    };

    std::vector<Gate> gates;
    gates.reserve(spec.param_count() + static_cast<std::size_t>(spec.depth * n));
    for (int q = 0; q < n; ++q) {
        gates.push_back(Gate::rotation(GateKind::RX, q, at(0, q)));
    }
    for (int q = 0; q < n; ++q) {
        gates.push_back(Gate::rotation(GateKind::RY, q, at(1, q)));
    }
    for (int layer = 0; layer < spec.depth; ++layer) {
        if (n > 1) {
            for (int q = 0; q < n; ++q) {
                gates.push_back(Gate::cnot(q, (q + 1) % n));
            }
        }
        for (int q = 0; q < n; ++q) {
            gates.push_back(Gate::rotation(GateKind::RY, q, at(2 + layer, q)));
        }
    }
    return gates;
}

std::vector<Gate> encoder_circuit(const AnsatzSpec &spec, std::span<const double> x) {
    auto body = build_circuit(spec, x);
    std::vector<Gate> gates;
    gates.reserve(body.size() + static_cast<std::size_t>(spec.n_qubits));
    for (int q = 0; q < spec.n_qubits; ++q) {
        gates.push_back(Gate::fixed(GateKind::H, q));
    }
    gates.insert(gates.end(), body.begin(), body.end());
    return gates;
}

sim::StateVector encode_input(std::span<const double> x, const AnsatzSpec &spec) {
    const auto gates = encoder_circuit(spec, x);
    auto state = sim::StateVector::zero(spec.n_qubits);
    state.apply(gates);
    return state;
}

double param_shift_grad(const sim::StateVector &state, const AnsatzSpec &spec,
                        std::span<const double> params, const sim::PauliString &obs,
                        std::size_t j) {
    if (j >= params.size() || j >= spec.param_count()) {
        throw IndexError("parameter index " + std::to_string(j) + " out of range for " +
                         std::to_string(spec.param_count()) + " angles");
    }
    return shift_derivative(
        [&](std::span<const double> p) {
            auto psi = state;
            psi.apply(build_circuit(spec, p));
            return psi.expectation(obs);
        },
        params, j);
}

} // namespace qsann::ansatz
