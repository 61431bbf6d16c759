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
#include "qsann/qsal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "qsann/errors.hpp"

namespace qsann {

using sim::Pauli;
using sim::PauliString;

void LayerSpec::validate() const {
    encoder().validate();
    qkv().validate();
}

QsalLayerParams QsalLayerParams::zeros(const LayerSpec &spec) {
    const std::size_t p = spec.qkv().param_count();
    return {Vector(p, 0.0), Vector(p, 0.0), Vector(p, 0.0)};
}

void QsalLayerParams::validate(const LayerSpec &spec) const {
    const std::size_t p = spec.qkv().param_count();
    if (theta_q.size() != p || theta_k.size() != p || theta_v.size() != p) {
        throw ConfigError("query/key/value parameter vectors must each hold " +
                          std::to_string(p) + " angles");
    }
}

// ---------------------------------------------------------------------------

ObservableSet::ObservableSet(std::vector<PauliString> observables)
    : observables_(std::move(observables)) {
    if (observables_.empty()) {
        throw ConfigError("observable set is empty");
    }
    const int n = observables_.front().n_qubits();
    for (const auto &p : observables_) {
        if (p.n_qubits() != n) {
            throw ConfigError("observables act on different qubit counts");
        }
    }
}

ObservableSet ObservableSet::standard(int n_qubits, std::size_t d) {
    if (n_qubits < 1 || n_qubits > sim::kMaxQubits) {
        throw ConfigError("observable qubit count out of range");
    }
    if (d == 0) {
        throw ConfigError("observable count must be positive");
    }
    std::vector<PauliString> out;
    std::set<std::string> seen;
    const auto add = [&](PauliString p) {
        if (out.size() < d && seen.insert(p.str()).second) {
            out.push_back(std::move(p));
        }
    };
    constexpr std::array kLetters = {Pauli::Z, Pauli::X, Pauli::Y};
    for (Pauli letter : kLetters) {
        for (int q = 0; q < n_qubits; ++q) {
            add(PauliString::single(n_qubits, q, letter));
        }
    }
    if (n_qubits > 1) {
        for (Pauli letter : kLetters) {
            for (int q = 0; q < n_qubits; ++q) {
                add(PauliString::pair(n_qubits, q, (q + 1) % n_qubits, letter));
            }
        }
    }
    // Exhaustive fallback ordered by weight, then by letters in I<X<Y<Z order.
    if (out.size() < d) {
        const std::size_t total = std::size_t{1} << (2 * n_qubits);
        std::vector<std::pair<int, std::size_t>> codes;
        for (std::size_t code = 1; code < total; ++code) {
            int weight = 0;
            for (int q = 0; q < n_qubits; ++q) {
                weight += ((code >> (2 * (n_qubits - 1 - q))) & 3U) != 0 ? 1 : 0;
            }
            codes.emplace_back(weight, code);
        }
        std::ranges::sort(codes);
        for (const auto &[weight, code] : codes) {
            std::vector<Pauli> letters(static_cast<std::size_t>(n_qubits));
            for (int q = 0; q < n_qubits; ++q) {
                letters[static_cast<std::size_t>(q)] =
                    static_cast<Pauli>((code >> (2 * (n_qubits - 1 - q))) & 3U);
            }
            add(PauliString(std::move(letters)));
        }
    }
    if (out.size() < d) {
        throw ConfigError("cannot pick " + std::to_string(d) +
                          " distinct non-identity observables on " +
                          std::to_string(n_qubits) + " qubits");
    }
    return ObservableSet(std::move(out));
}

std::vector<std::string> ObservableSet::labels() const {
    std::vector<std::string> out;
    out.reserve(observables_.size());
    for (const auto &p : observables_) {
        out.push_back(p.str());
    }
    return out;
}

// ---------------------------------------------------------------------------

AttentionMatrix::AttentionMatrix(std::size_t size, std::vector<double> row_major)
    : size_(size), coefficients_(std::move(row_major)) {
    if (coefficients_.size() != size_ * size_) {
        throw ConfigError("attention matrix entry count does not match its size");
    }
}

Vector AttentionMatrix::column_means() const {
    Vector means(size_, 0.0);
    for (std::size_t s = 0; s < size_; ++s) {
        for (std::size_t j = 0; j < size_; ++j) {
            means[j] += (*this)(s, j);
        }
    }
    for (auto &m : means) {
        m /= static_cast<double>(size_);
    }
    return means;
}

AttentionMatrix gpqsa_coefficients(std::span<const double> zq, std::span<const double> zk) {
    if (zq.empty() || zk.empty()) {
        throw EmptySequenceError("attention over an empty sequence");
    }
    if (zq.size() != zk.size()) {
        throw ConfigError("query and key sequences differ in length");
    }
    const std::size_t S = zq.size();
    std::vector<double> a(S * S);
    for (std::size_t s = 0; s < S; ++s) {
        double sum = 0.0;
        for (std::size_t j = 0; j < S; ++j) {
            const double diff = zq[s] - zk[j];
            a[s * S + j] = std::exp(-diff * diff);
            sum += a[s * S + j];
        }
        for (std::size_t j = 0; j < S; ++j) {
            a[s * S + j] /= sum;
        }
    }
    return AttentionMatrix(S, std::move(a));
}

double gpqsa_key_derivative(const AttentionMatrix &attention, std::span<const double> zq,
                            std::span<const double> zk, std::size_t s, std::size_t j,
                            std::size_t i) {
    const double delta = i == j ? 1.0 : 0.0;
    return -attention(s, j) * (attention(s, i) - delta) * 2.0 * (zq[s] - zk[i]);
}

double gpqsa_query_derivative(const AttentionMatrix &attention, std::span<const double> zq,
                              std::span<const double> zk, std::size_t s, std::size_t j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < attention.size(); ++i) {
        sum += gpqsa_key_derivative(attention, zq, zk, s, j, i);
    }
    return -sum;
}

// ---------------------------------------------------------------------------

void SimulationOptions::validate() const {
    if (noise && !(noise->p >= 0.0 && noise->p <= 1.0)) {
        throw ConfigError("noise level must lie in [0, 1]");
    }
    if (shots < 0) {
        throw ConfigError("shot count must be non-negative");
    }
    if (attention == AttentionKind::InnerProduct && noise && noise->p > 0.0) {
        throw ConfigError("inner-product attention needs noiseless state vectors");
    }
}

CircuitBackend::CircuitBackend(SimulationOptions options)
    : options_(options), rng_(options.shot_seed) {
    options_.validate();
}

void CircuitBackend::apply_noise(sim::DensityMatrix &rho) const {
    for (int q = 0; q < rho.n_qubits(); ++q) {
        rho.apply(sim::NoiseChannel(options_.noise->kind, options_.noise->p, q));
    }
}

double CircuitBackend::finish(double exact) const {
    return options_.shots > 0 ? sim::sample_expectation(exact, options_.shots, rng_) : exact;
}

CircuitBackend::State CircuitBackend::encode(const ansatz::AnsatzSpec &spec,
                                             std::span<const double> x) const {
    const auto gates = ansatz::encoder_circuit(spec, x);
    if (!mixed()) {
        auto psi = sim::StateVector::zero(spec.n_qubits);
        psi.apply(gates);
        return psi;
    }
    auto rho = sim::DensityMatrix::zero(spec.n_qubits);
    rho.apply(gates);
    apply_noise(rho);
    return rho;
}

Vector CircuitBackend::measure(const State &state, const ansatz::AnsatzSpec &spec,
                               std::span<const double> theta,
                               std::span<const PauliString> observables) const {
    const auto gates = ansatz::build_circuit(spec, theta);
    Vector out;
    out.reserve(observables.size());
    std::visit(
        [&](const auto &input) {
            auto evolved = input;
            evolved.apply(gates);
            if constexpr (std::is_same_v<std::decay_t<decltype(input)>, sim::DensityMatrix>) {
                apply_noise(evolved);
            }
            for (const auto &obs : observables) {
                out.push_back(finish(evolved.expectation(obs)));
            }
        },
        state);
    return out;
}

double CircuitBackend::measure(const State &state, const ansatz::AnsatzSpec &spec,
                               std::span<const double> theta,
                               const PauliString &observable) const {
    return measure(state, spec, theta, std::span<const PauliString>(&observable, 1)).front();
}

// ---------------------------------------------------------------------------

VectorSequence InputGradientTerms::total() const {
    VectorSequence out = residual;
    for (std::size_t s = 0; s < out.size(); ++s) {
        for (std::size_t m = 0; m < out[s].size(); ++m) {
            out[s][m] += value[s][m] + query[s][m] + key[s][m];
        }
    }
    return out;
}

QuantumSelfAttentionLayer::QuantumSelfAttentionLayer(LayerSpec spec, ObservableSet observables,
                                                     SimulationOptions options)
    : spec_(spec), observables_(std::move(observables)), backend_(options),
      z1_(PauliString::single(spec.n_qubits, 0, Pauli::Z)) {
    spec_.validate();
    if (observables_.size() != spec_.dim()) {
        throw ConfigError("layer needs " + std::to_string(spec_.dim()) +
                          " value observables, got " + std::to_string(observables_.size()));
    }
    if (observables_[0].n_qubits() != spec_.n_qubits) {
        throw ConfigError("value observables act on the wrong number of qubits");
    }
}

void QuantumSelfAttentionLayer::check_inputs(const VectorSequence &inputs) const {
    if (inputs.empty()) {
        throw EmptySequenceError("quantum self-attention layer got an empty sequence");
    }
    for (const auto &x : inputs) {
        if (x.size() != spec_.dim()) {
            throw ConfigError("layer input has dimension " + std::to_string(x.size()) +
                              ", expected " + std::to_string(spec_.dim()));
        }
    }
}

Vector QuantumSelfAttentionLayer::values_for(const CircuitBackend::State &state,
                                             const QsalLayerParams &params) const {
    if (zero_values_) {
        return Vector(spec_.dim(), 0.0);
    }
    return backend_.measure(state, spec_.qkv(), params.theta_v, observables_.items());
}

std::pair<Vector, Vector>
QuantumSelfAttentionLayer::query_key_expectations(const VectorSequence &inputs,
                                                  const QsalLayerParams &params) const {
    check_inputs(inputs);
    params.validate(spec_);
    Vector zq, zk;
    zq.reserve(inputs.size());
    zk.reserve(inputs.size());
    for (const auto &x : inputs) {
        const auto state = backend_.encode(spec_.encoder(), x);
        zq.push_back(backend_.measure(state, spec_.qkv(), params.theta_q, z1_));
        zk.push_back(backend_.measure(state, spec_.qkv(), params.theta_k, z1_));
    }
    return {std::move(zq), std::move(zk)};
}

Vector QuantumSelfAttentionLayer::value_vector(std::span<const double> input,
                                               const QsalLayerParams &params) const {
    if (input.size() != spec_.dim()) {
        throw ConfigError("layer input has dimension " + std::to_string(input.size()) +
                          ", expected " + std::to_string(spec_.dim()));
    }
    params.validate(spec_);
    return values_for(backend_.encode(spec_.encoder(), input), params);
}

AttentionMatrix QuantumSelfAttentionLayer::inner_product_attention(
    const std::vector<CircuitBackend::State> &states, const QsalLayerParams &params) const {
    const std::size_t S = states.size();
    std::vector<sim::StateVector> queries, keys;
    for (const auto &state : states) {
        auto q = std::get<sim::StateVector>(state);
        q.apply(ansatz::build_circuit(spec_.qkv(), params.theta_q));
        queries.push_back(std::move(q));
        auto k = std::get<sim::StateVector>(state);
        k.apply(ansatz::build_circuit(spec_.qkv(), params.theta_k));
        keys.push_back(std::move(k));
    }
    std::vector<double> a(S * S);
    for (std::size_t s = 0; s < S; ++s) {
        double sum = 0.0;
        for (std::size_t j = 0; j < S; ++j) {
            sim::Complex overlap{0.0, 0.0};
            const auto qa = queries[s].amplitudes();
            const auto ka = keys[j].amplitudes();
            for (std::size_t i = 0; i < qa.size(); ++i) {
                overlap += std::conj(qa[i]) * ka[i];
            }
            a[s * S + j] = std::norm(overlap);
            sum += a[s * S + j];
        }
        for (std::size_t j = 0; j < S; ++j) {
            a[s * S + j] = sum > 0.0 ? a[s * S + j] / sum : 1.0 / static_cast<double>(S);
        }
    }
    return AttentionMatrix(S, std::move(a));
}

LayerCache QuantumSelfAttentionLayer::forward_cached(const VectorSequence &inputs,
                                                     const QsalLayerParams &params) const {
    check_inputs(inputs);
    params.validate(spec_);
    const std::size_t S = inputs.size();
    LayerCache cache;
    cache.inputs = inputs;
    cache.states.reserve(S);
    for (const auto &x : inputs) {
        const auto &state = cache.states.emplace_back(backend_.encode(spec_.encoder(), x));
        cache.zq.push_back(backend_.measure(state, spec_.qkv(), params.theta_q, z1_));
        cache.zk.push_back(backend_.measure(state, spec_.qkv(), params.theta_k, z1_));
        cache.values.push_back(values_for(state, params));
    }
    cache.attention = backend_.options().attention == AttentionKind::InnerProduct
                          ? inner_product_attention(cache.states, params)
                          : gpqsa_coefficients(cache.zq, cache.zk);
    cache.outputs = inputs;
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t j = 0; j < S; ++j) {
            const double a = cache.attention(s, j);
            for (std::size_t m = 0; m < spec_.dim(); ++m) {
                cache.outputs[s][m] += a * cache.values[j][m];
            }
        }
    }
    return cache;
}

LayerOutput QuantumSelfAttentionLayer::forward(const VectorSequence &inputs,
                                               const QsalLayerParams &params) const {
    auto cache = forward_cached(inputs, params);
    return {std::move(cache.outputs), std::move(cache.attention)};
}

LayerGradient QuantumSelfAttentionLayer::backward(const LayerCache &cache,
                                                  const QsalLayerParams &params,
                                                  const VectorSequence &grad_outputs) const {
    if (backend_.options().attention != AttentionKind::GaussianProjected) {
        throw ConfigError("analytic gradients exist only for Gaussian projected attention");
    }
    const std::size_t S = cache.inputs.size();
    const std::size_t d = spec_.dim();
    const std::size_t p = spec_.qkv().param_count();
    if (grad_outputs.size() != S) {
        throw ConfigError("output gradient length does not match the cached sequence");
    }
    const auto &att = cache.attention;

    // dL/do_j = sum_s a(s, j) dL/dy_s
    VectorSequence grad_values(S, Vector(d, 0.0));
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t j = 0; j < S; ++j) {
            for (std::size_t m = 0; m < d; ++m) {
                grad_values[j][m] += att(s, j) * grad_outputs[s][m];
            }
        }
    }
    // dL/da(s, j) = dL/dy_s . o_j
    std::vector<double> grad_att(S * S, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t j = 0; j < S; ++j) {
            grad_att[s * S + j] = std::inner_product(
                grad_outputs[s].begin(), grad_outputs[s].end(), cache.values[j].begin(), 0.0);
        }
    }
    Vector grad_zq(S, 0.0), grad_zk(S, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t j = 0; j < S; ++j) {
            const double g = grad_att[s * S + j];
            grad_zq[s] += g * gpqsa_query_derivative(att, cache.zq, cache.zk, s, j);
            for (std::size_t i = 0; i < S; ++i) {
                grad_zk[i] += g * gpqsa_key_derivative(att, cache.zq, cache.zk, s, j, i);
            }
        }
    }

    LayerGradient grad;
    grad.theta_q.assign(p, 0.0);
    grad.theta_k.assign(p, 0.0);
    grad.theta_v.assign(p, 0.0);
    grad.inputs.residual = grad_outputs;
    grad.inputs.value.assign(S, Vector(d, 0.0));
    grad.inputs.query.assign(S, Vector(d, 0.0));
    grad.inputs.key.assign(S, Vector(d, 0.0));

    const auto qkv = spec_.qkv();
    const auto dot = [](const Vector &a, const Vector &b) {
        return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
    };

    for (std::size_t s = 0; s < S; ++s) {
        const auto &state = cache.states[s];
        for (std::size_t j = 0; j < p; ++j) {
            grad.theta_q[j] += grad_zq[s] * ansatz::shift_derivative(
                                                [&](std::span<const double> t) {
                                                    return backend_.measure(state, qkv, t, z1_);
                                                },
                                                params.theta_q, j);
            grad.theta_k[j] += grad_zk[s] * ansatz::shift_derivative(
                                                [&](std::span<const double> t) {
                                                    return backend_.measure(state, qkv, t, z1_);
                                                },
                                                params.theta_k, j);
            if (!zero_values_) {
                const Vector dv = ansatz::shift_derivative(
                    [&](std::span<const double> t) {
                        return backend_.measure(state, qkv, t, observables_.items());
                    },
                    params.theta_v, j);
                grad.theta_v[j] += dot(grad_values[s], dv);
            }
        }
        // The layer input is the encoder angle list, so the same shift rule
        // differentiates every measurement with respect to it.
        for (std::size_t m = 0; m < d; ++m) {
            const auto shifted = [&](std::span<const double> x) {
                const auto st = backend_.encode(spec_.encoder(), x);
                Vector out{backend_.measure(st, qkv, params.theta_q, z1_),
                           backend_.measure(st, qkv, params.theta_k, z1_)};
                if (!zero_values_) {
                    const auto v = backend_.measure(st, qkv, params.theta_v, observables_.items());
                    out.insert(out.end(), v.begin(), v.end());
                }
                return out;
            };
            const Vector deriv = ansatz::shift_derivative(shifted, cache.inputs[s], m);
            grad.inputs.query[s][m] = grad_zq[s] * deriv[0];
            grad.inputs.key[s][m] = grad_zk[s] * deriv[1];
            if (!zero_values_) {
                double v = 0.0;
                for (std::size_t r = 0; r < d; ++r) {
                    v += grad_values[s][r] * deriv[2 + r];
                }
                grad.inputs.value[s][m] = v;
            }
        }
    }
    return grad;
}

} // namespace qsann
