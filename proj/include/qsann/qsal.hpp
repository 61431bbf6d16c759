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

/// Quantum self-attention layer.
///
/// Every input vector x_s (length d = n (D_enc + 2)) is used as the angle
/// list of the encoder ansatz. The encoded state is then measured through
/// three trainable circuits:
///   query  <Z_1> after U_q(theta_q)
///   key    <Z_1> after U_k(theta_k)
///   value  d Pauli expectations after U_v(theta_v)
/// Attention weights are Gaussian in the query/key difference and
/// row-normalized; the output adds the weighted values to the input.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qsann/ansatz.hpp"
#include "qsann/sim.hpp"

namespace qsann {

using Vector = std::vector<double>;
/// S vectors of equal length, one per sequence position.
using VectorSequence = std::vector<Vector>;

struct LayerSpec {
    int n_qubits = 2;
    int enc_depth = 1;
    int qkv_depth = 1;

    /// Feature dimension d = n (D_enc + 2).
    [[nodiscard]] std::size_t dim() const noexcept { return encoder().param_count(); }
    [[nodiscard]] ansatz::AnsatzSpec encoder() const noexcept {
        return {n_qubits, enc_depth};
    }
    [[nodiscard]] ansatz::AnsatzSpec qkv() const noexcept { return {n_qubits, qkv_depth}; }
    void validate() const;

    friend bool operator==(const LayerSpec &, const LayerSpec &) = default;
};

struct QsalLayerParams {
    ansatz::ParamVector theta_q;
    ansatz::ParamVector theta_k;
    ansatz::ParamVector theta_v;

    static QsalLayerParams zeros(const LayerSpec &spec);
    /// All three vectors must hold n (D_qkv + 2) angles.
    void validate(const LayerSpec &spec) const;
};

/// Ordered value observables P_1 .. P_d.
class ObservableSet {
  public:
    explicit ObservableSet(std::vector<sim::PauliString> observables);

    /// Z_1..Z_n, X_1..X_n, Y_1..Y_n, then cyclic neighbour pairs Z_iZ_{i+1},
    /// X_iX_{i+1}, Y_iY_{i+1}, then the remaining Pauli strings by weight.
    /// Throws ConfigError when d exceeds 4^n - 1.
    static ObservableSet standard(int n_qubits, std::size_t d);

    [[nodiscard]] std::size_t size() const noexcept { return observables_.size(); }
    [[nodiscard]] std::span<const sim::PauliString> items() const noexcept {
        return observables_;
    }
    [[nodiscard]] const sim::PauliString &operator[](std::size_t i) const {
        return observables_[i];
    }
    [[nodiscard]] std::vector<std::string> labels() const;

  private:
    std::vector<sim::PauliString> observables_;
};

/// Row-stochastic S x S matrix of normalized attention weights.
class AttentionMatrix {
  public:
    AttentionMatrix() = default;
    AttentionMatrix(std::size_t size, std::vector<double> row_major);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] double operator()(std::size_t s, std::size_t j) const {
        return coefficients_[s * size_ + j];
    }
    [[nodiscard]] std::span<const double> row(std::size_t s) const {
        return std::span<const double>(coefficients_).subspan(s * size_, size_);
    }
    /// (1/S) sum_s a(s, j) for every column j.
    [[nodiscard]] Vector column_means() const;

  private:
    std::size_t size_ = 0;
    std::vector<double> coefficients_;
};

/// a(s, j) = exp(-(zq_s - zk_j)^2) / sum_m exp(-(zq_s - zk_m)^2).
[[nodiscard]] AttentionMatrix gpqsa_coefficients(std::span<const double> zq,
                                                 std::span<const double> zk);

/// d a(s, j) / d zk_i = -a(s, j) (a(s, i) - delta_ij) 2 (zq_s - zk_i).
[[nodiscard]] double gpqsa_key_derivative(const AttentionMatrix &attention,
                                          std::span<const double> zq,
                                          std::span<const double> zk, std::size_t s,
                                          std::size_t j, std::size_t i);

/// d a(s, j) / d zq_s, which equals minus the sum over i of the key derivatives.
[[nodiscard]] double gpqsa_query_derivative(const AttentionMatrix &attention,
                                            std::span<const double> zq,
                                            std::span<const double> zk, std::size_t s,
                                            std::size_t j);

enum class AttentionKind {
    GaussianProjected,
    /// |<psi_s|U_q^dag U_k|psi_j>|^2, row-normalized. Forward only, noiseless only.
    InnerProduct,
};

struct NoiseModel {
    sim::NoiseKind kind = sim::NoiseKind::Depolarizing;
    double p = 0.0;
};

struct SimulationOptions {
    /// Single-qubit channel on every qubit after the last layer of each circuit.
    std::optional<NoiseModel> noise;
    /// 0 means exact expectations; otherwise each expectation is estimated
    /// from this many shots.
    int shots = 0;
    std::uint64_t shot_seed = 0;
    AttentionKind attention = AttentionKind::GaussianProjected;

    void validate() const;
};

/// Runs encoder and measurement circuits either on state vectors or, when a
/// noise model with p > 0 is set, on density matrices.
class CircuitBackend {
  public:
    using State = std::variant<sim::StateVector, sim::DensityMatrix>;

    explicit CircuitBackend(SimulationOptions options = {});

    [[nodiscard]] const SimulationOptions &options() const noexcept { return options_; }
    [[nodiscard]] bool mixed() const noexcept {
        return options_.noise.has_value() && options_.noise->p > 0.0;
    }

    [[nodiscard]] State encode(const ansatz::AnsatzSpec &spec,
                               std::span<const double> x) const;

    /// Expectations of `observables` after applying the ansatz to `state`.
    [[nodiscard]] Vector measure(const State &state, const ansatz::AnsatzSpec &spec,
                                 std::span<const double> theta,
                                 std::span<const sim::PauliString> observables) const;

    [[nodiscard]] double measure(const State &state, const ansatz::AnsatzSpec &spec,
                                 std::span<const double> theta,
                                 const sim::PauliString &observable) const;

  private:
    void apply_noise(sim::DensityMatrix &rho) const;
    double finish(double exact) const;

    SimulationOptions options_;
    // Only used when shots > 0; makes shot-sampled runs single-threaded.
    mutable std::mt19937_64 rng_;
};

struct LayerOutput {
    VectorSequence outputs;
    AttentionMatrix attention;
};

/// Forward intermediates needed by the backward pass.
struct LayerCache {
    VectorSequence inputs;
    std::vector<CircuitBackend::State> states;
    Vector zq;
    Vector zk;
    VectorSequence values;
    AttentionMatrix attention;
    VectorSequence outputs;
};

/// dL/dx_i split into its residual, value, query and key contributions.
struct InputGradientTerms {
    VectorSequence residual;
    VectorSequence value;
    VectorSequence query;
    VectorSequence key;

    [[nodiscard]] VectorSequence total() const;
};

struct LayerGradient {
    ansatz::ParamVector theta_q;
    ansatz::ParamVector theta_k;
    ansatz::ParamVector theta_v;
    InputGradientTerms inputs;
};

class QuantumSelfAttentionLayer {
  public:
    QuantumSelfAttentionLayer(LayerSpec spec, ObservableSet observables,
                              SimulationOptions options = {});

    [[nodiscard]] const LayerSpec &spec() const noexcept { return spec_; }
    [[nodiscard]] const ObservableSet &observables() const noexcept { return observables_; }
    [[nodiscard]] const CircuitBackend &backend() const noexcept { return backend_; }

    /// (<Z_q>_s, <Z_k>_s) for every position s.
    [[nodiscard]] std::pair<Vector, Vector>
    query_key_expectations(const VectorSequence &inputs, const QsalLayerParams &params) const;

    /// o_s[j] = <P_j> after U_v.
    [[nodiscard]] Vector value_vector(std::span<const double> input,
                                      const QsalLayerParams &params) const;

    /// y_s = x_s + sum_j a(s, j) o_j.
    [[nodiscard]] LayerOutput forward(const VectorSequence &inputs,
                                      const QsalLayerParams &params) const;

    [[nodiscard]] LayerCache forward_cached(const VectorSequence &inputs,
                                            const QsalLayerParams &params) const;

    /// Gradients of a scalar loss given dL/dy_s. Quantum derivatives use
    /// the parameter-shift rule on the trainable angles and on the encoder
    /// angles (the layer inputs).
    [[nodiscard]] LayerGradient backward(const LayerCache &cache,
                                         const QsalLayerParams &params,
                                         const VectorSequence &grad_outputs) const;

    /// Test hook: replace every value observable by the zero operator.
    void set_zero_value_observables(bool enabled) noexcept { zero_values_ = enabled; }

  private:
    void check_inputs(const VectorSequence &inputs) const;
    Vector values_for(const CircuitBackend::State &state, const QsalLayerParams &params) const;
    AttentionMatrix inner_product_attention(const std::vector<CircuitBackend::State> &states,
                                            const QsalLayerParams &params) const;

    LayerSpec spec_;
    ObservableSet observables_;
    CircuitBackend backend_;
    sim::PauliString z1_;
    bool zero_values_ = false;
};

} // namespace qsann
