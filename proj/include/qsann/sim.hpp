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

/// Exact state-vector and density-matrix simulation of small qubit registers.
///
/// Qubit ordering: qubit 0 is the most significant bit of an amplitude
/// index, so for n qubits basis index i has qubit q in bit (n - 1 - q).
/// `Z_1` in textbook notation is `PauliString::single(n, 0, Pauli::Z)`.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qsann::sim {

using Complex = std::complex<double>;

/// Row-major 2x2 matrix {m00, m01, m10, m11}.
using Matrix2 = std::array<Complex, 4>;

inline constexpr int kMaxQubits = 16;
inline constexpr double kNormTolerance = 1e-10;

enum class GateKind { I, H, X, Y, Z, RX, RY, RZ, CNOT };

[[nodiscard]] bool is_rotation(GateKind kind) noexcept;
[[nodiscard]] std::string_view to_string(GateKind kind) noexcept;

/// Returns `angle` wrapped into [0, 2pi).
[[nodiscard]] double canonical_angle(double angle) noexcept;

class Gate {
  public:
    /// Fixed single-qubit gate (H, X, Y, Z, I).
    static Gate fixed(GateKind kind, int target);
    /// RX, RY or RZ. The stored angle is canonicalized.
    static Gate rotation(GateKind kind, int target, double angle);
    static Gate cnot(int control, int target);

    [[nodiscard]] GateKind kind() const noexcept { return kind_; }
    [[nodiscard]] int target() const noexcept { return target_; }
    [[nodiscard]] std::optional<int> control() const noexcept { return control_; }
    [[nodiscard]] std::optional<double> angle() const noexcept { return angle_; }

    /// 2x2 matrix of a single-qubit gate; throws ConfigError for CNOT.
    [[nodiscard]] Matrix2 matrix() const;

  private:
    Gate(GateKind kind, int target, std::optional<int> control,
         std::optional<double> angle)
        : kind_(kind), target_(target), control_(control), angle_(angle) {}

    GateKind kind_;
    int target_;
    std::optional<int> control_;
    std::optional<double> angle_;
};

enum class Pauli : std::uint8_t { I, X, Y, Z };

class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::vector<Pauli> letters);

    /// Parses e.g. "ZIX". Throws ConfigError on other characters.
    static PauliString parse(std::string_view text);
    static PauliString identity(int n_qubits);
    /// `letter` on `qubit`, identity elsewhere.
    static PauliString single(int n_qubits, int qubit, Pauli letter);
    /// `letter` on both `a` and `b`.
    static PauliString pair(int n_qubits, int a, int b, Pauli letter);

    [[nodiscard]] int n_qubits() const noexcept {
        return static_cast<int>(letters_.size());
    }
    [[nodiscard]] std::span<const Pauli> letters() const noexcept { return letters_; }
    [[nodiscard]] bool is_identity() const noexcept;
    [[nodiscard]] std::string str() const;

    /// Bit masks over amplitude indices: X or Y letters flip, Z or Y letters
    /// contribute a sign. `y_count` is the number of Y letters.
    struct Masks {
        std::size_t flip = 0;
        std::size_t sign = 0;
        int y_count = 0;
    };
    [[nodiscard]] Masks masks() const noexcept;

    friend bool operator==(const PauliString &, const PauliString &) = default;

  private:
    std::vector<Pauli> letters_;
};

enum class NoiseKind { Depolarizing, AmplitudeDamping };

[[nodiscard]] std::string_view to_string(NoiseKind kind) noexcept;
/// Accepts "depolarizing" and "amplitude_damping".
[[nodiscard]] NoiseKind parse_noise_kind(std::string_view text);

/// Single-qubit channel. The noise level must lie in [0, 1].
class NoiseChannel {
  public:
    NoiseChannel(NoiseKind kind, double p, int target);

    [[nodiscard]] NoiseKind kind() const noexcept { return kind_; }
    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] int target() const noexcept { return target_; }

    /// Depolarizing: sqrt(1-p) I, sqrt(p/3) {X, Y, Z}.
    /// Amplitude damping: |0><0| + sqrt(1-p)|1><1|, sqrt(p)|0><1|.
    [[nodiscard]] std::vector<Matrix2> kraus_operators() const;

  private:
    NoiseKind kind_;
    double p_;
    int target_;
};

class StateVector {
  public:
    /// Validates length 2^n and unit norm.
    explicit StateVector(std::vector<Complex> amplitudes);

    /// |0...0> on `n_qubits` qubits, 1 <= n_qubits <= kMaxQubits.
    static StateVector zero(int n_qubits);

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] double norm() const noexcept;

    void apply(const Gate &gate);
    void apply(std::span<const Gate> gates);

    /// <psi|P|psi>, clamped to [-1, 1].
    [[nodiscard]] double expectation(const PauliString &obs) const;

  private:
    StateVector(int n_qubits, std::vector<Complex> amplitudes)
        : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

    int n_qubits_;
    std::vector<Complex> amplitudes_;
};

class DensityMatrix {
  public:
    /// Row-major 2^n x 2^n entries; validates shape, Hermiticity and trace.
    DensityMatrix(int n_qubits, std::vector<Complex> entries);

    static DensityMatrix zero(int n_qubits);
    static DensityMatrix maximally_mixed(int n_qubits);
    static DensityMatrix from_state(const StateVector &psi);

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] Complex operator()(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }
    [[nodiscard]] std::span<const Complex> entries() const noexcept { return entries_; }
    [[nodiscard]] Complex trace() const noexcept;

    void apply(const Gate &gate);
    void apply(std::span<const Gate> gates);
    void apply(const NoiseChannel &channel);

    /// Re Tr[P rho]. Imaginary part vanishes for Hermitian rho.
    [[nodiscard]] double expectation(const PauliString &obs) const;

  private:
    DensityMatrix(int n_qubits, std::size_t dim, std::vector<Complex> entries)
        : n_qubits_(n_qubits), dim_(dim), entries_(std::move(entries)) {}

    void apply_left(const Matrix2 &u, int qubit);
    void apply_right_adjoint(const Matrix2 &u, int qubit);
    void apply_cnot(int control, int target);

    int n_qubits_;
    std::size_t dim_;
    std::vector<Complex> entries_;
};

// Value-semantics wrappers matching the operation list of the simulator.
[[nodiscard]] StateVector init_zero_state(int n_qubits);
[[nodiscard]] StateVector apply_gate(StateVector state, const Gate &gate);
[[nodiscard]] double expectation(const StateVector &state, const PauliString &obs);
[[nodiscard]] DensityMatrix apply_channel(DensityMatrix rho, const NoiseChannel &channel);
[[nodiscard]] double expectation_dm(const DensityMatrix &rho, const PauliString &obs);

/// Estimate of a Pauli expectation from `shots` projective measurements.
/// Each shot yields +1 with probability (1 + exact) / 2.
[[nodiscard]] double sample_expectation(double exact, int shots, std::mt19937_64 &rng);

} // namespace qsann::sim
