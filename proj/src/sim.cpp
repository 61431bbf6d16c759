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
#include "qsann/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "qsann/errors.hpp"

namespace qsann::sim {
namespace {

using std::numbers::pi;

void check_qubit_count(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("qubit count must be in [1, " + std::to_string(kMaxQubits) +
                          "], got " + std::to_string(n_qubits));
    }
}

void check_gate_fits(const Gate &gate, int n_qubits) {
    if (gate.target() >= n_qubits ||
        (gate.control() && *gate.control() >= n_qubits)) {
        throw IndexError(std::string("gate ") + std::string(to_string(gate.kind())) +
                         " addresses a qubit outside a " + std::to_string(n_qubits) +
                         "-qubit register");
    }
}

void check_obs_fits(const PauliString &obs, int n_qubits) {
    if (obs.n_qubits() != n_qubits) {
        throw IndexError("observable " + obs.str() + " has " +
                         std::to_string(obs.n_qubits()) + " letters, state has " +
                         std::to_string(n_qubits) + " qubits");
    }
}

constexpr std::size_t qubit_mask(int n_qubits, int qubit) {
    return std::size_t{1} << (n_qubits - 1 - qubit);
}

Complex pauli_phase(const PauliString::Masks &m, std::size_t index) {
    static constexpr std::array<Complex, 4> kPowersOfI = {
        Complex{1, 0}, Complex{0, 1}, Complex{-1, 0}, Complex{0, -1}};
    Complex phase = kPowersOfI[static_cast<std::size_t>(m.y_count % 4)];
    if (std::popcount(index & m.sign) % 2 != 0) {
        phase = -phase;
    }
    return phase;
}

Matrix2 adjoint(const Matrix2 &u) {
    return {std::conj(u[0]), std::conj(u[2]), std::conj(u[1]), std::conj(u[3])};
}

} // namespace

bool is_rotation(GateKind kind) noexcept {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

std::string_view to_string(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::I: return "I";
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    }
    return "?";
}

double canonical_angle(double angle) noexcept {
    constexpr double two_pi = 2.0 * pi;
    double a = std::fmod(angle, two_pi);
    if (a < 0.0) {
        a += two_pi;
    }
    return a >= two_pi ? 0.0 : a;
}

Gate Gate::fixed(GateKind kind, int target) {
    if (is_rotation(kind) || kind == GateKind::CNOT) {
        throw ConfigError("Gate::fixed does not accept " + std::string(to_string(kind)));
    }
    if (target < 0) {
        throw IndexError("negative gate target");
    }
    return Gate(kind, target, std::nullopt, std::nullopt);
}

Gate Gate::rotation(GateKind kind, int target, double angle) {
    if (!is_rotation(kind)) {
        throw ConfigError("Gate::rotation needs RX, RY or RZ, got " +
                          std::string(to_string(kind)));
    }
    if (target < 0) {
        throw IndexError("negative gate target");
    }
    if (!std::isfinite(angle)) {
        throw ConfigError("rotation angle is not finite");
    }
    return Gate(kind, target, std::nullopt, canonical_angle(angle));
}

Gate Gate::cnot(int control, int target) {
    if (control < 0 || target < 0) {
        throw IndexError("negative CNOT qubit index");
    }
    if (control == target) {
        throw ConfigError("CNOT control and target coincide");
    }
    return Gate(GateKind::CNOT, target, control, std::nullopt);
}

Matrix2 Gate::matrix() const {
    constexpr Complex i{0.0, 1.0};
    const double r = 1.0 / std::numbers::sqrt2;
    switch (kind_) {
    case GateKind::I: return {1.0, 0.0, 0.0, 1.0};
    case GateKind::H: return {r, r, r, -r};
    case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y: return {0.0, -i, i, 0.0};
    case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
    case GateKind::RX: {
        const double c = std::cos(*angle_ / 2), s = std::sin(*angle_ / 2);
        return {c, -i * s, -i * s, c};
    }
    case GateKind::RY: {
        const double c = std::cos(*angle_ / 2), s = std::sin(*angle_ / 2);
        return {c, -s, s, c};
    }
    case GateKind::RZ: {
        const Complex e = std::polar(1.0, -*angle_ / 2);
        return {e, 0.0, 0.0, std::conj(e)};
    }
    case GateKind::CNOT: break;
    }
    throw ConfigError("CNOT has no single-qubit matrix");
}

PauliString::PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {
    check_qubit_count(static_cast<int>(letters_.size()));
}

PauliString PauliString::parse(std::string_view text) {
    std::vector<Pauli> letters;
    letters.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case 'I': letters.push_back(Pauli::I); break;
        case 'X': letters.push_back(Pauli::X); break;
        case 'Y': letters.push_back(Pauli::Y); break;
        case 'Z': letters.push_back(Pauli::Z); break;
        default:
            throw ConfigError("invalid Pauli letter '" + std::string(1, c) + "' in \"" +
                              std::string(text) + "\"");
        }
    }
    return PauliString(std::move(letters));
}

PauliString PauliString::identity(int n_qubits) {
    check_qubit_count(n_qubits);
    return PauliString(std::vector<Pauli>(static_cast<std::size_t>(n_qubits), Pauli::I));
}

PauliString PauliString::single(int n_qubits, int qubit, Pauli letter) {
    check_qubit_count(n_qubits);
    if (qubit < 0 || qubit >= n_qubits) {
        throw IndexError("Pauli qubit index " + std::to_string(qubit) + " out of range");
    }
    std::vector<Pauli> letters(static_cast<std::size_t>(n_qubits), Pauli::I);
    letters[static_cast<std::size_t>(qubit)] = letter;
    return PauliString(std::move(letters));
}

PauliString PauliString::pair(int n_qubits, int a, int b, Pauli letter) {
    if (a == b) {
        throw ConfigError("two-qubit Pauli needs distinct qubits");
    }
    auto p = single(n_qubits, a, letter);
    if (b < 0 || b >= n_qubits) {
        throw IndexError("Pauli qubit index " + std::to_string(b) + " out of range");
    }
    p.letters_[static_cast<std::size_t>(b)] = letter;
    return p;
}

bool PauliString::is_identity() const noexcept {
    return std::ranges::all_of(letters_, [](Pauli p) { return p == Pauli::I; });
}

std::string PauliString::str() const {
    std::string out;
    out.reserve(letters_.size());
    for (Pauli p : letters_) {
        out.push_back("IXYZ"[static_cast<int>(p)]);
    }
    return out;
}

PauliString::Masks PauliString::masks() const noexcept {
    Masks m;
    const int n = n_qubits();
    for (int q = 0; q < n; ++q) {
        const std::size_t bit = qubit_mask(n, q);
        switch (letters_[static_cast<std::size_t>(q)]) {
        case Pauli::I: break;
        case Pauli::X: m.flip |= bit; break;
        case Pauli::Y:
            m.flip |= bit;
            m.sign |= bit;
            ++m.y_count;
            break;
        case Pauli::Z: m.sign |= bit; break;
        }
    }
    return m;
}

std::string_view to_string(NoiseKind kind) noexcept {
    return kind == NoiseKind::Depolarizing ? "depolarizing" : "amplitude_damping";
}

NoiseKind parse_noise_kind(std::string_view text) {
    if (text == "depolarizing") {
        return NoiseKind::Depolarizing;
    }
    if (text == "amplitude_damping") {
        return NoiseKind::AmplitudeDamping;
    }
    throw ConfigError("unknown noise channel \"" + std::string(text) + "\"");
}

NoiseChannel::NoiseChannel(NoiseKind kind, double p, int target)
    : kind_(kind), p_(p), target_(target) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("noise level must lie in [0, 1], got " + std::to_string(p));
    }
    if (target < 0) {
        throw IndexError("negative noise target");
    }
}

std::vector<Matrix2> NoiseChannel::kraus_operators() const {
    if (kind_ == NoiseKind::Depolarizing) {
        const double a = std::sqrt(1.0 - p_);
        const double b = std::sqrt(p_ / 3.0);
        constexpr Complex i{0.0, 1.0};
        return {Matrix2{a, 0.0, 0.0, a}, Matrix2{0.0, b, b, 0.0},
                Matrix2{0.0, -i * b, i * b, 0.0}, Matrix2{b, 0.0, 0.0, -b}};
    }
    return {Matrix2{1.0, 0.0, 0.0, std::sqrt(1.0 - p_)},
            Matrix2{0.0, std::sqrt(p_), 0.0, 0.0}};
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw ConfigError("amplitude count must be a power of two >= 2");
    }
    n_qubits_ = std::countr_zero(dim);
    check_qubit_count(n_qubits_);
    amplitudes_ = std::move(amplitudes);
    if (std::abs(norm() - 1.0) > kNormTolerance) {
        throw ConfigError("state vector is not normalized");
    }
}

StateVector StateVector::zero(int n_qubits) {
    check_qubit_count(n_qubits);
    std::vector<Complex> amps(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps[0] = 1.0;
    return StateVector(n_qubits, std::move(amps));
}

double StateVector::norm() const noexcept {
    double sum = 0.0;
    for (const auto &a : amplitudes_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

void StateVector::apply(const Gate &gate) {
    check_gate_fits(gate, n_qubits_);
    const std::size_t dim = amplitudes_.size();
    const std::size_t tmask = qubit_mask(n_qubits_, gate.target());
    if (gate.kind() == GateKind::CNOT) {
        const std::size_t cmask = qubit_mask(n_qubits_, *gate.control());
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & cmask) != 0 && (i & tmask) == 0) {
                std::swap(amplitudes_[i], amplitudes_[i | tmask]);
            }
        }
        return;
    }
    if (gate.kind() == GateKind::I) {
        return;
    }
    const Matrix2 u = gate.matrix();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & tmask) != 0) {
            continue;
        }
        const Complex a = amplitudes_[i];
        const Complex b = amplitudes_[i | tmask];
        amplitudes_[i] = u[0] * a + u[1] * b;
        amplitudes_[i | tmask] = u[2] * a + u[3] * b;
    }
}

void StateVector::apply(std::span<const Gate> gates) {
    for (const auto &g : gates) {
        apply(g);
    }
}

double StateVector::expectation(const PauliString &obs) const {
    check_obs_fits(obs, n_qubits_);
    const auto m = obs.masks();
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        sum += std::conj(amplitudes_[i ^ m.flip]) * pauli_phase(m, i) * amplitudes_[i];
    }
    return std::clamp(sum.real(), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(int n_qubits, std::vector<Complex> entries) {
    check_qubit_count(n_qubits);
    n_qubits_ = n_qubits;
    dim_ = std::size_t{1} << n_qubits;
    if (entries.size() != dim_ * dim_) {
        throw ConfigError("density matrix needs " + std::to_string(dim_ * dim_) +
                          " entries, got " + std::to_string(entries.size()));
    }
    entries_ = std::move(entries);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            if (std::abs(entries_[r * dim_ + c] - std::conj(entries_[c * dim_ + r])) >
                kNormTolerance) {
                throw ConfigError("density matrix is not Hermitian");
            }
        }
    }
    if (std::abs(trace() - 1.0) > kNormTolerance) {
        throw ConfigError("density matrix trace differs from 1");
    }
}

DensityMatrix DensityMatrix::zero(int n_qubits) {
    return from_state(StateVector::zero(n_qubits));
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    check_qubit_count(n_qubits);
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<Complex> entries(dim * dim, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) {
        entries[i * dim + i] = 1.0 / static_cast<double>(dim);
    }
    return DensityMatrix(n_qubits, dim, std::move(entries));
}

DensityMatrix DensityMatrix::from_state(const StateVector &psi) {
    const std::size_t dim = psi.dim();
    const auto amps = psi.amplitudes();
    std::vector<Complex> entries(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            entries[r * dim + c] = amps[r] * std::conj(amps[c]);
        }
    }
    return DensityMatrix(psi.n_qubits(), dim, std::move(entries));
}

Complex DensityMatrix::trace() const noexcept {
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) {
        t += entries_[i * dim_ + i];
    }
    return t;
}

void DensityMatrix::apply_left(const Matrix2 &u, int qubit) {
    const std::size_t mask = qubit_mask(n_qubits_, qubit);
    for (std::size_t r = 0; r < dim_; ++r) {
        if ((r & mask) != 0) {
            continue;
        }
        Complex *row0 = &entries_[r * dim_];
        Complex *row1 = &entries_[(r | mask) * dim_];
        for (std::size_t c = 0; c < dim_; ++c) {
            const Complex a = row0[c];
            const Complex b = row1[c];
            row0[c] = u[0] * a + u[1] * b;
            row1[c] = u[2] * a + u[3] * b;
        }
    }
}

void DensityMatrix::apply_right_adjoint(const Matrix2 &u, int qubit) {
    const std::size_t mask = qubit_mask(n_qubits_, qubit);
    const Matrix2 ud = adjoint(u);
    for (std::size_t r = 0; r < dim_; ++r) {
        Complex *row = &entries_[r * dim_];
        for (std::size_t c = 0; c < dim_; ++c) {
            if ((c & mask) != 0) {
                continue;
            }
            const Complex a = row[c];
            const Complex b = row[c | mask];
            row[c] = a * ud[0] + b * ud[2];
            row[c | mask] = a * ud[1] + b * ud[3];
        }
    }
}

void DensityMatrix::apply_cnot(int control, int target) {
    const std::size_t cmask = qubit_mask(n_qubits_, control);
    const std::size_t tmask = qubit_mask(n_qubits_, target);
    auto partner = [&](std::size_t i) { return (i & cmask) != 0 ? i ^ tmask : i; };
    std::vector<Complex> out(entries_.size());
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out[partner(r) * dim_ + partner(c)] = entries_[r * dim_ + c];
        }
    }
    entries_ = std::move(out);
}

void DensityMatrix::apply(const Gate &gate) {
    check_gate_fits(gate, n_qubits_);
    if (gate.kind() == GateKind::CNOT) {
        apply_cnot(*gate.control(), gate.target());
        return;
    }
    if (gate.kind() == GateKind::I) {
        return;
    }
    const Matrix2 u = gate.matrix();
    apply_left(u, gate.target());
    apply_right_adjoint(u, gate.target());
}

void DensityMatrix::apply(std::span<const Gate> gates) {
    for (const auto &g : gates) {
        apply(g);
    }
}

void DensityMatrix::apply(const NoiseChannel &channel) {
    if (channel.target() >= n_qubits_) {
        throw IndexError("noise channel targets qubit " + std::to_string(channel.target()) +
                         " of a " + std::to_string(n_qubits_) + "-qubit register");
    }
    if (channel.p() == 0.0) {
        return;
    }
    std::vector<Complex> sum(entries_.size(), Complex{0.0, 0.0});
    for (const auto &e : channel.kraus_operators()) {
        DensityMatrix term(n_qubits_, dim_, entries_);
        term.apply_left(e, channel.target());
        term.apply_right_adjoint(e, channel.target());
        for (std::size_t k = 0; k < sum.size(); ++k) {
            sum[k] += term.entries_[k];
        }
    }
    entries_ = std::move(sum);
}

double DensityMatrix::expectation(const PauliString &obs) const {
    check_obs_fits(obs, n_qubits_);
    const auto m = obs.masks();
    Complex sum{0.0, 0.0};
    for (std::size_t k = 0; k < dim_; ++k) {
        sum += pauli_phase(m, k) * entries_[k * dim_ + (k ^ m.flip)];
    }
    return std::clamp(sum.real(), -1.0, 1.0);
}

// ---------------------------------------------------------------------------

StateVector init_zero_state(int n_qubits) { return StateVector::zero(n_qubits); }

StateVector apply_gate(StateVector state, const Gate &gate) {
    state.apply(gate);
    return state;
}

double expectation(const StateVector &state, const PauliString &obs) {
    return state.expectation(obs);
}

DensityMatrix apply_channel(DensityMatrix rho, const NoiseChannel &channel) {
    rho.apply(channel);
    return rho;
}

double expectation_dm(const DensityMatrix &rho, const PauliString &obs) {
    return rho.expectation(obs);
}

double sample_expectation(double exact, int shots, std::mt19937_64 &rng) {
    if (shots < 1) {
        throw ConfigError("shot count must be positive");
    }
    const double p_plus = std::clamp((1.0 + exact) / 2.0, 0.0, 1.0);
    std::binomial_distribution<int> dist(shots, p_plus);
    const int plus = dist(rng);
    return static_cast<double>(2 * plus - shots) / static_cast<double>(shots);
}

} // namespace qsann::sim
