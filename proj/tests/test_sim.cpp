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
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qsann/errors.hpp"
#include "qsann/sim.hpp"

using namespace qsann;
using namespace qsann::sim;

namespace {

void expect_amplitudes(const StateVector &psi, const std::vector<Complex> &ref,
                       double tol = 1e-12) {
    ASSERT_EQ(psi.dim(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        EXPECT_NEAR(psi.amplitudes()[i].real(), ref[i].real(), tol) << "i=" << i;
        EXPECT_NEAR(psi.amplitudes()[i].imag(), ref[i].imag(), tol) << "i=" << i;
    }
}

DensityMatrix dm_from(const oracle::CMatrix &m, int n) {
    std::vector<Complex> e;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            e.push_back(m(r, c));
        }
    }
    return DensityMatrix(n, std::move(e));
}

} // namespace

TEST(InitZeroState, OneAndTwoQubits) {
    expect_amplitudes(init_zero_state(1), {1, 0});
    expect_amplitudes(init_zero_state(2), {1, 0, 0, 0});
}

TEST(InitZeroState, RejectsOutOfRange) {
    EXPECT_THROW((void)init_zero_state(0), ConfigError);
    EXPECT_THROW((void)init_zero_state(kMaxQubits + 1), ConfigError);
}

TEST(ApplyGate, Examples) {
    const double r = 1 / std::sqrt(2.0);
    expect_amplitudes(apply_gate(init_zero_state(1), Gate::fixed(GateKind::H, 0)), {r, r});
    expect_amplitudes(apply_gate(init_zero_state(1),
                                 Gate::rotation(GateKind::RY, 0, std::numbers::pi / 2)),
                      {std::cos(std::numbers::pi / 4), std::sin(std::numbers::pi / 4)});
    // |10> has qubit 0 set, which is the most significant index bit.
    auto psi = apply_gate(init_zero_state(2), Gate::fixed(GateKind::X, 0));
    expect_amplitudes(psi, {0, 0, 1, 0});
    expect_amplitudes(apply_gate(psi, Gate::cnot(0, 1)), {0, 0, 0, 1});
}

TEST(ApplyGate, IndexErrors) {
    EXPECT_THROW((void)apply_gate(init_zero_state(2), Gate::fixed(GateKind::H, 2)), IndexError);
    EXPECT_THROW((void)apply_gate(init_zero_state(2), Gate::cnot(3, 0)), IndexError);
    EXPECT_THROW((void)Gate::cnot(1, 1), ConfigError);
    EXPECT_THROW((void)Gate::rotation(GateKind::H, 0, 1.0), ConfigError);
    EXPECT_THROW((void)Gate::fixed(GateKind::RX, 0), ConfigError);
}

TEST(Gate, FieldInvariants) {
    const auto rx = Gate::rotation(GateKind::RX, 1, -0.5);
    EXPECT_FALSE(rx.control().has_value());
    ASSERT_TRUE(rx.angle().has_value());
    EXPECT_NEAR(*rx.angle(), 2 * std::numbers::pi - 0.5, 1e-15);
    const auto cx = Gate::cnot(0, 1);
    EXPECT_EQ(cx.control(), 0);
    EXPECT_FALSE(cx.angle().has_value());
    EXPECT_FALSE(Gate::fixed(GateKind::H, 0).angle().has_value());
    EXPECT_DOUBLE_EQ(canonical_angle(2 * std::numbers::pi), 0.0);
    EXPECT_GE(canonical_angle(-1e-18), 0.0);
    EXPECT_LT(canonical_angle(-1e-18), 2 * std::numbers::pi);
}

TEST(Expectation, Examples) {
    const auto z = PauliString::parse("Z");
    EXPECT_DOUBLE_EQ(expectation(init_zero_state(1), z), 1.0);
    EXPECT_NEAR(expectation(apply_gate(init_zero_state(1), Gate::fixed(GateKind::H, 0)), z), 0.0,
                1e-15);

    // 2x2 oracle: RY(1)|0> = (cos 0.5, sin 0.5); <Z> = cos^2 - sin^2.
    const auto psi = apply_gate(init_zero_state(1), Gate::rotation(GateKind::RY, 0, 1.0));
    const oracle::CVector v = oracle::to_eigen(psi);
    const double via_matrix = (v.adjoint() * oracle::pauli_matrix(z) * v)(0).real();
    EXPECT_NEAR(expectation(psi, z), 0.540302, 1e-6);
    EXPECT_NEAR(expectation(psi, z), std::cos(1.0), 1e-12);
    EXPECT_NEAR(via_matrix, std::cos(1.0), 1e-12);
}

TEST(Expectation, DimensionMismatch) {
    EXPECT_THROW((void)expectation(init_zero_state(2), PauliString::parse("Z")), IndexError);
    EXPECT_THROW((void)PauliString::parse("ZQ"), ConfigError);
}

TEST(Expectation, AgreesWithDenseOperatorOnRandomStates) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 4;
        const auto psi = oracle::random_state(n, rng);
        const auto p = oracle::random_pauli(n, rng);
        const oracle::CVector v = oracle::to_eigen(psi);
        const Complex ref = (v.adjoint() * oracle::pauli_matrix(p) * v)(0);
        EXPECT_NEAR(psi.expectation(p), ref.real(), 1e-12) << p.str();
        EXPECT_NEAR(ref.imag(), 0.0, 1e-10);
    }
}

TEST(ApplyGate, MatchesKroneckerUnitariesAndPreservesNorm) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 3;
        std::vector<Gate> gates;
        for (int k = 0; k < 12; ++k) {
            gates.push_back(oracle::random_gate(n, rng));
        }
        auto psi = StateVector::zero(n);
        psi.apply(gates);
        const oracle::CVector ref = oracle::circuit_unitary(gates, n).col(0);
        for (std::size_t i = 0; i < psi.dim(); ++i) {
            EXPECT_NEAR(std::abs(psi.amplitudes()[i] - ref(static_cast<Eigen::Index>(i))), 0.0,
                        1e-10);
        }
        EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
    }
}

TEST(StateVector, RejectsInvalidAmplitudes) {
    EXPECT_THROW(StateVector({1, 0, 0}), ConfigError);
    EXPECT_THROW(StateVector({1, 1}), ConfigError);
    EXPECT_NO_THROW(StateVector({0, 1}));
}

// ---------------------------------------------------------------------------

TEST(NoiseChannel, KrausCompleteness) {
    for (auto kind : {NoiseKind::Depolarizing, NoiseKind::AmplitudeDamping}) {
        for (double p : {0.0, 0.01, 0.1, 0.2, 0.75, 1.0}) {
            oracle::CMatrix sum = oracle::CMatrix::Zero(2, 2);
            for (const auto &e : NoiseChannel(kind, p, 0).kraus_operators()) {
                const auto m = oracle::two_by_two(e[0], e[1], e[2], e[3]);
                sum += m.adjoint() * m;
            }
            EXPECT_LT((sum - oracle::identity2()).norm(), 1e-12);
        }
    }
}

TEST(ApplyChannel, DepolarizingScalesZ) {
    // Oracle: (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z) with dense matrices.
    const double p = 0.1;
    const auto rho = DensityMatrix::zero(1);
    const auto out = apply_channel(rho, NoiseChannel(NoiseKind::Depolarizing, p, 0));
    const oracle::CMatrix r = oracle::to_eigen(rho);
    const oracle::CMatrix X = oracle::pauli_matrix(PauliString::parse("X"));
    const oracle::CMatrix Y = oracle::pauli_matrix(PauliString::parse("Y"));
    const oracle::CMatrix Z = oracle::pauli_matrix(PauliString::parse("Z"));
    const oracle::CMatrix ref = (1 - p) * r + p / 3 * (X * r * X + Y * r * Y + Z * r * Z);
    EXPECT_LT((oracle::to_eigen(out) - ref).norm(), 1e-14);
    EXPECT_NEAR(expectation_dm(out, PauliString::parse("Z")), 0.866667, 1e-6);
    EXPECT_NEAR((Z * ref).trace().real(), 1 - 4 * p / 3, 1e-14);
}

TEST(ApplyChannel, AmplitudeDampingOnExcitedState) {
    const double p = 0.2;
    auto one = DensityMatrix::from_state(apply_gate(init_zero_state(1), Gate::fixed(GateKind::X, 0)));
    const auto out = apply_channel(one, NoiseChannel(NoiseKind::AmplitudeDamping, p, 0));
    const oracle::CMatrix e0 = oracle::two_by_two(1, 0, 0, std::sqrt(1 - p));
    const oracle::CMatrix e1 = oracle::two_by_two(0, std::sqrt(p), 0, 0);
    const oracle::CMatrix r = oracle::to_eigen(one);
    const oracle::CMatrix ref = e0 * r * e0.adjoint() + e1 * r * e1.adjoint();
    EXPECT_LT((oracle::to_eigen(out) - ref).norm(), 1e-14);
    EXPECT_NEAR(expectation_dm(out, PauliString::parse("Z")), -0.6, 1e-12);
}

TEST(ApplyChannel, ZeroNoiseIsIdentity) {
    std::mt19937_64 rng(3);
    const auto rho = DensityMatrix::from_state(oracle::random_state(2, rng));
    for (auto kind : {NoiseKind::Depolarizing, NoiseKind::AmplitudeDamping}) {
        const auto out = apply_channel(rho, NoiseChannel(kind, 0.0, 1));
        EXPECT_LT((oracle::to_eigen(out) - oracle::to_eigen(rho)).norm(), 1e-15);
    }
}

TEST(ApplyChannel, Errors) {
    EXPECT_THROW(NoiseChannel(NoiseKind::Depolarizing, -0.1, 0), ConfigError);
    EXPECT_THROW(NoiseChannel(NoiseKind::AmplitudeDamping, 1.5, 0), ConfigError);
    EXPECT_THROW((void)apply_channel(DensityMatrix::zero(1),
                                     NoiseChannel(NoiseKind::Depolarizing, 0.1, 1)),
                 IndexError);
}

TEST(ApplyChannel, PreservesTraceHermiticityAndPositivity) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> level(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 3;
        auto rho = DensityMatrix::from_state(oracle::random_state(n, rng));
        for (int q = 0; q < n; ++q) {
            const auto kind = trial % 2 == 0 ? NoiseKind::Depolarizing : NoiseKind::AmplitudeDamping;
            rho.apply(NoiseChannel(kind, level(rng), q));
            rho.apply(oracle::random_gate(n, rng));
        }
        const oracle::CMatrix m = oracle::to_eigen(rho);
        EXPECT_NEAR(std::abs(m.trace() - Complex{1.0, 0.0}), 0.0, 1e-10);
        EXPECT_LT((m - m.adjoint()).norm(), 1e-10);
        Eigen::SelfAdjointEigenSolver<oracle::CMatrix> eig(m);
        EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-8);
        // Re-validating through the checked constructor must succeed.
        EXPECT_NO_THROW(dm_from(m, n));
    }
}

TEST(ApplyChannel, DepolarizingThreeQuartersIsFullyMixing) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rho = DensityMatrix::from_state(oracle::random_state(1, rng));
        const auto out = apply_channel(rho, NoiseChannel(NoiseKind::Depolarizing, 0.75, 0));
        EXPECT_LT((oracle::to_eigen(out) - oracle::to_eigen(DensityMatrix::maximally_mixed(1))).norm(),
                  1e-10);
    }
}

TEST(ExpectationDm, Examples) {
    EXPECT_NEAR(expectation_dm(DensityMatrix::zero(1), PauliString::parse("Z")), 1.0, 1e-15);
    EXPECT_NEAR(expectation_dm(DensityMatrix::maximally_mixed(1), PauliString::parse("Z")), 0.0,
                1e-15);
    EXPECT_THROW((void)expectation_dm(DensityMatrix::zero(1), PauliString::parse("ZZ")),
                 IndexError);
}

TEST(ExpectationDm, PureStateAgreesWithStateVector) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 4;
        const auto psi = oracle::random_state(n, rng);
        const auto p = oracle::random_pauli(n, rng);
        EXPECT_NEAR(expectation_dm(DensityMatrix::from_state(psi), p), psi.expectation(p), 1e-10);
    }
}

TEST(DensityMatrix, NoiselessEvolutionMatchesOuterProduct) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 3;
        auto psi = StateVector::zero(n);
        auto rho = DensityMatrix::zero(n);
        for (int k = 0; k < 15; ++k) {
            const auto g = oracle::random_gate(n, rng);
            psi.apply(g);
            rho.apply(g);
        }
        const auto ref = DensityMatrix::from_state(psi);
        EXPECT_LT((oracle::to_eigen(rho) - oracle::to_eigen(ref)).norm(), 1e-10);
    }
}

TEST(DensityMatrix, RejectsInvalidEntries) {
    EXPECT_THROW(DensityMatrix(1, {1, 0, 0}), ConfigError);
    EXPECT_THROW(DensityMatrix(1, {1, 0, 0, 1}), ConfigError);            // trace 2
    EXPECT_THROW(DensityMatrix(1, {0.5, 0.3, 0.1, 0.5}), ConfigError);    // not Hermitian
    EXPECT_NO_THROW(DensityMatrix(1, {0.5, 0.0, 0.0, 0.5}));
}

TEST(SampleExpectation, ConvergesToExactValue) {
    std::mt19937_64 rng(1);
    EXPECT_DOUBLE_EQ(sample_expectation(1.0, 100, rng), 1.0);
    EXPECT_DOUBLE_EQ(sample_expectation(-1.0, 100, rng), -1.0);
    // Standard error at 10^6 shots is below 1e-3.
    EXPECT_NEAR(sample_expectation(0.3, 1'000'000, rng), 0.3, 5e-3);
    EXPECT_THROW((void)sample_expectation(0.0, 0, rng), ConfigError);
}
