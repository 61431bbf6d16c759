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

// Dense-matrix reference implementations used only by tests. Everything here
// builds full 2^n x 2^n operators with Kronecker products, independently of
// the strided kernels in the library.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qsann/sim.hpp"

namespace qsann::oracle {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

inline CMatrix two_by_two(Complex a, Complex b, Complex c, Complex d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline CMatrix identity2() { return CMatrix::Identity(2, 2); }

/// Single-qubit matrix written from textbook definitions.
inline CMatrix textbook_matrix(sim::GateKind kind, double angle) {
    const Complex i{0, 1};
    const double r = 1 / std::sqrt(2.0);
    const CMatrix X = two_by_two(0, 1, 1, 0);
    const CMatrix Y = two_by_two(0, -i, i, 0);
    const CMatrix Z = two_by_two(1, 0, 0, -1);
    switch (kind) {
    case sim::GateKind::I: return identity2();
    case sim::GateKind::H: return two_by_two(r, r, r, -r);
    case sim::GateKind::X: return X;
    case sim::GateKind::Y: return Y;
    case sim::GateKind::Z: return Z;
    // R_P(t) = cos(t/2) I - i sin(t/2) P
    case sim::GateKind::RX: return std::cos(angle / 2) * identity2() - i * std::sin(angle / 2) * X;
    case sim::GateKind::RY: return std::cos(angle / 2) * identity2() - i * std::sin(angle / 2) * Y;
    case sim::GateKind::RZ: return std::cos(angle / 2) * identity2() - i * std::sin(angle / 2) * Z;
    case sim::GateKind::CNOT: break;
    }
    return identity2();
}

/// Kronecker product with `op` on `qubit` (qubit 0 leftmost).
inline CMatrix embed(const CMatrix &op, int qubit, int n) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
        out = kron(out, q == qubit ? op : identity2());
    }
    return out;
}

inline CMatrix full_unitary(const sim::Gate &g, int n) {
    if (g.kind() == sim::GateKind::CNOT) {
        const CMatrix p0 = two_by_two(1, 0, 0, 0);
        const CMatrix p1 = two_by_two(0, 0, 0, 1);
        const CMatrix X = two_by_two(0, 1, 1, 0);
        CMatrix a = CMatrix::Identity(1, 1), b = CMatrix::Identity(1, 1);
        for (int q = 0; q < n; ++q) {
            a = kron(a, q == *g.control() ? p0 : identity2());
            b = kron(b, q == *g.control() ? p1 : (q == g.target() ? X : identity2()));
        }
        return a + b;
    }
    return embed(textbook_matrix(g.kind(), g.angle().value_or(0.0)), g.target(), n);
}

inline CMatrix circuit_unitary(const std::vector<sim::Gate> &gates, int n) {
    CMatrix u = CMatrix::Identity(1 << n, 1 << n);
    for (const auto &g : gates) {
        u = full_unitary(g, n) * u;
    }
    return u;
}

inline CMatrix pauli_matrix(const sim::PauliString &p) {
    const Complex i{0, 1};
    CMatrix out = CMatrix::Identity(1, 1);
    for (auto letter : p.letters()) {
        switch (letter) {
        case sim::Pauli::I: out = kron(out, identity2()); break;
        case sim::Pauli::X: out = kron(out, two_by_two(0, 1, 1, 0)); break;
        case sim::Pauli::Y: out = kron(out, two_by_two(0, -i, i, 0)); break;
        case sim::Pauli::Z: out = kron(out, two_by_two(1, 0, 0, -1)); break;
        }
    }
    return out;
}

inline CVector to_eigen(const sim::StateVector &psi) {
    CVector v(static_cast<Eigen::Index>(psi.dim()));
    for (std::size_t k = 0; k < psi.dim(); ++k) {
        v(static_cast<Eigen::Index>(k)) = psi.amplitudes()[k];
    }
    return v;
}

inline CMatrix to_eigen(const sim::DensityMatrix &rho) {
    const auto d = static_cast<Eigen::Index>(rho.dim());
    CMatrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            m(r, c) = rho(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    return m;
}

inline sim::Gate random_gate(int n, std::mt19937_64 &rng) {
    using sim::GateKind;
    std::uniform_int_distribution<int> kind_pick(0, n > 1 ? 8 : 7);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    std::uniform_real_distribution<double> angle(-7.0, 7.0);
    static constexpr GateKind kinds[] = {GateKind::I,  GateKind::H,  GateKind::X,
                                         GateKind::Y,  GateKind::Z,  GateKind::RX,
                                         GateKind::RY, GateKind::RZ, GateKind::CNOT};
    const GateKind kind = kinds[kind_pick(rng)];
    if (kind == GateKind::CNOT) {
        const int c = qubit(rng);
        int t = qubit(rng);
        while (t == c) {
            t = qubit(rng);
        }
        return sim::Gate::cnot(c, t);
    }
    if (sim::is_rotation(kind)) {
        return sim::Gate::rotation(kind, qubit(rng), angle(rng));
    }
    return sim::Gate::fixed(kind, qubit(rng));
}

inline sim::PauliString random_pauli(int n, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> letter(0, 3);
    std::vector<sim::Pauli> letters(static_cast<std::size_t>(n));
    for (auto &l : letters) {
        l = static_cast<sim::Pauli>(letter(rng));
    }
    return sim::PauliString(std::move(letters));
}

inline sim::StateVector random_state(int n, std::mt19937_64 &rng) {
    auto psi = sim::StateVector::zero(n);
    for (int k = 0; k < 6 * n; ++k) {
        psi.apply(random_gate(n, rng));
    }
    return psi;
}

/// Hadamard column followed by the layered RX/RY/CNOT-ring circuit, built
/// gate by gate from textbook matrices.
inline CMatrix ansatz_unitary(int n, int depth, const std::vector<double> &angles,
                              bool hadamards) {
    using sim::GateKind;
    CMatrix u = CMatrix::Identity(1 << n, 1 << n);
    const auto column = [&](GateKind kind, std::size_t offset) {
        for (int q = 0; q < n; ++q) {
            u = embed(textbook_matrix(kind, angles[offset + static_cast<std::size_t>(q)]), q, n) * u;
        }
    };
    if (hadamards) {
        for (int q = 0; q < n; ++q) {
            u = embed(textbook_matrix(GateKind::H, 0.0), q, n) * u;
        }
    }
    column(GateKind::RX, 0);
    column(GateKind::RY, static_cast<std::size_t>(n));
    for (int l = 0; l < depth; ++l) {
        for (int q = 0; n > 1 && q < n; ++q) {
            u = full_unitary(sim::Gate::cnot(q, (q + 1) % n), n) * u;
        }
        column(GateKind::RY, static_cast<std::size_t>((2 + l) * n));
    }
    return u;
}

inline double expect(const CVector &psi, const sim::PauliString &p) {
    return (psi.adjoint() * pauli_matrix(p) * psi)(0).real();
}

/// Dense reference for one attention layer. The residual, query, key and
/// value paths may be fed different inputs so that each contribution to
/// the input gradient can be isolated by finite differences.
struct LayerReference {
    int n = 2;
    int enc_depth = 1;
    int qkv_depth = 1;
    std::vector<sim::PauliString> observables;
    std::vector<double> theta_q, theta_k, theta_v;

    [[nodiscard]] CVector encode(const std::vector<double> &x) const {
        return ansatz_unitary(n, enc_depth, x, true).col(0);
    }
    [[nodiscard]] double z1(const CVector &psi, const std::vector<double> &theta) const {
        const CVector out = ansatz_unitary(n, qkv_depth, theta, false) * psi;
        return expect(out, sim::PauliString::single(n, 0, sim::Pauli::Z));
    }

    using Seq = std::vector<std::vector<double>>;

    [[nodiscard]] std::vector<std::vector<double>> attention(const Seq &xq, const Seq &xk) const {
        const std::size_t S = xq.size();
        std::vector<double> zq(S), zk(S);
        for (std::size_t s = 0; s < S; ++s) {
            zq[s] = z1(encode(xq[s]), theta_q);
            zk[s] = z1(encode(xk[s]), theta_k);
        }
        std::vector<std::vector<double>> a(S, std::vector<double>(S));
        for (std::size_t s = 0; s < S; ++s) {
            double total = 0;
            for (std::size_t j = 0; j < S; ++j) {
                a[s][j] = std::exp(-(zq[s] - zk[j]) * (zq[s] - zk[j]));
                total += a[s][j];
            }
            for (auto &v : a[s]) {
                v /= total;
            }
        }
        return a;
    }

    [[nodiscard]] std::vector<double> values(const std::vector<double> &x) const {
        const CVector out = ansatz_unitary(n, qkv_depth, theta_v, false) * encode(x);
        std::vector<double> o;
        for (const auto &p : observables) {
            o.push_back(expect(out, p));
        }
        return o;
    }

    [[nodiscard]] Seq forward(const Seq &xr, const Seq &xq, const Seq &xk, const Seq &xv) const {
        const auto a = attention(xq, xk);
        Seq y = xr;
        for (std::size_t j = 0; j < xv.size(); ++j) {
            const auto o = values(xv[j]);
            for (std::size_t s = 0; s < y.size(); ++s) {
                for (std::size_t m = 0; m < o.size(); ++m) {
                    y[s][m] += a[s][j] * o[m];
                }
            }
        }
        return y;
    }
    [[nodiscard]] Seq forward(const Seq &x) const { return forward(x, x, x, x); }
};

} // namespace qsann::oracle
