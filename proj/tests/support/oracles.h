// Copyright 2026 The NoiseForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Reference implementations used only by tests. They deliberately avoid the
// library's own matrix helpers so that agreement is meaningful.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "noiseforge/circuit.h"
#include "noiseforge/rng.h"

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline Mat pauli_y() {
    Mat m(2, 2);
    m << 0, cd(0, -1), cd(0, 1), 0;
    return m;
}
inline Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

// e^{i(phi+lambda)/2} Rz(phi) Ry(theta) Rz(lambda).
inline Mat u3_euler(double theta, double phi, double lambda) {
    auto rz = [](double a) {
        Mat m = Mat::Zero(2, 2);
        m(0, 0) = std::exp(cd(0, -a / 2));
        m(1, 1) = std::exp(cd(0, a / 2));
        return m;
    };
    Mat ry(2, 2);
    ry << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
    return std::exp(cd(0, (phi + lambda) / 2)) * rz(phi) * ry * rz(lambda);
}

// Single-qubit operator on qubit q of n, qubit 0 leftmost in the Kronecker product.
inline Mat embed_1q(const Mat &u, int q, int n) {
    Mat out = Mat::Identity(1, 1);
    for (int k = 0; k < n; ++k) out = kron(out, k == q ? u : Mat::Identity(2, 2));
    return out;
}

// CX from projectors: |0><0|_c (x) I + |1><1|_c (x) X_t.
inline Mat cx_full(int c, int t, int n) {
    Mat p0 = Mat::Zero(2, 2);
    p0(0, 0) = 1;
    Mat p1 = Mat::Zero(2, 2);
    p1(1, 1) = 1;
    Mat a = Mat::Identity(1, 1);
    Mat b = Mat::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
        a = kron(a, k == c ? p0 : Mat::Identity(2, 2));
        b = kron(b, k == c ? p1 : (k == t ? pauli_x() : Mat::Identity(2, 2)));
    }
    return a + b;
}

inline Mat single_qubit_matrix(const noiseforge::Gate &g) {
    using noiseforge::GateKind;
    const double s = 1 / std::sqrt(2.0);
    switch (g.kind) {
        case GateKind::U1:
            return u3_euler(0, 0, g.params[0]);
        case GateKind::U2:
            return u3_euler(pi / 2, g.params[0], g.params[1]);
        case GateKind::U3:
            return u3_euler(g.params[0], g.params[1], g.params[2]);
        case GateKind::X:
            return pauli_x();
        case GateKind::Y:
            return pauli_y();
        case GateKind::SqrtX: {
            Mat m(2, 2);
            m << cd(0.5, 0.5), cd(0.5, -0.5), cd(0.5, -0.5), cd(0.5, 0.5);
            return m;
        }
        case GateKind::SqrtZ: {
            Mat m(2, 2);
            m << 1, 0, 0, cd(0, 1);
            return m;
        }
        case GateKind::SqrtW: {
            // W = (X + Y)/sqrt2 is an involution, so sqrt(W) = (1+i)/2 I + (1-i)/2 W.
            Mat w = s * (pauli_x() + pauli_y());
            return cd(0.5, 0.5) * Mat::Identity(2, 2) + cd(0.5, -0.5) * w;
        }
        default:
            break;
    }
    throw std::invalid_argument("not a single-qubit kind");
}

inline Mat gate_full(const noiseforge::Gate &g, int n) {
    using noiseforge::GateKind;
    if (g.kind == GateKind::CX) return cx_full(g.qubits[0], g.qubits[1], n);
    if (g.kind == GateKind::SWAP) {
        const int a = g.qubits[0];
        const int b = g.qubits[1];
        return cx_full(a, b, n) * cx_full(b, a, n) * cx_full(a, b, n);
    }
    return embed_1q(single_qubit_matrix(g), g.qubits[0], n);
}

inline Mat circuit_matrix(const noiseforge::Circuit &c) {
    const Eigen::Index d = Eigen::Index(1) << c.qubit_count;
    Mat u = Mat::Identity(d, d);
    for (const auto &g : c.gates) u = gate_full(g, c.qubit_count) * u;
    return u;
}

// Permutation matrix moving logical qubit i to wire perm[i].
inline Mat permutation_matrix(const std::vector<int> &perm) {
    const int n = static_cast<int>(perm.size());
    const Eigen::Index d = Eigen::Index(1) << n;
    Mat p = Mat::Zero(d, d);
    for (Eigen::Index x = 0; x < d; ++x) {
        Eigen::Index y = 0;
        for (int i = 0; i < n; ++i) {
            const auto bit = (x >> (n - 1 - i)) & 1;
            y |= bit << (n - 1 - perm[i]);
        }
        p(y, x) = 1;
    }
    return p;
}

// min over global phase of max |a - e^{i t} b|, with t from <b, a>.
inline double phase_distance(const Mat &a, const Mat &b) {
    const cd overlap = (b.adjoint() * a).trace();
    const cd phase = std::abs(overlap) > 1e-300 ? overlap / std::abs(overlap) : cd(1, 0);
    return (a - phase * b).cwiseAbs().maxCoeff();
}

inline double identity_distance(const Mat &u) {
    return phase_distance(u, Mat::Identity(u.rows(), u.cols()));
}

// Haar-random unitary via QR of a complex Gaussian matrix with phase correction.
inline Mat haar_unitary(int d, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat z(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) z(i, j) = cd(normal(rng), normal(rng));
    }
    Eigen::HouseholderQR<Mat> qr(z);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        const cd ph = r(i, i) / std::abs(r(i, i));
        q.col(i) *= ph;
    }
    return q;
}

}  // namespace oracle
