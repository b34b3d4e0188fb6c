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

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "noiseforge/linalg.h"

namespace noiseforge {

enum class GateKind { U1, U2, U3, CX, SqrtX, SqrtW, SqrtZ, X, Y, SWAP };

/// Number of angle parameters a kind carries (U1:1, U2:2, U3:3, others:0).
int param_count(GateKind kind);

/// Number of qubits a kind acts on.
int qubit_arity(GateKind kind);

bool is_native(GateKind kind);

/// Lowercase mnemonic used by the circuit text format ("u3", "cx", "sqrtw").
std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);

/// A gate application.
///
/// Angles are stored in declaration order of the kind's own parameters:
///   U1: (lambda), U2: (phi, lambda), U3: (theta, phi, lambda).
/// Unused slots are zero. For CX the control is qubits[0].
struct Gate {
    GateKind kind = GateKind::U3;
    std::array<double, 3> params{0.0, 0.0, 0.0};
    std::array<int, 2> qubits{0, -1};
    bool inserted = false;

    static Gate u1(int q, double lambda);
    static Gate u2(int q, double phi, double lambda);
    static Gate u3(int q, double theta, double phi, double lambda);
    static Gate cx(int control, int target);
    static Gate swap(int a, int b);
    static Gate single(GateKind kind, int q);

    int arity() const { return qubit_arity(kind); }
    bool acts_on(int q) const { return qubits[0] == q || (arity() == 2 && qubits[1] == q); }

    /// Angles as a full U3 triple (theta, phi, lambda). Only valid for U1/U2/U3.
    std::array<double, 3> u3_angles() const;

    /// Throws std::invalid_argument if the gate is malformed for `qubit_count`.
    void validate(int qubit_count) const;

    bool operator==(const Gate &other) const = default;
};

/// Exactly cos(t/2), -e^{i l} sin(t/2); e^{i p} sin(t/2), e^{i(l+p)} cos(t/2).
Matrix2c u3_matrix(double theta, double phi, double lambda);

/// 2x2 or 4x4 matrix. Two-qubit matrices use qubits[0] as the high bit.
UnitaryMatrix gate_unitary(const Gate &g);

struct ZyzAngles {
    double theta = 0;
    double phi = 0;
    double lambda = 0;
    double global_phase = 0;
};

/// Finds angles with e^{i global_phase} U3(theta, phi, lambda) == u.
///
/// theta lies in [0, pi]; phi, lambda and the phase lie in (-pi, pi]. When
/// theta is 0 or pi the split of phi + lambda is degenerate and lambda is set
/// to 0. Throws std::invalid_argument for non-unitary input.
ZyzAngles zyz_decompose(const Matrix2c &u);

/// Inverse gate. Self-inverse kinds are returned as-is; U1 stays U1; U2 and
/// the fixed square roots become U3.
Gate inverse_gate(const Gate &g);

}  // namespace noiseforge
