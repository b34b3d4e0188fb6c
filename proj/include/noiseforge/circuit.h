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

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "noiseforge/gate.h"

namespace noiseforge {

struct Circuit {
    int qubit_count = 1;
    std::vector<Gate> gates;
    /// Free-form labels (seed, base id, variant id). Persisted as `# key value` comments.
    std::map<std::string, std::string> metadata;

    Circuit() = default;
    explicit Circuit(int n) : qubit_count(n) {}

    Circuit &add(const Gate &g) {
        gates.push_back(g);
        return *this;
    }

    /// Throws std::invalid_argument on a malformed gate or out-of-range qubit.
    void validate() const;

    /// Number of dependency layers (ASAP depth with unit-length gates).
    int depth() const;

    std::size_t count(GateKind kind) const;

    bool operator==(const Circuit &other) const = default;
};

/// c1 followed by c2. Qubit counts must match.
Circuit concat(const Circuit &c1, const Circuit &c2);

/// Reversed gate order with every gate replaced by its inverse.
Circuit inverse_circuit(const Circuit &c);

inline constexpr int kMaxUnitaryQubits = 10;

/// Applies a 2x2 matrix to qubit q of every column of `state` (rows = 2^n).
void apply_1q(Eigen::Ref<UnitaryMatrix> state, int n, int q, const Matrix2c &m);

/// Applies a 4x4 matrix to (q_hi, q_lo) of every column of `state`.
void apply_2q(Eigen::Ref<UnitaryMatrix> state, int n, int q_hi, int q_lo, const Matrix4c &m);

void apply_gate(Eigen::Ref<UnitaryMatrix> state, int n, const Gate &g);

/// Full 2^n x 2^n unitary. Throws std::length_error above kMaxUnitaryQubits.
UnitaryMatrix circuit_unitary(const Circuit &c);

/// Permutation unitary sending logical qubit i to wire perm[i].
UnitaryMatrix permutation_unitary(std::span<const int> perm);

// Text format:
//   qubits 5
//   # comment
//   u3 q0 1.5707963268 0.0 3.1415926536
//   cx q1 q2
//   sqrtw q3 !ins
/// Serializes with angles reduced to (-pi, pi] and printed with 17 significant
/// digits, which is enough for a bit-exact round trip of the reduced values.
std::string to_text(const Circuit &c);
Circuit parse_circuit(std::string_view text);
Circuit read_circuit_file(const std::string &path);
void write_circuit_file(const std::string &path, const Circuit &c);

/// OpenQASM 2.0 export. Only U1/U2/U3/CX are accepted.
std::string to_qasm2(const Circuit &c);

}  // namespace noiseforge
