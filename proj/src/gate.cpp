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

#include "noiseforge/gate.h"

#include <cmath>
#include <stdexcept>

namespace noiseforge {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 10> kNames{{
    {GateKind::U1, "u1"},
    {GateKind::U2, "u2"},
    {GateKind::U3, "u3"},
    {GateKind::CX, "cx"},
    {GateKind::SqrtX, "sqrtx"},
    {GateKind::SqrtW, "sqrtw"},
    {GateKind::SqrtZ, "sqrtz"},
    {GateKind::X, "x"},
    {GateKind::Y, "y"},
    {GateKind::SWAP, "swap"},
}};

// Principal square root of an involution P: (I + P)/2 + i (I - P)/2.
Matrix2c principal_root(const Matrix2c &p) {
    const complex_t i{0.0, 1.0};
    Matrix2c id = Matrix2c::Identity();
    return 0.5 * (id + p) + i * 0.5 * (id - p);
}

Matrix2c pauli_x() {
    Matrix2c m;
    m << 0, 1, 1, 0;
    return m;
}

Matrix2c pauli_y() {
    const complex_t i{0.0, 1.0};
    Matrix2c m;
    m << 0, -i, i, 0;
    return m;
}

Matrix2c pauli_z() {
    Matrix2c m;
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace

int param_count(GateKind kind) {
    switch (kind) {
        case GateKind::U1:
            return 1;
        case GateKind::U2:
            return 2;
        case GateKind::U3:
            return 3;
        default:
            return 0;
    }
}

int qubit_arity(GateKind kind) {
    return (kind == GateKind::CX || kind == GateKind::SWAP) ? 2 : 1;
}

bool is_native(GateKind kind) {
    return kind == GateKind::U1 || kind == GateKind::U2 || kind == GateKind::U3 || kind == GateKind::CX;
}

std::string_view gate_name(GateKind kind) {
    for (const auto &[k, name] : kNames) {
        if (k == kind) {
            return name;
        }
    }
    return "?";
}

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    for (const auto &[k, n] : kNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

Gate Gate::u1(int q, double lambda) {
    return Gate{GateKind::U1, {lambda, 0.0, 0.0}, {q, -1}, false};
}

Gate Gate::u2(int q, double phi, double lambda) {
    return Gate{GateKind::U2, {phi, lambda, 0.0}, {q, -1}, false};
}

Gate Gate::u3(int q, double theta, double phi, double lambda) {
    return Gate{GateKind::U3, {theta, phi, lambda}, {q, -1}, false};
}

Gate Gate::cx(int control, int target) {
    return Gate{GateKind::CX, {0.0, 0.0, 0.0}, {control, target}, false};
}

Gate Gate::swap(int a, int b) {
    return Gate{GateKind::SWAP, {0.0, 0.0, 0.0}, {a, b}, false};
}

Gate Gate::single(GateKind kind, int q) {
    if (qubit_arity(kind) != 1 || param_count(kind) != 0) {
        throw std::invalid_argument("Gate::single needs a fixed single-qubit kind, got " + std::string(gate_name(kind)));
    }
    return Gate{kind, {0.0, 0.0, 0.0}, {q, -1}, false};
}

std::array<double, 3> Gate::u3_angles() const {
    switch (kind) {
        case GateKind::U1:
            return {0.0, 0.0, params[0]};
        case GateKind::U2:
            return {kPi / 2, params[0], params[1]};
        case GateKind::U3:
            return params;
        default:
            throw std::invalid_argument("u3_angles: gate kind " + std::string(gate_name(kind)) + " has no U3 form");
    }
}

void Gate::validate(int qubit_count) const {
    const int n = arity();
    for (int k = 0; k < n; ++k) {
        if (qubits[k] < 0 || qubits[k] >= qubit_count) {
            throw std::invalid_argument(
                "gate " + std::string(gate_name(kind)) + " acts on qubit " + std::to_string(qubits[k]) +
                " outside a " + std::to_string(qubit_count) + "-qubit register");
        }
    }
    if (n == 2 && qubits[0] == qubits[1]) {
        throw std::invalid_argument("two-qubit gate " + std::string(gate_name(kind)) + " repeats qubit " +
                                    std::to_string(qubits[0]));
    }
    for (int k = param_count(kind); k < 3; ++k) {
        if (params[k] != 0.0) {
            throw std::invalid_argument("gate " + std::string(gate_name(kind)) + " carries too many parameters");
        }
    }
    for (double p : params) {
        if (!std::isfinite(p)) {
            throw std::invalid_argument("gate " + std::string(gate_name(kind)) + " has a non-finite angle");
        }
    }
}

Matrix2c u3_matrix(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    Matrix2c m;
    m(0, 0) = c;
    m(0, 1) = -std::polar(s, lambda);
    m(1, 0) = std::polar(s, phi);
    m(1, 1) = std::polar(c, lambda + phi);
    return m;
}

UnitaryMatrix gate_unitary(const Gate &g) {
    switch (g.kind) {
        case GateKind::U1:
        case GateKind::U2:
        case GateKind::U3: {
            auto a = g.u3_angles();
            return u3_matrix(a[0], a[1], a[2]);
        }
        case GateKind::X:
            return pauli_x();
        case GateKind::Y:
            return pauli_y();
        case GateKind::SqrtX:
            return principal_root(pauli_x());
        case GateKind::SqrtW:
            return principal_root((pauli_x() + pauli_y()) / std::sqrt(2.0));
        case GateKind::SqrtZ:
            return principal_root(pauli_z());
        case GateKind::CX: {
            UnitaryMatrix m = UnitaryMatrix::Zero(4, 4);
            m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
            return m;
        }
        case GateKind::SWAP: {
            UnitaryMatrix m = UnitaryMatrix::Zero(4, 4);
            m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
            return m;
        }
    }
    throw std::logic_error("gate_unitary: unknown kind");
}

ZyzAngles zyz_decompose(const Matrix2c &u) {
    if (unitarity_error(u) > 1e-9) {
        throw std::invalid_argument("zyz_decompose: input matrix is not unitary");
    }
    // Below this magnitude an off-diagonal (or diagonal) pair is treated as
    // exactly zero, which selects the lambda = 0 convention.
    constexpr double kDegenerate = 1e-12;
    const double c = std::abs(u(0, 0));
    const double s = std::abs(u(1, 0));

    ZyzAngles out;
    if (s < kDegenerate) {
        out.theta = 0;
        out.global_phase = std::arg(u(0, 0));
        out.phi = std::arg(u(1, 1)) - out.global_phase;
        out.lambda = 0;
    } else if (c < kDegenerate) {
        out.theta = kPi;
        out.global_phase = std::arg(-u(0, 1));
        out.phi = std::arg(u(1, 0)) - out.global_phase;
        out.lambda = 0;
    } else {
        out.theta = 2 * std::atan2(s, c);
        out.global_phase = std::arg(u(0, 0));
        out.phi = std::arg(u(1, 0)) - out.global_phase;
        out.lambda = std::arg(-u(0, 1)) - out.global_phase;
    }
    out.phi = wrap_angle(out.phi);
    out.lambda = wrap_angle(out.lambda);
    out.global_phase = wrap_angle(out.global_phase);
    return out;
}

Gate inverse_gate(const Gate &g) {
    Gate out = g;
    switch (g.kind) {
        case GateKind::U1:
            out.params = {-g.params[0], 0.0, 0.0};
            return out;
        case GateKind::U2:
        case GateKind::U3: {
            auto a = g.u3_angles();
            out.kind = GateKind::U3;
            out.params = {-a[0], -a[2], -a[1]};
            return out;
        }
        case GateKind::CX:
        case GateKind::SWAP:
        case GateKind::X:
        case GateKind::Y:
            return out;
        case GateKind::SqrtX:
        case GateKind::SqrtW:
        case GateKind::SqrtZ: {
            Matrix2c inv = gate_unitary(g).adjoint();
            ZyzAngles z = zyz_decompose(inv);
            out.kind = GateKind::U3;
            out.params = {z.theta, z.phi, z.lambda};
            return out;
        }
    }
    throw std::logic_error("inverse_gate: unknown kind");
}

}  // namespace noiseforge
