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

#include "noiseforge/random_circuits.h"

#include <stdexcept>

namespace noiseforge {

double grid_angle(int k) {
    return k * kPi / 6.0;
}

std::vector<Gate> random_identity_sequence(int length, Rng &rng, int q) {
    if (length < 1) {
        throw std::invalid_argument("random_identity_sequence: length must be >= 1");
    }
    std::vector<Gate> seq;
    seq.reserve(length);
    Matrix2c product = Matrix2c::Identity();
    for (int i = 0; i + 1 < length; ++i) {
        double angles[3];
        for (double &a : angles) {
            a = grid_angle(static_cast<int>(uniform_index(rng, kAngleGridSize)));
        }
        Gate g = Gate::u3(q, angles[0], angles[1], angles[2]);
        g.inserted = true;
        product = u3_matrix(angles[0], angles[1], angles[2]) * product;
        seq.push_back(g);
    }
    ZyzAngles z = zyz_decompose(product.adjoint());
    Gate last = Gate::u3(q, z.theta, z.phi, z.lambda);
    last.inserted = true;
    seq.push_back(last);
    return seq;
}

Circuit random_u_circuit(int n, int cycles, Rng &rng) {
    if (n < 2 || cycles < 1) {
        throw std::invalid_argument("random_u_circuit: need n >= 2 and cycles >= 1");
    }
    static constexpr GateKind kCycleGates[3] = {GateKind::SqrtX, GateKind::SqrtW, GateKind::SqrtZ};
    Circuit c(n);
    for (int cycle = 0; cycle < cycles; ++cycle) {
        for (int q = 0; q < n; ++q) {
            c.add(Gate::single(kCycleGates[uniform_index(rng, 3)], q));
        }
        // Uniform over the n*(n-1) ordered pairs.
        auto pair = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n) * (n - 1)));
        int control = pair / (n - 1);
        int target = pair % (n - 1);
        if (target >= control) {
            ++target;
        }
        c.add(Gate::cx(control, target));
    }
    return c;
}

}  // namespace noiseforge
