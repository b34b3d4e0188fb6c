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

#include <vector>

#include "noiseforge/circuit.h"
#include "noiseforge/rng.h"

namespace noiseforge {

/// The closed angle grid {k*pi/6 : k = 0..11}.
double grid_angle(int k);
inline constexpr int kAngleGridSize = 12;

/// `length` U3 gates on qubit `q` whose ordered product is the identity up to
/// global phase. The first length-1 gates draw each angle uniformly from the
/// grid; the last one is the exact inverse of their product (not snapped).
std::vector<Gate> random_identity_sequence(int length, Rng &rng, int q = 0);

/// `cycles` cycles on n qubits; each cycle is one gate from {SqrtX, SqrtW, SqrtZ}
/// on every qubit followed by one CX on a uniformly chosen ordered pair of
/// distinct qubits.
Circuit random_u_circuit(int n, int cycles, Rng &rng);

}  // namespace noiseforge
