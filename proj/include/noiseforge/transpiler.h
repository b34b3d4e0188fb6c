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
#include "noiseforge/coupling_map.h"
#include "noiseforge/schedule.h"

namespace noiseforge {

/// Rewrites into {U1, U2, U3, CX}. SWAP becomes three CX; every other
/// single-qubit kind becomes one U3 (global phase dropped). Native gates and
/// inserted flags pass through untouched.
Circuit decompose_to_native(const Circuit &c);

struct RoutedCircuit {
    Circuit circuit;
    /// final_permutation[logical] = physical wire holding that logical qubit at the end.
    std::vector<int> final_permutation;
};

/// Greedy shortest-path SWAP insertion with the identity as initial layout.
/// A CX on non-adjacent wires moves its control along the BFS path toward the
/// target until adjacent; each SWAP is emitted as three CX on the edge.
/// Applying permutation_unitary(final_permutation)^dagger after the routed
/// circuit reproduces the input unitary.
RoutedCircuit route(const Circuit &c, const CouplingMap &map);

/// Collapses maximal runs (length >= 2) of consecutive non-inserted
/// single-qubit gates on a qubit into one U3. Inserted gates are never merged
/// and also break runs.
Circuit merge_single_qubit_runs(const Circuit &c);

struct TranspileResult {
    Circuit circuit;
    std::vector<int> final_permutation;
    ScheduledCircuit scheduled;
};

/// decompose -> route -> merge -> schedule_asap.
TranspileResult transpile(const Circuit &c, const CouplingMap &map);

}  // namespace noiseforge
