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

namespace noiseforge {

struct PlacedGate {
    Gate gate;
    int step = 0;

    bool operator==(const PlacedGate &other) const = default;
};

/// A circuit on a grid of unit time steps. Every gate, one- or two-qubit,
/// occupies exactly one step on each of its qubits. Gates are kept sorted by
/// (step, lowest qubit).
struct ScheduledCircuit {
    int qubit_count = 1;
    std::vector<PlacedGate> gates;
    int duration = 0;

    /// Gate list in (step, lowest qubit) order; a valid dependency order.
    Circuit flatten() const;

    /// Throws std::invalid_argument if two gates share a qubit at one step or
    /// a placement lies outside [0, duration).
    void validate() const;

    /// Restores the (step, lowest qubit) ordering and recomputes duration.
    void normalize();

    bool operator==(const ScheduledCircuit &other) const = default;
};

/// Each gate starts at the earliest step where all its qubits are free.
ScheduledCircuit schedule_asap(const Circuit &c);

struct Gap {
    int qubit = 0;
    int start = 0;
    int length = 0;

    bool operator==(const Gap &other) const = default;
};

/// Maximal idle runs strictly between a qubit's first and last gate, sorted by
/// (qubit, start). Leading and trailing idleness is not reported.
std::vector<Gap> find_gaps(const ScheduledCircuit &sc);

}  // namespace noiseforge
