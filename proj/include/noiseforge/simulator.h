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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "noiseforge/density_matrix.h"
#include "noiseforge/device.h"
#include "noiseforge/rng.h"
#include "noiseforge/schedule.h"

namespace noiseforge {

/// Probability per n-bit outcome. Index bit (n-1-q) is qubit q, so the
/// string form lists qubit 0 first.
struct OutputDistribution {
    int qubit_count = 0;
    std::vector<double> probs;

    double total() const;
    std::string bitstring(std::size_t index) const;
};

struct SimulationMode {
    bool sampled = false;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    static SimulationMode exact() { return {}; }
    static SimulationMode shots_mode(std::uint64_t k, std::uint64_t seed) { return {true, k, seed}; }
};

/// Called after every time step with the step index and the current state.
using StepObserver = std::function<void(int, const DensityMatrix &)>;

/// Duration of one step: t_2q if any CX runs in it, t_1q otherwise.
std::vector<double> step_durations(const ScheduledCircuit &sc, const DeviceModel &dm);

/// Noisy density-matrix evolution from |0...0>.
///
/// Each step of length T runs, in order: coherent Z drift on every qubit for
/// its idle share of the step (T minus its gate duration) together with ZZ
/// crosstalk on coupled pairs for the time both are idle (or all of T when
/// always-on); amplitude damping and dephasing for T; the step's gates with
/// theta over-rotated by the device's epsilon; depolarizing noise on the gate
/// qubits. Readout flips are applied to the final distribution.
///
/// Throws std::invalid_argument for overlapping schedules, CX off the coupling
/// map, a qubit-count mismatch, SWAP gates, or shots mode with k = 0.
OutputDistribution simulate(const ScheduledCircuit &sc, const DeviceModel &dm,
                            SimulationMode mode = SimulationMode::exact(),
                            const StepObserver &observer = nullptr);

/// Noiseless state-vector distribution. Throws std::length_error above 10 qubits.
OutputDistribution statevector_reference(const Circuit &c);

/// sum_x p(x) |x|_1.
double expected_hamming_weight(const OutputDistribution &p);

/// Total variation distance to the all-zeros point mass: 1 - p(0^n).
double tvd_singleton(const OutputDistribution &p);

double total_variation(const OutputDistribution &p, const OutputDistribution &q);

}  // namespace noiseforge
