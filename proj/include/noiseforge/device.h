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
#include <string>
#include <vector>

#include "noiseforge/coupling_map.h"

namespace noiseforge {

/// Synthetic noisy device. Times in microseconds, rates in rad/us.
struct DeviceModel {
    std::string name = "device";
    std::uint64_t seed = 0;
    CouplingMap coupling = CouplingMap::t_shape();

    std::vector<double> t1;           ///< per qubit
    std::vector<double> t2;           ///< per qubit, <= 2 * t1
    std::vector<double> drift_rate;   ///< per qubit coherent Z drift delta_i
    std::vector<double> crosstalk;    ///< per coupling edge ZZ rate zeta_ij, same order as coupling.edges()
    bool crosstalk_always_on = false;  ///< otherwise ZZ acts only while both qubits idle
    double p1q = 0;                   ///< single-qubit depolarizing probability
    double p2q = 0;                   ///< two-qubit depolarizing probability
    double over_rotation = 0;         ///< radians added to theta of every executed 1q gate
    std::vector<double> readout_p1_given_0;
    std::vector<double> readout_p0_given_1;
    double t_1q = 0.05;
    double t_2q = 0.3;

    int qubit_count() const { return coupling.qubit_count(); }

    /// Throws std::invalid_argument when a field is out of range or sized wrong.
    void validate() const;
};

/// Per-parameter sampling ranges for randomized devices.
struct DeviceRanges {
    double t1_lo = 40, t1_hi = 80;
    double t2_lo = 30, t2_hi = 90;
    double drift_lo = 0.02, drift_hi = 0.12;
    double crosstalk_lo = 0.005, crosstalk_hi = 0.03;
    double p1q_lo = 0.0005, p1q_hi = 0.002;
    double p2q_lo = 0.01, p2q_hi = 0.03;
    double over_rotation_lo = 0.0, over_rotation_hi = 0.02;
    double readout_lo = 0.01, readout_hi = 0.04;
    double t_1q = 0.05;
    double t_2q = 0.3;

    void validate() const;
};

/// All channels off: every circuit yields its ideal distribution.
DeviceModel zero_noise_device(const CouplingMap &map, std::string name = "ideal");

/// Samples every parameter uniformly from `ranges`. The effective seed mixes
/// `seed` with a stable hash of `name`, so equal seeds give distinct devices
/// for distinct names. T2 is clipped to 2*T1.
DeviceModel make_random_device(const std::string &name, std::uint64_t seed, const CouplingMap &map,
                               const DeviceRanges &ranges = {});

/// Builds a device from a JSON config. A config with a "ranges" object (any
/// subset of DeviceRanges fields) plus "name", "seed" and optional "coupling"
/// yields a randomized device; otherwise the config must be a full explicit
/// model as written by device_to_json.
DeviceModel make_device(const std::string &config_json);

std::string device_to_json(const DeviceModel &dm);
DeviceModel device_from_json(const std::string &text);
DeviceModel read_device_file(const std::string &path);
void write_device_file(const std::string &path, const DeviceModel &dm);

}  // namespace noiseforge
