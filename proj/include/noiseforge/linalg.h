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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace noiseforge {

using complex_t = std::complex<double>;

/// Dense complex matrix. Qubit 0 is the most significant bit of a basis index.
using UnitaryMatrix = Eigen::MatrixXcd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Reduces an angle into (-pi, pi].
double wrap_angle(double a);

/// Reduces an angle into [0, 2*pi).
double wrap_angle_positive(double a);

/// Largest absolute entry of U * U^dagger - I.
double unitarity_error(const UnitaryMatrix &u);

/// Max-entry distance between a and b after removing the global phase of b
/// relative to a. The phase is aligned on the largest-magnitude entry of a.
double distance_up_to_phase(const UnitaryMatrix &a, const UnitaryMatrix &b);

/// Max-entry distance of u from the identity, up to global phase.
double distance_to_identity_up_to_phase(const UnitaryMatrix &u);

/// Bit of qubit q within basis index `index` for an n-qubit register.
inline int qubit_bit(std::uint64_t index, int q, int n) {
    return static_cast<int>((index >> (n - 1 - q)) & 1u);
}

}  // namespace noiseforge
