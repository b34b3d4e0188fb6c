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

#include "noiseforge/linalg.h"

#include <cmath>

namespace noiseforge {

double wrap_angle(double a) {
    double r = std::remainder(a, kTwoPi);
    if (r <= -kPi) {
        r += kTwoPi;
    }
    return r;
}

double wrap_angle_positive(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {
        r -= kTwoPi;
    }
    return r;
}

double unitarity_error(const UnitaryMatrix &u) {
    if (u.rows() != u.cols()) {
        return INFINITY;
    }
    UnitaryMatrix d = u * u.adjoint() - UnitaryMatrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

double distance_up_to_phase(const UnitaryMatrix &a, const UnitaryMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return INFINITY;
    }
    Eigen::Index r = 0, c = 0;
    a.cwiseAbs().maxCoeff(&r, &c);
    complex_t phase{1.0, 0.0};
    if (std::abs(b(r, c)) > 0) {
        complex_t ratio = a(r, c) / b(r, c);
        phase = ratio / std::abs(ratio);
    }
    return (a - phase * b).cwiseAbs().maxCoeff();
}

double distance_to_identity_up_to_phase(const UnitaryMatrix &u) {
    return distance_up_to_phase(u, UnitaryMatrix::Identity(u.rows(), u.cols()));
}

}  // namespace noiseforge
