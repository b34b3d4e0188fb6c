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

#include "noiseforge/linalg.h"

namespace noiseforge {

using Superop1q = Eigen::Matrix<complex_t, 4, 4>;
using Superop2q = Eigen::Matrix<complex_t, 16, 16>;

/// Superoperator of sum_k K rho K^dagger acting on the row-major vectorized
/// 2x2 (or 4x4) block of a density matrix.
Superop1q superop_from_kraus(const std::vector<Matrix2c> &kraus);
Superop2q superop_from_kraus(const std::vector<Matrix4c> &kraus);

/// gamma = 1 - exp(-t / T1).
std::vector<Matrix2c> amplitude_damping_kraus(double gamma);

/// Pure dephasing rho -> (1 - lambda/2) rho + (lambda/2) Z rho Z, so
/// off-diagonals shrink by (1 - lambda) with lambda = 1 - exp(-t / T_phi).
std::vector<Matrix2c> dephasing_kraus(double lambda);

/// rho -> (1 - p) rho + p I/2, written as a Pauli channel.
std::vector<Matrix2c> depolarizing_1q_kraus(double p);

/// rho -> (1 - p) rho + p I/4 on a qubit pair.
std::vector<Matrix4c> depolarizing_2q_kraus(double p);

/// Largest entry of sum_k K^dagger K - I.
double kraus_completeness_error(const std::vector<Matrix2c> &kraus);
double kraus_completeness_error(const std::vector<Matrix4c> &kraus);

/// n-qubit density matrix; qubit 0 is the most significant index bit.
class DensityMatrix {
   public:
    /// |0...0><0...0|.
    explicit DensityMatrix(int n);

    int qubit_count() const { return n_; }
    const Eigen::MatrixXcd &matrix() const { return rho_; }

    void apply_superop(const Superop1q &s, int q);
    /// q_hi indexes the high bit of the 4-dimensional block.
    void apply_superop(const Superop2q &s, int q_hi, int q_lo);
    void apply_unitary(const Matrix2c &u, int q);

    /// rho_rc *= exp(i (phase[r] - phase[c])), i.e. conjugation by diag(e^{i phase}).
    void apply_diagonal_phase(const std::vector<double> &phase);

    std::vector<double> diagonal() const;

    double trace_error() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;

   private:
    int n_;
    Eigen::MatrixXcd rho_;
};

}  // namespace noiseforge
