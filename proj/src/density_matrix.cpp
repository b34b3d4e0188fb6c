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

#include "noiseforge/density_matrix.h"

#include <cmath>
#include <stdexcept>

namespace noiseforge {

namespace {

template <int D, typename Op>
Eigen::Matrix<complex_t, D * D, D * D> superop_impl(const std::vector<Op> &kraus) {
    Eigen::Matrix<complex_t, D * D, D * D> s = Eigen::Matrix<complex_t, D * D, D * D>::Zero();
    for (const auto &k : kraus) {
        for (int a = 0; a < D; ++a) {
            for (int b = 0; b < D; ++b) {
                for (int c = 0; c < D; ++c) {
                    for (int d = 0; d < D; ++d) {
                        s(a * D + b, c * D + d) += k(a, c) * std::conj(k(b, d));
                    }
                }
            }
        }
    }
    return s;
}

template <typename Op>
double completeness_impl(const std::vector<Op> &kraus) {
    Op sum = Op::Zero();
    for (const auto &k : kraus) {
        sum += k.adjoint() * k;
    }
    return (sum - Op::Identity()).cwiseAbs().maxCoeff();
}

std::vector<Matrix2c> paulis() {
    const complex_t i{0.0, 1.0};
    Matrix2c id = Matrix2c::Identity(), x, y, z;
    x << 0, 1, 1, 0;
    y << 0, -i, i, 0;
    z << 1, 0, 0, -1;
    return {id, x, y, z};
}

}  // namespace

Superop1q superop_from_kraus(const std::vector<Matrix2c> &kraus) {
    return superop_impl<2>(kraus);
}

Superop2q superop_from_kraus(const std::vector<Matrix4c> &kraus) {
    return superop_impl<4>(kraus);
}

std::vector<Matrix2c> amplitude_damping_kraus(double gamma) {
    Matrix2c k0, k1;
    k0 << 1, 0, 0, std::sqrt(1 - gamma);
    k1 << 0, std::sqrt(gamma), 0, 0;
    return {k0, k1};
}

std::vector<Matrix2c> dephasing_kraus(double lambda) {
    auto p = paulis();
    return {std::sqrt(1 - lambda / 2) * p[0], std::sqrt(lambda / 2) * p[3]};
}

std::vector<Matrix2c> depolarizing_1q_kraus(double p) {
    auto ps = paulis();
    std::vector<Matrix2c> out{std::sqrt(1 - 3 * p / 4) * ps[0]};
    for (int k = 1; k < 4; ++k) {
        out.push_back(std::sqrt(p / 4) * ps[k]);
    }
    return out;
}

std::vector<Matrix4c> depolarizing_2q_kraus(double p) {
    auto ps = paulis();
    std::vector<Matrix4c> out;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            Matrix4c k;
            for (int r = 0; r < 4; ++r) {
                for (int c = 0; c < 4; ++c) {
                    k(r, c) = ps[a](r >> 1, c >> 1) * ps[b](r & 1, c & 1);
                }
            }
            double w = (a == 0 && b == 0) ? 1 - 15 * p / 16 : p / 16;
            out.push_back(std::sqrt(w) * k);
        }
    }
    return out;
}

double kraus_completeness_error(const std::vector<Matrix2c> &kraus) {
    return completeness_impl(kraus);
}

double kraus_completeness_error(const std::vector<Matrix4c> &kraus) {
    return completeness_impl(kraus);
}

DensityMatrix::DensityMatrix(int n) : n_(n) {
    if (n < 1 || n > 12) {
        throw std::invalid_argument("DensityMatrix: qubit count must lie in [1, 12]");
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    rho_ = Eigen::MatrixXcd::Zero(dim, dim);
    rho_(0, 0) = 1;
}

void DensityMatrix::apply_superop(const Superop1q &s, int q) {
    const Eigen::Index dim = rho_.rows();
    const Eigen::Index m = Eigen::Index{1} << (n_ - 1 - q);
    for (Eigen::Index r = 0; r < dim; ++r) {
        if (r & m) {
            continue;
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            if (c & m) {
                continue;
            }
            complex_t v[4] = {rho_(r, c), rho_(r, c | m), rho_(r | m, c), rho_(r | m, c | m)};
            complex_t w[4];
            for (int i = 0; i < 4; ++i) {
                w[i] = s(i, 0) * v[0] + s(i, 1) * v[1] + s(i, 2) * v[2] + s(i, 3) * v[3];
            }
            rho_(r, c) = w[0];
            rho_(r, c | m) = w[1];
            rho_(r | m, c) = w[2];
            rho_(r | m, c | m) = w[3];
        }
    }
}

void DensityMatrix::apply_superop(const Superop2q &s, int q_hi, int q_lo) {
    const Eigen::Index dim = rho_.rows();
    const Eigen::Index mh = Eigen::Index{1} << (n_ - 1 - q_hi);
    const Eigen::Index ml = Eigen::Index{1} << (n_ - 1 - q_lo);
    const Eigen::Index offs[4] = {0, ml, mh, mh | ml};
    Eigen::Matrix<complex_t, 16, 1> v;
    for (Eigen::Index r = 0; r < dim; ++r) {
        if ((r & mh) || (r & ml)) {
            continue;
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            if ((c & mh) || (c & ml)) {
                continue;
            }
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    v(a * 4 + b) = rho_(r | offs[a], c | offs[b]);
                }
            }
            Eigen::Matrix<complex_t, 16, 1> w = s * v;
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    rho_(r | offs[a], c | offs[b]) = w(a * 4 + b);
                }
            }
        }
    }
}

void DensityMatrix::apply_unitary(const Matrix2c &u, int q) {
    apply_superop(superop_from_kraus(std::vector<Matrix2c>{u}), q);
}

void DensityMatrix::apply_diagonal_phase(const std::vector<double> &phase) {
    const Eigen::Index dim = rho_.rows();
    std::vector<complex_t> f(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        f[k] = std::polar(1.0, phase[k]);
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
        const complex_t fc = std::conj(f[c]);
        for (Eigen::Index r = 0; r < dim; ++r) {
            rho_(r, c) *= f[r] * fc;
        }
    }
}

std::vector<double> DensityMatrix::diagonal() const {
    std::vector<double> d(rho_.rows());
    for (Eigen::Index k = 0; k < rho_.rows(); ++k) {
        d[k] = rho_(k, k).real();
    }
    return d;
}

double DensityMatrix::trace_error() const {
    return std::abs(rho_.trace() - complex_t(1.0, 0.0));
}

double DensityMatrix::hermiticity_error() const {
    return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::MatrixXcd h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace noiseforge
