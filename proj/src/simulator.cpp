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

#include "noiseforge/simulator.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace noiseforge {

double OutputDistribution::total() const {
    double s = 0;
    for (double p : probs) {
        s += p;
    }
    return s;
}

std::string OutputDistribution::bitstring(std::size_t index) const {
    std::string s(qubit_count, '0');
    for (int q = 0; q < qubit_count; ++q) {
        if (qubit_bit(index, q, qubit_count)) {
            s[q] = '1';
        }
    }
    return s;
}

std::vector<double> step_durations(const ScheduledCircuit &sc, const DeviceModel &dm) {
    std::vector<double> t(sc.duration, dm.t_1q);
    for (const auto &pg : sc.gates) {
        if (pg.gate.arity() == 2) {
            t[pg.step] = dm.t_2q;
        }
    }
    return t;
}

namespace {

void check_inputs(const ScheduledCircuit &sc, const DeviceModel &dm) {
    if (sc.qubit_count != dm.qubit_count()) {
        throw std::invalid_argument("simulate: circuit has " + std::to_string(sc.qubit_count) + " qubits, device '" +
                                    dm.name + "' has " + std::to_string(dm.qubit_count()));
    }
    sc.validate();
    for (const auto &pg : sc.gates) {
        if (pg.gate.kind == GateKind::SWAP) {
            throw std::invalid_argument("simulate: SWAP must be lowered to CX before simulation");
        }
        if (pg.gate.kind == GateKind::CX && !dm.coupling.connected(pg.gate.qubits[0], pg.gate.qubits[1])) {
            throw std::invalid_argument("simulate: CX q" + std::to_string(pg.gate.qubits[0]) + " q" +
                                        std::to_string(pg.gate.qubits[1]) + " is not on a coupling edge of '" +
                                        dm.coupling.name() + "'");
        }
    }
}

// Executed single-qubit gate: theta gets the device's over-rotation.
Matrix2c noisy_1q_unitary(const Gate &g, double over_rotation) {
    std::array<double, 3> a;
    if (is_native(g.kind)) {
        a = g.u3_angles();
    } else {
        ZyzAngles z = zyz_decompose(gate_unitary(g));
        a = {z.theta, z.phi, z.lambda};
    }
    return u3_matrix(a[0] + over_rotation, a[1], a[2]);
}

Superop1q relaxation_superop(double t, double t1, double t2) {
    Superop1q s = Superop1q::Identity();
    if (std::isfinite(t1)) {
        s = superop_from_kraus(amplitude_damping_kraus(1 - std::exp(-t / t1))) * s;
    }
    if (std::isfinite(t2)) {
        double inv_tphi = 1 / t2 - (std::isfinite(t1) ? 1 / (2 * t1) : 0.0);
        if (inv_tphi > 0) {
            s = superop_from_kraus(dephasing_kraus(1 - std::exp(-t * inv_tphi))) * s;
        }
    }
    return s;
}

void apply_readout(OutputDistribution &p, const DeviceModel &dm) {
    const int n = p.qubit_count;
    for (int q = 0; q < n; ++q) {
        const double f01 = dm.readout_p1_given_0[q];
        const double f10 = dm.readout_p0_given_1[q];
        if (f01 == 0 && f10 == 0) {
            continue;
        }
        const std::size_t m = std::size_t{1} << (n - 1 - q);
        for (std::size_t i = 0; i < p.probs.size(); ++i) {
            if (i & m) {
                continue;
            }
            double p0 = p.probs[i];
            double p1 = p.probs[i | m];
            p.probs[i] = (1 - f01) * p0 + f10 * p1;
            p.probs[i | m] = f01 * p0 + (1 - f10) * p1;
        }
    }
}

OutputDistribution sample_shots(const OutputDistribution &exact, std::uint64_t shots, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> cdf(exact.probs.size());
    double acc = 0;
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        acc += exact.probs[i];
        cdf[i] = acc;
    }
    std::vector<std::uint64_t> counts(cdf.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        double u = uniform_unit(rng) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
        ++counts[idx];
    }
    OutputDistribution out{exact.qubit_count, std::vector<double>(cdf.size())};
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        out.probs[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
    }
    return out;
}

}  // namespace

OutputDistribution simulate(const ScheduledCircuit &sc, const DeviceModel &dm, SimulationMode mode,
                            const StepObserver &observer) {
    if (mode.sampled && mode.shots == 0) {
        throw std::invalid_argument("simulate: shots mode needs at least one shot");
    }
    check_inputs(sc, dm);
    dm.validate();
    const int n = sc.qubit_count;
    const std::size_t dim = std::size_t{1} << n;
    const auto durations = step_durations(sc, dm);
    const Superop2q dep2 = superop_from_kraus(depolarizing_2q_kraus(dm.p2q));
    const Superop1q dep1 = superop_from_kraus(depolarizing_1q_kraus(dm.p1q));
    const Superop2q cx_superop = dep2 * superop_from_kraus(std::vector<Matrix4c>{gate_unitary(Gate::cx(0, 1))});

    // Per-basis-state Z eigenvalue of each qubit and ZZ parity of each edge.
    std::vector<std::vector<double>> z(n, std::vector<double>(dim));
    for (int q = 0; q < n; ++q) {
        for (std::size_t i = 0; i < dim; ++i) {
            z[q][i] = qubit_bit(i, q, n) ? -1.0 : 1.0;
        }
    }
    const auto &edges = dm.coupling.edges();

    DensityMatrix rho(n);
    std::size_t next = 0;
    std::vector<const Gate *> gate_on(n);
    std::vector<double> phase(dim);
    for (int step = 0; step < sc.duration; ++step) {
        const double T = durations[step];
        std::fill(gate_on.begin(), gate_on.end(), nullptr);
        std::vector<const Gate *> step_gates;
        while (next < sc.gates.size() && sc.gates[next].step == step) {
            const Gate &g = sc.gates[next].gate;
            for (int k = 0; k < g.arity(); ++k) {
                gate_on[g.qubits[k]] = &g;
            }
            step_gates.push_back(&g);
            ++next;
        }
        std::vector<double> busy(n, 0.0);
        for (int q = 0; q < n; ++q) {
            if (gate_on[q]) {
                busy[q] = gate_on[q]->arity() == 2 ? dm.t_2q : dm.t_1q;
            }
        }

        // (1) coherent idle evolution, exp(-i a Z / 2) and exp(-i b ZZ / 2).
        bool any_phase = false;
        std::fill(phase.begin(), phase.end(), 0.0);
        for (int q = 0; q < n; ++q) {
            double angle = dm.drift_rate[q] * std::max(T - busy[q], 0.0);
            if (angle != 0) {
                any_phase = true;
                for (std::size_t i = 0; i < dim; ++i) {
                    phase[i] -= 0.5 * angle * z[q][i];
                }
            }
        }
        for (std::size_t e = 0; e < edges.size(); ++e) {
            auto [a, b] = edges[e];
            double t = dm.crosstalk_always_on ? T : std::max(T - std::max(busy[a], busy[b]), 0.0);
            double angle = dm.crosstalk[e] * t;
            if (angle != 0) {
                any_phase = true;
                for (std::size_t i = 0; i < dim; ++i) {
                    phase[i] -= 0.5 * angle * z[a][i] * z[b][i];
                }
            }
        }
        if (any_phase) {
            rho.apply_diagonal_phase(phase);
        }

        // (1b) relaxation, folded with (2) single-qubit gates and their depolarizing.
        std::vector<Superop1q> local(n);
        for (int q = 0; q < n; ++q) {
            local[q] = relaxation_superop(T, dm.t1[q], dm.t2[q]);
            const Gate *g = gate_on[q];
            if (g && g->arity() == 1) {
                Matrix2c u = noisy_1q_unitary(*g, dm.over_rotation);
                local[q] = dep1 * superop_from_kraus(std::vector<Matrix2c>{u}) * local[q];
            }
            if (!local[q].isIdentity(0.0)) {
                rho.apply_superop(local[q], q);
            }
        }
        // (2) two-qubit gates.
        for (const Gate *g : step_gates) {
            if (g->arity() == 2) {
                rho.apply_superop(cx_superop, g->qubits[0], g->qubits[1]);
            }
        }
        if (observer) {
            observer(step, rho);
        }
    }

    OutputDistribution out{n, rho.diagonal()};
    for (double &p : out.probs) {
        p = std::max(p, 0.0);
    }
    apply_readout(out, dm);
    if (mode.sampled) {
        return sample_shots(out, mode.shots, mode.seed);
    }
    return out;
}

OutputDistribution statevector_reference(const Circuit &c) {
    if (c.qubit_count > kMaxUnitaryQubits) {
        throw std::length_error("statevector_reference: too many qubits");
    }
    c.validate();
    const Eigen::Index dim = Eigen::Index{1} << c.qubit_count;
    UnitaryMatrix psi = UnitaryMatrix::Zero(dim, 1);
    psi(0, 0) = 1;
    for (const auto &g : c.gates) {
        apply_gate(psi, c.qubit_count, g);
    }
    OutputDistribution out{c.qubit_count, std::vector<double>(dim)};
    for (Eigen::Index i = 0; i < dim; ++i) {
        out.probs[i] = std::norm(psi(i, 0));
    }
    return out;
}

double expected_hamming_weight(const OutputDistribution &p) {
    double w = 0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        w += p.probs[i] * std::popcount(i);
    }
    return w;
}

double tvd_singleton(const OutputDistribution &p) {
    return 1.0 - p.probs.at(0);
}

double total_variation(const OutputDistribution &p, const OutputDistribution &q) {
    if (p.probs.size() != q.probs.size()) {
        throw std::invalid_argument("total_variation: size mismatch");
    }
    double s = 0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        s += std::abs(p.probs[i] - q.probs[i]);
    }
    return 0.5 * s;
}

}  // namespace noiseforge
