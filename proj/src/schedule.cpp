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

#include "noiseforge/schedule.h"

#include <algorithm>
#include <stdexcept>

namespace noiseforge {

namespace {

int lowest_qubit(const Gate &g) {
    return g.arity() == 2 ? std::min(g.qubits[0], g.qubits[1]) : g.qubits[0];
}

bool placement_less(const PlacedGate &a, const PlacedGate &b) {
    if (a.step != b.step) {
        return a.step < b.step;
    }
    return lowest_qubit(a.gate) < lowest_qubit(b.gate);
}

}  // namespace

Circuit ScheduledCircuit::flatten() const {
    Circuit c(qubit_count);
    c.gates.reserve(gates.size());
    for (const auto &pg : gates) {
        c.gates.push_back(pg.gate);
    }
    return c;
}

void ScheduledCircuit::validate() const {
    std::vector<std::vector<char>> busy(qubit_count, std::vector<char>(std::max(duration, 0), 0));
    for (const auto &pg : gates) {
        pg.gate.validate(qubit_count);
        if (pg.step < 0 || pg.step >= duration) {
            throw std::invalid_argument("scheduled gate at step " + std::to_string(pg.step) +
                                        " lies outside duration " + std::to_string(duration));
        }
        for (int k = 0; k < pg.gate.arity(); ++k) {
            char &cell = busy[pg.gate.qubits[k]][pg.step];
            if (cell) {
                throw std::invalid_argument("schedule overlap on qubit " + std::to_string(pg.gate.qubits[k]) +
                                            " at step " + std::to_string(pg.step));
            }
            cell = 1;
        }
    }
}

void ScheduledCircuit::normalize() {
    std::stable_sort(gates.begin(), gates.end(), placement_less);
    duration = 0;
    for (const auto &pg : gates) {
        duration = std::max(duration, pg.step + 1);
    }
}

ScheduledCircuit schedule_asap(const Circuit &c) {
    c.validate();
    ScheduledCircuit sc;
    sc.qubit_count = c.qubit_count;
    std::vector<int> free_at(c.qubit_count, 0);
    sc.gates.reserve(c.gates.size());
    for (const auto &g : c.gates) {
        int step = free_at[g.qubits[0]];
        if (g.arity() == 2) {
            step = std::max(step, free_at[g.qubits[1]]);
        }
        for (int k = 0; k < g.arity(); ++k) {
            free_at[g.qubits[k]] = step + 1;
        }
        sc.gates.push_back(PlacedGate{g, step});
    }
    sc.normalize();
    return sc;
}

std::vector<Gap> find_gaps(const ScheduledCircuit &sc) {
    std::vector<std::vector<int>> steps(sc.qubit_count);
    for (const auto &pg : sc.gates) {
        for (int k = 0; k < pg.gate.arity(); ++k) {
            steps[pg.gate.qubits[k]].push_back(pg.step);
        }
    }
    std::vector<Gap> gaps;
    for (int q = 0; q < sc.qubit_count; ++q) {
        auto &s = steps[q];
        std::sort(s.begin(), s.end());
        for (std::size_t i = 1; i < s.size(); ++i) {
            int idle = s[i] - s[i - 1] - 1;
            if (idle > 0) {
                gaps.push_back(Gap{q, s[i - 1] + 1, idle});
            }
        }
    }
    return gaps;
}

}  // namespace noiseforge
