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

#include "noiseforge/transpiler.h"

#include <numeric>
#include <stdexcept>

namespace noiseforge {

namespace {

Gate as_u3(const Gate &g) {
    ZyzAngles z = zyz_decompose(gate_unitary(g));
    Gate out = Gate::u3(g.qubits[0], z.theta, z.phi, z.lambda);
    out.inserted = g.inserted;
    return out;
}

void emit_swap(Circuit &out, int a, int b) {
    out.add(Gate::cx(a, b));
    out.add(Gate::cx(b, a));
    out.add(Gate::cx(a, b));
}

}  // namespace

Circuit decompose_to_native(const Circuit &c) {
    Circuit out(c.qubit_count);
    out.metadata = c.metadata;
    for (const auto &g : c.gates) {
        if (is_native(g.kind)) {
            out.add(g);
        } else if (g.kind == GateKind::SWAP) {
            for (int k = 0; k < 3; ++k) {
                Gate cx = (k == 1) ? Gate::cx(g.qubits[1], g.qubits[0]) : Gate::cx(g.qubits[0], g.qubits[1]);
                cx.inserted = g.inserted;
                out.add(cx);
            }
        } else {
            out.add(as_u3(g));
        }
    }
    return out;
}

RoutedCircuit route(const Circuit &c, const CouplingMap &map) {
    if (c.qubit_count != map.qubit_count()) {
        throw std::invalid_argument("route: circuit has " + std::to_string(c.qubit_count) +
                                    " qubits but coupling map '" + map.name() + "' has " +
                                    std::to_string(map.qubit_count()));
    }
    const int n = c.qubit_count;
    std::vector<int> phys(n);  // logical -> physical
    std::vector<int> logical(n);  // physical -> logical
    std::iota(phys.begin(), phys.end(), 0);
    std::iota(logical.begin(), logical.end(), 0);

    RoutedCircuit out{Circuit(n), {}};
    out.circuit.metadata = c.metadata;
    for (const auto &g : c.gates) {
        if (!is_native(g.kind)) {
            throw std::invalid_argument("route: gate " + std::string(gate_name(g.kind)) + " is not native");
        }
        Gate mapped = g;
        if (g.arity() == 1) {
            mapped.qubits[0] = phys[g.qubits[0]];
            out.circuit.add(mapped);
            continue;
        }
        int pc = phys[g.qubits[0]];
        int pt = phys[g.qubits[1]];
        if (!map.connected(pc, pt)) {
            auto path = map.shortest_path(pc, pt);
            // Walk the control along the path until it sits next to the target.
            for (std::size_t k = 0; k + 2 < path.size(); ++k) {
                int a = path[k];
                int b = path[k + 1];
                emit_swap(out.circuit, a, b);
                std::swap(logical[a], logical[b]);
                phys[logical[a]] = a;
                phys[logical[b]] = b;
            }
            pc = phys[g.qubits[0]];
            pt = phys[g.qubits[1]];
        }
        mapped.qubits = {pc, pt};
        out.circuit.add(mapped);
    }
    out.final_permutation = phys;
    return out;
}

Circuit merge_single_qubit_runs(const Circuit &c) {
    const int n = c.qubit_count;
    // Open run per qubit: indices into `out.gates` of mergeable gates.
    std::vector<std::vector<std::size_t>> open(n);
    Circuit out(n);
    out.metadata = c.metadata;
    std::vector<char> dead;

    auto close_run = [&](int q) {
        auto &run = open[q];
        if (run.size() >= 2) {
            Matrix2c m = Matrix2c::Identity();
            for (std::size_t idx : run) {
                m = gate_unitary(out.gates[idx]) * m;
            }
            ZyzAngles z = zyz_decompose(m);
            out.gates[run.front()] = Gate::u3(q, z.theta, z.phi, z.lambda);
            for (std::size_t k = 1; k < run.size(); ++k) {
                dead[run[k]] = 1;
            }
        }
        run.clear();
    };

    for (const auto &g : c.gates) {
        if (!is_native(g.kind)) {
            throw std::invalid_argument("merge_single_qubit_runs: gate " + std::string(gate_name(g.kind)) +
                                        " is not native");
        }
        if (g.arity() == 2 || g.inserted) {
            for (int k = 0; k < g.arity(); ++k) {
                close_run(g.qubits[k]);
            }
            out.add(g);
            dead.push_back(0);
            continue;
        }
        out.add(g);
        dead.push_back(0);
        open[g.qubits[0]].push_back(out.gates.size() - 1);
    }
    for (int q = 0; q < n; ++q) {
        close_run(q);
    }
    Circuit compact(n);
    compact.metadata = out.metadata;
    for (std::size_t i = 0; i < out.gates.size(); ++i) {
        if (!dead[i]) {
            compact.add(out.gates[i]);
        }
    }
    return compact;
}

TranspileResult transpile(const Circuit &c, const CouplingMap &map) {
    auto routed = route(decompose_to_native(c), map);
    Circuit merged = merge_single_qubit_runs(routed.circuit);
    ScheduledCircuit sc = schedule_asap(merged);
    return TranspileResult{std::move(merged), std::move(routed.final_permutation), std::move(sc)};
}

}  // namespace noiseforge
