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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "noiseforge/random_circuits.h"
#include "noiseforge/transpiler.h"
#include "oracles.h"
#include "test_circuits.h"

using namespace noiseforge;
using oracle::pi;
using testing_support::random_mixed_circuit;

namespace {

bool native_only(const Circuit &c) {
    return std::all_of(c.gates.begin(), c.gates.end(), [](const Gate &g) { return is_native(g.kind); });
}

// Sort key making gate multisets comparable.
std::vector<std::string> gate_keys(const Circuit &c) {
    std::vector<std::string> keys;
    for (const auto &g : c.gates) {
        Circuit one(c.qubit_count);
        one.add(g);
        keys.push_back(to_text(one));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

}  // namespace

TEST_CASE("builtin coupling maps", "[coupling]") {
    const CouplingMap t = CouplingMap::t_shape();
    CHECK(t.qubit_count() == 5);
    CHECK(t.edges().size() == 4);
    CHECK(t.connected(0, 1));
    CHECK(t.connected(1, 0));
    CHECK(t.connected(3, 4));
    CHECK_FALSE(t.connected(0, 4));
    CHECK(t.shortest_path(0, 4) == std::vector<int>{0, 1, 3, 4});

    const CouplingMap b = CouplingMap::bowtie();
    CHECK(b.edges().size() == 5);
    CHECK(b.connected(1, 2));
    CHECK_FALSE(b.connected(3, 4));
    CHECK(b.shortest_path(3, 4) == std::vector<int>{3, 2, 4});
}

TEST_CASE("coupling map validation and text config", "[coupling]") {
    CHECK_THROWS_AS(CouplingMap("x", 3, {{0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(CouplingMap("x", 2, {{0, 0}, {0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(CouplingMap("x", 2, {{0, 2}}), std::invalid_argument);

    const CouplingMap t = CouplingMap::t_shape();
    CHECK(CouplingMap::parse(t.to_text()) == t);
    const CouplingMap custom = CouplingMap::parse("# line\nname line3\nqubits 3\nedge 0 1\nedge 1 2\n");
    CHECK(custom.name() == "line3");
    CHECK(custom.qubit_count() == 3);
    CHECK_THROWS_AS(CouplingMap::parse("name bad\nqubits 3\nedge 0 1\n"), std::invalid_argument);

    CHECK(CouplingMap::from_name_or_file("bowtie") == CouplingMap::bowtie());
    const auto path = std::filesystem::temp_directory_path() / "noiseforge_map.txt";
    std::ofstream(path) << custom.to_text();
    CHECK(CouplingMap::from_name_or_file(path.string()) == custom);
    std::filesystem::remove(path);
    CHECK_THROWS(CouplingMap::from_name_or_file("/nonexistent/map.txt"));
}

TEST_CASE("decompose X gives U3(pi, 0, pi)", "[decompose]") {
    Circuit c(1);
    c.add(Gate::single(GateKind::X, 0));
    const Circuit d = decompose_to_native(c);
    REQUIRE(d.gates.size() == 1);
    CHECK(d.gates[0].kind == GateKind::U3);
    CHECK(d.gates[0].params[0] == Catch::Approx(pi).margin(1e-12));
    CHECK(oracle::phase_distance(oracle::single_qubit_matrix(d.gates[0]), oracle::u3_euler(pi, 0, pi)) < 1e-12);
}

TEST_CASE("decompose SWAP gives three alternating CX", "[decompose]") {
    Circuit c(2);
    c.add(Gate::swap(0, 1));
    const Circuit d = decompose_to_native(c);
    CHECK(d.gates == std::vector<Gate>{Gate::cx(0, 1), Gate::cx(1, 0), Gate::cx(0, 1)});
}

TEST_CASE("decompose leaves native circuits unchanged", "[decompose]") {
    Circuit c(3);
    c.add(Gate::u1(0, 0.2)).add(Gate::u2(1, 0.3, 0.4)).add(Gate::u3(2, 1, 2, 3)).add(Gate::cx(2, 0));
    c.gates[1].inserted = true;
    CHECK(decompose_to_native(c) == c);
}

TEST_CASE("decompose preserves the unitary", "[decompose][property]") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 4;
        const Circuit c = random_mixed_circuit(n, 15, rng);
        const Circuit d = decompose_to_native(c);
        CHECK(native_only(d));
        CHECK(oracle::phase_distance(oracle::circuit_matrix(d), oracle::circuit_matrix(c)) < 1e-9);
    }
}

TEST_CASE("route leaves adjacent CX alone", "[route]") {
    Circuit c(5);
    c.add(Gate::cx(0, 1)).add(Gate::u3(2, 0.1, 0.2, 0.3)).add(Gate::cx(3, 1)).add(Gate::cx(4, 3));
    const RoutedCircuit r = route(c, CouplingMap::t_shape());
    CHECK(r.circuit == c);
    CHECK(r.final_permutation == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("route CX(0,4) on the T shape", "[route]") {
    Circuit c(5);
    c.add(Gate::cx(0, 4));
    const CouplingMap map = CouplingMap::t_shape();
    const RoutedCircuit r = route(c, map);
    // Path 0-1-3-4 has two interior hops, so two SWAPs of three CX each.
    const auto path = map.shortest_path(0, 4);
    const std::size_t swaps = path.size() - 2;
    CHECK(r.circuit.count(GateKind::CX) == 1 + 3 * swaps);
    for (const auto &g : r.circuit.gates) CHECK(map.connected(g.qubits[0], g.qubits[1]));
    CHECK(r.final_permutation == std::vector<int>{3, 0, 2, 1, 4});
    const oracle::Mat lhs = oracle::permutation_matrix(r.final_permutation).adjoint() * oracle::circuit_matrix(r.circuit);
    CHECK(oracle::phase_distance(lhs, oracle::circuit_matrix(c)) < 1e-12);
}

TEST_CASE("routed circuits are equivalent and respect the map", "[route][property]") {
    Rng rng(23);
    for (const CouplingMap &map : {CouplingMap::t_shape(), CouplingMap::bowtie()}) {
        for (int trial = 0; trial < 25; ++trial) {
            const Circuit c = decompose_to_native(random_mixed_circuit(5, 20, rng));
            const RoutedCircuit r = route(c, map);
            for (const auto &g : r.circuit.gates) {
                if (g.kind == GateKind::CX) CHECK(map.connected(g.qubits[0], g.qubits[1]));
            }
            const oracle::Mat lhs =
                oracle::permutation_matrix(r.final_permutation).adjoint() * oracle::circuit_matrix(r.circuit);
            CHECK(oracle::phase_distance(lhs, oracle::circuit_matrix(c)) < 1e-9);
        }
    }
}

TEST_CASE("merge collapses two U1 into one U3", "[merge]") {
    const double a = 2.5;
    const double b = 1.9;
    Circuit c(1);
    c.add(Gate::u1(0, a)).add(Gate::u1(0, b));
    const Circuit m = merge_single_qubit_runs(c);
    REQUIRE(m.gates.size() == 1);
    const Gate &g = m.gates[0];
    CHECK(g.kind == GateKind::U3);
    CHECK(g.params[0] == Catch::Approx(0).margin(1e-12));
    CHECK(g.params[2] == Catch::Approx(0).margin(1e-12));
    CHECK(g.params[1] == Catch::Approx(wrap_angle(a + b)).margin(1e-12));
    CHECK(oracle::phase_distance(oracle::circuit_matrix(m), oracle::circuit_matrix(c)) < 1e-12);
}

TEST_CASE("merge does not cross a CX", "[merge]") {
    Circuit c(2);
    c.add(Gate::u3(0, 0.1, 0.2, 0.3)).add(Gate::cx(0, 1)).add(Gate::u3(0, 0.4, 0.5, 0.6));
    CHECK(merge_single_qubit_runs(c) == c);
}

TEST_CASE("merge never touches inserted gates", "[merge]") {
    Circuit c(1);
    for (int i = 0; i < 4; ++i) {
        Gate g = Gate::u3(0, 0.1 * i, 0.2, 0.3);
        g.inserted = true;
        c.add(g);
    }
    CHECK(merge_single_qubit_runs(c) == c);

    // Inserted gates split runs of ordinary gates.
    Circuit mixed(1);
    Gate ins = Gate::u3(0, 1, 1, 1);
    ins.inserted = true;
    mixed.add(Gate::u1(0, 0.1)).add(Gate::u1(0, 0.2)).add(ins).add(Gate::u1(0, 0.3)).add(Gate::u1(0, 0.4));
    const Circuit m = merge_single_qubit_runs(mixed);
    REQUIRE(m.gates.size() == 3);
    CHECK(m.gates[1] == ins);
    CHECK(oracle::phase_distance(oracle::circuit_matrix(m), oracle::circuit_matrix(mixed)) < 1e-12);
}

TEST_CASE("merge preserves unitary and inserted gate count", "[merge][property]") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        Circuit c = decompose_to_native(random_mixed_circuit(3, 25, rng));
        std::size_t inserted = 0;
        for (auto &g : c.gates) {
            if (g.arity() == 1 && uniform_index(rng, 3) == 0) {
                g.inserted = true;
                ++inserted;
            }
        }
        const Circuit m = merge_single_qubit_runs(c);
        CHECK(native_only(m));
        CHECK(static_cast<std::size_t>(std::count_if(m.gates.begin(), m.gates.end(),
                                                     [](const Gate &g) { return g.inserted; })) == inserted);
        CHECK(m.count(GateKind::CX) == c.count(GateKind::CX));
        CHECK(oracle::phase_distance(oracle::circuit_matrix(m), oracle::circuit_matrix(c)) < 1e-9);
    }
}

TEST_CASE("schedule examples", "[schedule]") {
    Circuit c(2);
    c.add(Gate::u3(0, 1, 0, 0)).add(Gate::u3(1, 1, 0, 0)).add(Gate::cx(0, 1));
    const ScheduledCircuit sc = schedule_asap(c);
    REQUIRE(sc.gates.size() == 3);
    CHECK(sc.gates[0].step == 0);
    CHECK(sc.gates[1].step == 0);
    CHECK(sc.gates[2].step == 1);
    CHECK(sc.duration == 2);

    Circuit chain(1);
    for (int i = 0; i < 7; ++i) chain.add(Gate::u1(0, 0.1 * i));
    CHECK(schedule_asap(chain).duration == 7);
    CHECK(schedule_asap(Circuit(3)).duration == 0);
}

TEST_CASE("idle top qubit produces a gap", "[schedule][gaps]") {
    // Qubit 0 acts, waits while qubits 1 and 2 interact, then acts again.
    Circuit c(3);
    c.add(Gate::cx(0, 1));
    for (int i = 0; i < 3; ++i) c.add(Gate::cx(1, 2));
    c.add(Gate::cx(0, 1));
    const ScheduledCircuit sc = schedule_asap(c);
    const auto gaps = find_gaps(sc);
    REQUIRE(gaps.size() == 1);
    CHECK(gaps[0] == Gap{0, 1, 3});
}

TEST_CASE("find_gaps examples", "[gaps]") {
    Circuit dense(2);
    for (int i = 0; i < 4; ++i) dense.add(Gate::cx(0, 1));
    CHECK(find_gaps(schedule_asap(dense)).empty());

    ScheduledCircuit sc;
    sc.qubit_count = 3;
    sc.gates = {{Gate::u3(0, 1, 0, 0), 0}, {Gate::u3(0, 1, 0, 0), 5}, {Gate::u3(1, 1, 0, 0), 3}};
    sc.normalize();
    const auto gaps = find_gaps(sc);
    REQUIRE(gaps.size() == 1);
    CHECK(gaps[0] == Gap{0, 1, 4});
    CHECK(sc.duration == 6);
}

TEST_CASE("gaps are sorted, maximal and interior", "[gaps][property]") {
    Rng rng(41);
    const CouplingMap map = CouplingMap::t_shape();
    for (int trial = 0; trial < 50; ++trial) {
        const ScheduledCircuit sc = transpile(random_mixed_circuit(5, 30, rng), map).scheduled;
        std::vector<std::vector<int>> busy(5, std::vector<int>(sc.duration, 0));
        for (const auto &pg : sc.gates) {
            busy[pg.gate.qubits[0]][pg.step] = 1;
            if (pg.gate.arity() == 2) busy[pg.gate.qubits[1]][pg.step] = 1;
        }
        std::vector<Gap> expect;
        for (int q = 0; q < 5; ++q) {
            int first = -1;
            int last = -1;
            for (int s = 0; s < sc.duration; ++s) {
                if (busy[q][s]) {
                    if (first < 0) first = s;
                    last = s;
                }
            }
            for (int s = first + 1; first >= 0 && s < last;) {
                if (busy[q][s]) {
                    ++s;
                    continue;
                }
                int e = s;
                while (!busy[q][e]) ++e;
                expect.push_back(Gap{q, s, e - s});
                s = e;
            }
        }
        CHECK(find_gaps(sc) == expect);
    }
}

TEST_CASE("scheduling keeps every gate exactly once", "[schedule][property]") {
    Rng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const Circuit c = decompose_to_native(random_mixed_circuit(4, 30, rng));
        const ScheduledCircuit sc = schedule_asap(c);
        CHECK_NOTHROW(sc.validate());
        const Circuit flat = sc.flatten();
        CHECK(gate_keys(flat) == gate_keys(c));
        CHECK(oracle::phase_distance(oracle::circuit_matrix(flat), oracle::circuit_matrix(c)) < 1e-9);
    }
}

TEST_CASE("overlapping placements are rejected", "[schedule]") {
    ScheduledCircuit sc;
    sc.qubit_count = 2;
    sc.gates = {{Gate::u3(0, 1, 0, 0), 0}, {Gate::cx(0, 1), 0}};
    sc.normalize();
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
}

TEST_CASE("end-to-end transpile is equivalent on random 5-qubit circuits", "[transpile][property]") {
    Rng rng(2718);
    const CouplingMap map = CouplingMap::t_shape();
    for (int trial = 0; trial < 100; ++trial) {
        const Circuit c = random_mixed_circuit(5, 25, rng);
        const TranspileResult tr = transpile(c, map);
        const Circuit flat = tr.scheduled.flatten();
        CHECK(native_only(flat));
        for (const auto &g : flat.gates) {
            if (g.kind == GateKind::CX) CHECK(map.connected(g.qubits[0], g.qubits[1]));
        }
        const oracle::Mat lhs = oracle::permutation_matrix(tr.final_permutation).adjoint() * oracle::circuit_matrix(flat);
        CHECK(oracle::phase_distance(lhs, oracle::circuit_matrix(c)) < 1e-6);
    }
}

TEST_CASE("routed UU-dagger depth is in a plausible band", "[transpile]") {
    Rng rng(5);
    const CouplingMap map = CouplingMap::t_shape();
    double total = 0;
    const int count = 100;
    for (int i = 0; i < count; ++i) {
        const Circuit u = random_u_circuit(5, 5, rng);
        const TranspileResult tr = transpile(concat(u, inverse_circuit(u)), map);
        total += tr.scheduled.duration;
        CHECK(tr.scheduled.duration >= 10);
        CHECK(tr.scheduled.duration <= 80);
    }
    const double mean = total / count;
    CHECK(mean >= 20);
    CHECK(mean <= 50);
}
