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
#include <numeric>

#include "noiseforge/encoding.h"
#include "noiseforge/random_circuits.h"
#include "noiseforge/transpiler.h"
#include "oracles.h"

using namespace noiseforge;
using oracle::pi;

namespace {

ScheduledCircuit place(int n, std::vector<PlacedGate> gates) {
    ScheduledCircuit sc;
    sc.qubit_count = n;
    sc.gates = std::move(gates);
    sc.normalize();
    return sc;
}

ScheduledCircuit random_schedule(Rng &rng) {
    const CouplingMap map = CouplingMap::t_shape();
    const Circuit u = random_u_circuit(5, 3, rng);
    return transpile(concat(u, inverse_circuit(u)), map).scheduled;
}

// A uniformly chosen linearization of the dependency DAG of c.
Circuit random_topological_order(const Circuit &c, Rng &rng) {
    const std::size_t m = c.gates.size();
    std::vector<std::vector<std::size_t>> succ(m);
    std::vector<int> indeg(m, 0);
    std::vector<int> last(c.qubit_count, -1);
    for (std::size_t i = 0; i < m; ++i) {
        const Gate &g = c.gates[i];
        std::vector<int> qs{g.qubits[0]};
        if (g.arity() == 2) qs.push_back(g.qubits[1]);
        for (int q : qs) {
            if (last[q] >= 0) {
                succ[static_cast<std::size_t>(last[q])].push_back(i);
                ++indeg[i];
            }
            last[q] = static_cast<int>(i);
        }
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < m; ++i) {
        if (indeg[i] == 0) ready.push_back(i);
    }
    Circuit out(c.qubit_count);
    while (!ready.empty()) {
        const std::size_t k = uniform_index(rng, ready.size());
        const std::size_t i = ready[k];
        ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(k));
        out.add(c.gates[i]);
        for (std::size_t s : succ[i]) {
            if (--indeg[s] == 0) ready.push_back(s);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("canonical order examples", "[canonical]") {
    Circuit c(2);
    c.add(Gate::u1(1, 0.1)).add(Gate::u1(0, 0.2));
    const Circuit o = canonical_order(c);
    CHECK(o.gates[0].qubits[0] == 0);
    CHECK(o.gates[1].qubits[0] == 1);

    Circuit chain(1);
    for (int i = 0; i < 5; ++i) chain.add(Gate::u1(0, 0.1 * i));
    CHECK(canonical_order(chain).gates == chain.gates);
}

TEST_CASE("canonical order is invariant under DAG-preserving shuffles", "[canonical][property]") {
    Rng rng(7);
    const Circuit c = random_schedule(rng).flatten();
    const Circuit ref = canonical_order(c);
    const CircuitImage ref_img = encode_image(schedule_asap(ref));
    for (int i = 0; i < 100; ++i) {
        const Circuit shuffled = random_topological_order(c, rng);
        const Circuit o = canonical_order(shuffled);
        CHECK(o.gates == ref.gates);
        CHECK(encode_image(schedule_asap(o)) == ref_img);
    }
}

TEST_CASE("empty circuit encodes to zeros", "[encode]") {
    const CircuitImage img = encode_image(place(5, {}));
    CHECK(img.channels == 8);
    CHECK(img.height == 5);
    CHECK(img.width == 64);
    CHECK(std::all_of(img.data.begin(), img.data.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("single U3(pi, 0, pi) pixel", "[encode]") {
    const CircuitImage img = encode_image(place(5, {{Gate::u3(0, pi, 0, pi), 0}}));
    CHECK(img.at(kChanU3, 0, 0) == 1.0);
    CHECK(img.at(kChanTheta, 0, 0) == 0.5);
    // lambda = pi is written as well; phi = 0 normalizes to 0.
    CHECK(img.at(kChanLambda, 0, 0) == 0.5);
    CHECK(img.at(kChanPhi, 0, 0) == 0.0);
    for (int c = 0; c < 8; ++c) {
        for (int h = 0; h < 5; ++h) {
            for (int w = 0; w < 64; ++w) {
                if (h == 0 && w == 0) continue;
                CHECK(img.at(c, h, w) == 0.0);
            }
        }
    }
    std::size_t nonzero = 0;
    for (double v : img.data) nonzero += v != 0.0;
    CHECK(nonzero == 3);
}

TEST_CASE("CX pixels and roles", "[encode]") {
    std::vector<PlacedGate> gates;
    for (int s = 0; s < 3; ++s) gates.push_back({Gate::u1(2, 0.3), s});
    gates.push_back({Gate::cx(0, 1), 3});
    const CircuitImage img = encode_image(place(5, gates));
    CHECK(img.at(kChanCX, 0, 3) == 1.0);
    CHECK(img.at(kChanCX, 1, 3) == 1.0);
    CHECK(img.at(kChanRole, 0, 3) == 1.0);
    CHECK(img.at(kChanRole, 1, 3) == -1.0);
    CHECK(img.at(kChanCX, 2, 3) == 0.0);
    CHECK(img.at(kChanU1, 2, 0) == 1.0);
    CHECK(img.at(kChanLambda, 2, 0) == Catch::Approx(0.3 / (2 * pi)).margin(1e-15));
    CHECK(img.at(kChanTheta, 2, 0) == 0.0);
}

TEST_CASE("U2 writes phi and lambda only", "[encode]") {
    const CircuitImage img = encode_image(place(1, {{Gate::u2(0, -pi / 2, pi / 4), 0}}), 4);
    CHECK(img.at(kChanU2, 0, 0) == 1.0);
    CHECK(img.at(kChanTheta, 0, 0) == 0.0);
    CHECK(img.at(kChanPhi, 0, 0) == Catch::Approx(0.75).margin(1e-15));
    CHECK(img.at(kChanLambda, 0, 0) == Catch::Approx(0.125).margin(1e-15));
}

TEST_CASE("angle normalization", "[encode]") {
    CHECK(normalize_angle(0) == 0.0);
    CHECK(normalize_angle(pi) == 0.5);
    CHECK(normalize_angle(-pi / 2) == Catch::Approx(0.75).margin(1e-15));
    CHECK(normalize_angle(2 * pi) == 0.0);
    CHECK(normalize_angle(5 * pi) == Catch::Approx(0.5).margin(1e-12));
    for (double a = -20; a < 20; a += 0.37) {
        const double v = normalize_angle(a);
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("image invariants on transpiled circuits", "[encode][property]") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const ScheduledCircuit sc = random_schedule(rng);
        const CircuitImage img = encode_image(sc);
        CHECK(encode_image(sc) == img);
        for (int h = 0; h < 5; ++h) {
            for (int w = 0; w < 64; ++w) {
                const double types = img.at(kChanU1, h, w) + img.at(kChanU2, h, w) + img.at(kChanU3, h, w) +
                                     img.at(kChanCX, h, w);
                CHECK((types == 0.0 || types == 1.0));
                if (types == 0.0) {
                    for (int c = kChanTheta; c <= kChanRole; ++c) CHECK(img.at(c, h, w) == 0.0);
                }
                if (img.at(kChanTheta, h, w) != 0.0) CHECK(img.at(kChanU3, h, w) == 1.0);
                if (img.at(kChanPhi, h, w) != 0.0) {
                    CHECK(img.at(kChanU2, h, w) + img.at(kChanU3, h, w) == 1.0);
                }
                if (img.at(kChanRole, h, w) != 0.0) CHECK(img.at(kChanCX, h, w) == 1.0);
                if (w >= sc.duration) CHECK(types == 0.0);
            }
        }
        for (double v : img.data) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("encoding is injective at a fixed schedule", "[encode][property]") {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const ScheduledCircuit sc = random_schedule(rng);
        const CircuitImage img = encode_image(sc);
        const std::size_t k = uniform_index(rng, sc.gates.size());

        // Angle change.
        ScheduledCircuit angle = sc;
        Gate &g = angle.gates[k].gate;
        if (g.kind != GateKind::CX) {
            g.params[param_count(g.kind) - 1] += 1e-6;
            CHECK(encode_image(angle) != img);
        }

        // Kind change on a single-qubit gate.
        ScheduledCircuit kind = sc;
        for (auto &pg : kind.gates) {
            if (pg.gate.kind == GateKind::U3) {
                pg.gate = Gate::u2(pg.gate.qubits[0], pg.gate.params[1], pg.gate.params[2]);
                CHECK(encode_image(kind) != img);
                break;
            }
        }

        // Placement change: append a gate one step past the end.
        ScheduledCircuit moved = sc;
        moved.gates.push_back({Gate::u1(0, 0.5), sc.duration});
        moved.normalize();
        CHECK(encode_image(moved) != img);
    }

    // Same gate at two different steps.
    const auto a = encode_image(place(2, {{Gate::u3(0, 1, 2, 3), 0}, {Gate::u1(0, 0.5), 2}}));
    const auto b = encode_image(place(2, {{Gate::u3(0, 1, 2, 3), 1}, {Gate::u1(0, 0.5), 2}}));
    CHECK(a != b);
    // CX direction is visible through the role channel.
    const auto c = encode_image(place(2, {{Gate::cx(0, 1), 0}}));
    const auto d = encode_image(place(2, {{Gate::cx(1, 0), 0}}));
    CHECK(c != d);
}

TEST_CASE("encoding errors", "[encode]") {
    std::vector<PlacedGate> long_chain;
    for (int s = 0; s < 65; ++s) long_chain.push_back({Gate::u1(0, 0.1), s});
    CHECK_THROWS_AS(encode_image(place(1, long_chain)), EncodingOverflow);
    CHECK_NOTHROW(encode_image(place(1, long_chain), 65));
    CHECK_THROWS_AS(encode_image(place(1, {{Gate::single(GateKind::SqrtX, 0), 0}})), std::invalid_argument);
}

TEST_CASE("image file round trip", "[encode][io]") {
    Rng rng(17);
    const CircuitImage img = encode_image(random_schedule(rng));
    const auto path = std::filesystem::temp_directory_path() / "noiseforge_image.bin";
    write_image_file(path.string(), img);
    CHECK(std::filesystem::file_size(path) == 4 + 12 + 4 * img.size());
    const CircuitImage back = read_image_file(path.string());
    CHECK(back.channels == img.channels);
    CHECK(back.height == img.height);
    CHECK(back.width == img.width);
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(back.data[i] == static_cast<double>(static_cast<float>(img.data[i])));
    std::filesystem::remove(path);
    CHECK_THROWS(read_image_file("/nonexistent/image.bin"));
}
