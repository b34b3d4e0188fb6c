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

#include "noiseforge/encoding.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "noiseforge/binary_io.h"

namespace noiseforge {

Circuit canonical_order(const Circuit &c) {
    ScheduledCircuit sc = schedule_asap(c);
    Circuit out = sc.flatten();
    out.metadata = c.metadata;
    return out;
}

double normalize_angle(double a) {
    return wrap_angle_positive(a) / kTwoPi;
}

CircuitImage encode_image(const ScheduledCircuit &sc, int width) {
    if (sc.duration > width) {
        throw EncodingOverflow("encode_image: schedule duration " + std::to_string(sc.duration) +
                               " exceeds image width " + std::to_string(width));
    }
    CircuitImage img(kImageChannels, sc.qubit_count, width);
    for (const auto &pg : sc.gates) {
        const Gate &g = pg.gate;
        const int t = pg.step;
        const int q = g.qubits[0];
        switch (g.kind) {
            case GateKind::U1:
                img.at(kChanU1, q, t) = 1;
                img.at(kChanLambda, q, t) = normalize_angle(g.params[0]);
                break;
            case GateKind::U2:
                img.at(kChanU2, q, t) = 1;
                img.at(kChanPhi, q, t) = normalize_angle(g.params[0]);
                img.at(kChanLambda, q, t) = normalize_angle(g.params[1]);
                break;
            case GateKind::U3:
                img.at(kChanU3, q, t) = 1;
                img.at(kChanTheta, q, t) = normalize_angle(g.params[0]);
                img.at(kChanPhi, q, t) = normalize_angle(g.params[1]);
                img.at(kChanLambda, q, t) = normalize_angle(g.params[2]);
                break;
            case GateKind::CX:
                img.at(kChanCX, g.qubits[0], t) = 1;
                img.at(kChanCX, g.qubits[1], t) = 1;
                img.at(kChanRole, g.qubits[0], t) = 1;
                img.at(kChanRole, g.qubits[1], t) = -1;
                break;
            default:
                throw std::invalid_argument("encode_image: gate " + std::string(gate_name(g.kind)) +
                                            " must be lowered to the native basis first");
        }
    }
    return img;
}

void write_image_file(const std::string &path, const CircuitImage &img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write image file " + path);
    }
    out.write("DQIM", 4);
    write_u32(out, static_cast<std::uint32_t>(img.channels));
    write_u32(out, static_cast<std::uint32_t>(img.height));
    write_u32(out, static_cast<std::uint32_t>(img.width));
    for (double v : img.data) {
        write_f32(out, static_cast<float>(v));
    }
}

CircuitImage read_image_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open image file " + path);
    }
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "DQIM", 4) != 0) {
        throw std::runtime_error("image file " + path + ": bad magic");
    }
    auto c = static_cast<int>(read_u32(in));
    auto h = static_cast<int>(read_u32(in));
    auto w = static_cast<int>(read_u32(in));
    if (c <= 0 || h <= 0 || w <= 0 || c > 64 || h > 64 || w > 4096) {
        throw std::runtime_error("image file " + path + ": implausible dimensions");
    }
    CircuitImage img(c, h, w);
    for (double &v : img.data) {
        v = read_f32(in);
    }
    return img;
}

}  // namespace noiseforge
