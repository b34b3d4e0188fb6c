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

#include <stdexcept>
#include <string>
#include <vector>

#include "noiseforge/schedule.h"

namespace noiseforge {

/// Channel layout of a circuit image.
enum Channel : int {
    kChanU1 = 0,
    kChanU2 = 1,
    kChanU3 = 2,
    kChanCX = 3,
    kChanTheta = 4,
    kChanPhi = 5,
    kChanLambda = 6,
    kChanRole = 7,
};
inline constexpr int kImageChannels = 8;
inline constexpr int kDefaultImageWidth = 64;

/// C x H x W tensor, row-major with C outermost and W innermost.
struct CircuitImage {
    int channels = kImageChannels;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    CircuitImage() = default;
    CircuitImage(int c, int h, int w) : channels(c), height(h), width(w), data(static_cast<std::size_t>(c) * h * w) {}

    double &at(int c, int h, int w) { return data[(static_cast<std::size_t>(c) * height + h) * width + w]; }
    double at(int c, int h, int w) const { return data[(static_cast<std::size_t>(c) * height + h) * width + w]; }
    std::size_t size() const { return data.size(); }

    bool operator==(const CircuitImage &other) const = default;
};

/// Thrown by encode_image when a schedule is longer than the image.
class EncodingOverflow : public std::length_error {
   public:
    using std::length_error::length_error;
};

/// Deterministic topological order: gates sorted by (ASAP step, lowest qubit).
/// Any two linearizations of the same dependency DAG map to the same list.
Circuit canonical_order(const Circuit &c);

/// Angle reduced into [0, 2*pi) and divided by 2*pi.
double normalize_angle(double a);

/// One pixel per (qubit, step). Type channels are one-hot; angle channels hold
/// the gate's own parameters (U1: lambda; U2: phi, lambda; U3: all three);
/// CX also writes +1 (control) / -1 (target) in the role channel. Columns past
/// the duration stay zero. Non-native kinds are rejected.
CircuitImage encode_image(const ScheduledCircuit &sc, int width = kDefaultImageWidth);

/// Binary dump: "DQIM", then C, H, W as u32 LE, then C*H*W f32 LE.
void write_image_file(const std::string &path, const CircuitImage &img);
CircuitImage read_image_file(const std::string &path);

}  // namespace noiseforge
