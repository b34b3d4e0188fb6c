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

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>

// Little-endian scalar I/O for the binary weight and image formats.

namespace noiseforge {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

namespace detail {

template <typename U>
U to_little(U v) {
    if constexpr (std::endian::native == std::endian::big) {
        U r = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            r = static_cast<U>((r << 8) | ((v >> (8 * i)) & 0xFF));
        }
        return r;
    } else {
        return v;
    }
}

template <typename U>
void write_raw(std::ostream &out, U v) {
    U le = to_little(v);
    out.write(reinterpret_cast<const char *>(&le), sizeof(U));
}

template <typename U>
U read_raw(std::istream &in) {
    U le;
    if (!in.read(reinterpret_cast<char *>(&le), sizeof(U))) {
        throw std::runtime_error("unexpected end of file");
    }
    return to_little(le);
}

}  // namespace detail

inline void write_u32(std::ostream &out, std::uint32_t v) {
    detail::write_raw(out, v);
}
inline void write_f32(std::ostream &out, float v) {
    detail::write_raw(out, std::bit_cast<std::uint32_t>(v));
}
inline void write_f64(std::ostream &out, double v) {
    detail::write_raw(out, std::bit_cast<std::uint64_t>(v));
}
inline std::uint32_t read_u32(std::istream &in) {
    return detail::read_raw<std::uint32_t>(in);
}
inline float read_f32(std::istream &in) {
    return std::bit_cast<float>(detail::read_raw<std::uint32_t>(in));
}
inline double read_f64(std::istream &in) {
    return std::bit_cast<double>(detail::read_raw<std::uint64_t>(in));
}

}  // namespace noiseforge
