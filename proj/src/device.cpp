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

#include "noiseforge/device.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "noiseforge/rng.h"

namespace noiseforge {

using nlohmann::json;

namespace {

void require(bool ok, const std::string &msg) {
    if (!ok) {
        throw std::invalid_argument("device: " + msg);
    }
}

bool is_probability(double p) {
    return p >= 0.0 && p <= 1.0;
}

void check_range(double lo, double hi, const char *what) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi, std::string("range for ") + what + " is empty");
}

json coupling_to_json(const CouplingMap &map) {
    json edges = json::array();
    for (auto [a, b] : map.edges()) {
        edges.push_back({a, b});
    }
    return json{{"name", map.name()}, {"qubits", map.qubit_count()}, {"edges", edges}};
}

CouplingMap coupling_from_json(const json &j) {
    if (j.is_string()) {
        return CouplingMap::from_name_or_file(j.get<std::string>());
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto &e : j.at("edges")) {
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    return CouplingMap(j.at("name").get<std::string>(), j.at("qubits").get<int>(), std::move(edges));
}

}  // namespace

void DeviceModel::validate() const {
    const auto n = static_cast<std::size_t>(qubit_count());
    require(t1.size() == n && t2.size() == n && drift_rate.size() == n, "per-qubit arrays must match qubit count");
    require(readout_p1_given_0.size() == n && readout_p0_given_1.size() == n, "readout arrays must match qubit count");
    require(crosstalk.size() == coupling.edges().size(), "crosstalk needs one rate per coupling edge");
    for (std::size_t q = 0; q < n; ++q) {
        require(t1[q] > 0 && t2[q] > 0, "T1 and T2 must be positive");
        require(t2[q] <= 2 * t1[q] * (1 + 1e-12), "T2 must not exceed 2*T1 on qubit " + std::to_string(q));
        require(std::isfinite(drift_rate[q]), "drift rate must be finite");
        require(is_probability(readout_p1_given_0[q]) && is_probability(readout_p0_given_1[q]),
                "readout flip probabilities must lie in [0,1]");
    }
    for (double z : crosstalk) {
        require(std::isfinite(z), "crosstalk rate must be finite");
    }
    require(is_probability(p1q) && is_probability(p2q), "depolarizing probabilities must lie in [0,1]");
    require(std::isfinite(over_rotation), "over-rotation must be finite");
    require(t_1q > 0 && t_2q > 0, "gate durations must be positive");
}

void DeviceRanges::validate() const {
    check_range(t1_lo, t1_hi, "T1");
    check_range(t2_lo, t2_hi, "T2");
    check_range(drift_lo, drift_hi, "drift");
    check_range(crosstalk_lo, crosstalk_hi, "crosstalk");
    check_range(p1q_lo, p1q_hi, "p1q");
    check_range(p2q_lo, p2q_hi, "p2q");
    check_range(over_rotation_lo, over_rotation_hi, "over-rotation");
    check_range(readout_lo, readout_hi, "readout");
    require(t1_lo > 0 && t2_lo > 0, "T1/T2 ranges must be positive");
    require(p1q_lo >= 0 && p1q_hi <= 1 && p2q_lo >= 0 && p2q_hi <= 1, "depolarizing ranges must lie in [0,1]");
    require(readout_lo >= 0 && readout_hi <= 1, "readout ranges must lie in [0,1]");
    require(t_1q > 0 && t_2q > 0, "gate durations must be positive");
}

DeviceModel zero_noise_device(const CouplingMap &map, std::string name) {
    DeviceModel dm;
    dm.name = std::move(name);
    dm.coupling = map;
    const auto n = static_cast<std::size_t>(map.qubit_count());
    dm.t1.assign(n, INFINITY);
    dm.t2.assign(n, INFINITY);
    dm.drift_rate.assign(n, 0.0);
    dm.crosstalk.assign(map.edges().size(), 0.0);
    dm.readout_p1_given_0.assign(n, 0.0);
    dm.readout_p0_given_1.assign(n, 0.0);
    return dm;
}

DeviceModel make_random_device(const std::string &name, std::uint64_t seed, const CouplingMap &map,
                               const DeviceRanges &ranges) {
    ranges.validate();
    Rng rng(mix_seed(seed, stable_hash(name)));
    DeviceModel dm;
    dm.name = name;
    dm.seed = seed;
    dm.coupling = map;
    const int n = map.qubit_count();
    for (int q = 0; q < n; ++q) {
        double t1 = uniform_real(rng, ranges.t1_lo, ranges.t1_hi);
        double t2 = std::min(uniform_real(rng, ranges.t2_lo, ranges.t2_hi), 2 * t1);
        dm.t1.push_back(t1);
        dm.t2.push_back(t2);
        dm.drift_rate.push_back(uniform_real(rng, ranges.drift_lo, ranges.drift_hi));
        dm.readout_p1_given_0.push_back(uniform_real(rng, ranges.readout_lo, ranges.readout_hi));
        dm.readout_p0_given_1.push_back(uniform_real(rng, ranges.readout_lo, ranges.readout_hi));
    }
    for (std::size_t e = 0; e < map.edges().size(); ++e) {
        dm.crosstalk.push_back(uniform_real(rng, ranges.crosstalk_lo, ranges.crosstalk_hi));
    }
    dm.p1q = uniform_real(rng, ranges.p1q_lo, ranges.p1q_hi);
    dm.p2q = uniform_real(rng, ranges.p2q_lo, ranges.p2q_hi);
    dm.over_rotation = uniform_real(rng, ranges.over_rotation_lo, ranges.over_rotation_hi);
    dm.t_1q = ranges.t_1q;
    dm.t_2q = ranges.t_2q;
    dm.validate();
    return dm;
}

DeviceModel make_device(const std::string &config_json) {
    json j;
    try {
        j = json::parse(config_json);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument(std::string("device config is not valid JSON: ") + e.what());
    }
    if (!j.contains("ranges")) {
        return device_from_json(config_json);
    }
    DeviceRanges r;
    const json &jr = j.at("ranges");
    auto pick = [&](const char *key, double &field) {
        if (jr.contains(key)) {
            field = jr.at(key).get<double>();
        }
    };
    pick("t1_lo", r.t1_lo);
    pick("t1_hi", r.t1_hi);
    pick("t2_lo", r.t2_lo);
    pick("t2_hi", r.t2_hi);
    pick("drift_lo", r.drift_lo);
    pick("drift_hi", r.drift_hi);
    pick("crosstalk_lo", r.crosstalk_lo);
    pick("crosstalk_hi", r.crosstalk_hi);
    pick("p1q_lo", r.p1q_lo);
    pick("p1q_hi", r.p1q_hi);
    pick("p2q_lo", r.p2q_lo);
    pick("p2q_hi", r.p2q_hi);
    pick("over_rotation_lo", r.over_rotation_lo);
    pick("over_rotation_hi", r.over_rotation_hi);
    pick("readout_lo", r.readout_lo);
    pick("readout_hi", r.readout_hi);
    pick("t_1q", r.t_1q);
    pick("t_2q", r.t_2q);
    CouplingMap map = j.contains("coupling") ? coupling_from_json(j.at("coupling")) : CouplingMap::t_shape();
    auto dm = make_random_device(j.value("name", std::string("device")), j.value("seed", std::uint64_t{0}), map, r);
    dm.crosstalk_always_on = j.value("crosstalk_always_on", false);
    return dm;
}

std::string device_to_json(const DeviceModel &dm) {
    // Infinite coherence times (the ideal device) are written as null.
    auto times = [](const std::vector<double> &v) {
        json a = json::array();
        for (double x : v) {
            a.push_back(std::isinf(x) ? json(nullptr) : json(x));
        }
        return a;
    };
    json j{
        {"name", dm.name},
        {"seed", dm.seed},
        {"coupling", coupling_to_json(dm.coupling)},
        {"t1_us", times(dm.t1)},
        {"t2_us", times(dm.t2)},
        {"drift_rad_per_us", dm.drift_rate},
        {"crosstalk_rad_per_us", dm.crosstalk},
        {"crosstalk_always_on", dm.crosstalk_always_on},
        {"p1q", dm.p1q},
        {"p2q", dm.p2q},
        {"over_rotation_rad", dm.over_rotation},
        {"readout_p1_given_0", dm.readout_p1_given_0},
        {"readout_p0_given_1", dm.readout_p0_given_1},
        {"t_1q_us", dm.t_1q},
        {"t_2q_us", dm.t_2q},
    };
    return j.dump(2) + "\n";
}

DeviceModel device_from_json(const std::string &text) {
    DeviceModel dm;
    try {
        json j = json::parse(text);
        auto times = [](const json &a) {
            std::vector<double> v;
            for (const auto &x : a) {
                v.push_back(x.is_null() ? INFINITY : x.get<double>());
            }
            return v;
        };
        dm.name = j.at("name").get<std::string>();
        dm.seed = j.value("seed", std::uint64_t{0});
        dm.coupling = coupling_from_json(j.at("coupling"));
        dm.t1 = times(j.at("t1_us"));
        dm.t2 = times(j.at("t2_us"));
        dm.drift_rate = j.at("drift_rad_per_us").get<std::vector<double>>();
        dm.crosstalk = j.at("crosstalk_rad_per_us").get<std::vector<double>>();
        dm.crosstalk_always_on = j.value("crosstalk_always_on", false);
        dm.p1q = j.at("p1q").get<double>();
        dm.p2q = j.at("p2q").get<double>();
        dm.over_rotation = j.at("over_rotation_rad").get<double>();
        dm.readout_p1_given_0 = j.at("readout_p1_given_0").get<std::vector<double>>();
        dm.readout_p0_given_1 = j.at("readout_p0_given_1").get<std::vector<double>>();
        dm.t_1q = j.at("t_1q_us").get<double>();
        dm.t_2q = j.at("t_2q_us").get<double>();
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("device JSON: ") + e.what());
    }
    dm.validate();
    return dm;
}

DeviceModel read_device_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open device file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return make_device(ss.str());
}

void write_device_file(const std::string &path, const DeviceModel &dm) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write device file " + path);
    }
    out << device_to_json(dm);
}

}  // namespace noiseforge
