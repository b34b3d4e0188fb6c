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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "noiseforge/experiment.h"
#include "noiseforge/random_circuits.h"
#include "noiseforge/transpiler.h"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace noiseforge;

namespace {

py::array_t<double> image_to_array(const CircuitImage &img) {
    py::array_t<double> out({img.channels, img.height, img.width});
    std::copy(img.data.begin(), img.data.end(), out.mutable_data());
    return out;
}

CircuitImage array_to_image(const py::array_t<double, py::array::c_style | py::array::forcecast> &a) {
    if (a.ndim() != 3) throw std::invalid_argument("image must be a (channels, height, width) array");
    CircuitImage img(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), static_cast<int>(a.shape(2)));
    std::copy(a.data(), a.data() + a.size(), img.data.begin());
    return img;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "noiseforge core: circuits, transpiler, noisy simulator, pairwise noise model and gap compiler";

    py::class_<CouplingMap>(m, "CouplingMap")
        .def(py::init<std::string, int, std::vector<std::pair<int, int>>>(), "name"_a, "qubit_count"_a, "edges"_a)
        .def_static("t_shape", &CouplingMap::t_shape)
        .def_static("bowtie", &CouplingMap::bowtie)
        .def_static("from_name_or_file", &CouplingMap::from_name_or_file, "name_or_path"_a)
        .def_property_readonly("name", &CouplingMap::name)
        .def_property_readonly("qubit_count", &CouplingMap::qubit_count)
        .def_property_readonly("edges", &CouplingMap::edges)
        .def("connected", &CouplingMap::connected, "a"_a, "b"_a)
        .def("to_text", &CouplingMap::to_text);

    py::class_<Circuit>(m, "Circuit")
        .def(py::init<int>(), "qubit_count"_a)
        .def_static("parse", [](const std::string &text) { return parse_circuit(text); }, "text"_a)
        .def_static("read", &read_circuit_file, "path"_a)
        .def_static("random_u", [](int n, int cycles, std::uint64_t seed) {
            Rng rng(seed);
            return random_u_circuit(n, cycles, rng);
        }, "qubits"_a, "cycles"_a, "seed"_a)
        .def("write", [](const Circuit &c, const std::string &path) { write_circuit_file(path, c); }, "path"_a)
        .def("to_text", [](const Circuit &c) { return to_text(c); })
        .def("to_qasm", [](const Circuit &c) { return to_qasm2(c); })
        .def("inverse", [](const Circuit &c) { return inverse_circuit(c); })
        .def("__add__", [](const Circuit &a, const Circuit &b) { return concat(a, b); })
        .def("__len__", [](const Circuit &c) { return c.gates.size(); })
        .def("__eq__", [](const Circuit &a, const Circuit &b) { return a == b; })
        .def_readonly("qubit_count", &Circuit::qubit_count)
        .def_readwrite("metadata", &Circuit::metadata)
        .def("depth", &Circuit::depth);

    py::class_<ScheduledCircuit>(m, "ScheduledCircuit")
        .def_readonly("qubit_count", &ScheduledCircuit::qubit_count)
        .def_readonly("duration", &ScheduledCircuit::duration)
        .def("flatten", &ScheduledCircuit::flatten)
        .def("gaps", [](const ScheduledCircuit &sc) {
            std::vector<std::tuple<int, int, int>> out;
            for (const Gap &g : find_gaps(sc)) out.emplace_back(g.qubit, g.start, g.length);
            return out;
        }, "List of (qubit, start, length).")
        .def("__len__", [](const ScheduledCircuit &sc) { return sc.gates.size(); })
        .def("__eq__", [](const ScheduledCircuit &a, const ScheduledCircuit &b) { return a == b; });

    m.def("schedule_asap", &schedule_asap, "circuit"_a);
    m.def("transpile", [](const Circuit &c, const CouplingMap &map) {
        TranspileResult r = transpile(c, map);
        return py::make_tuple(r.scheduled, r.final_permutation);
    }, "circuit"_a, "coupling"_a, "Returns (scheduled circuit, final permutation).");

    py::class_<DeviceModel>(m, "DeviceModel")
        .def_readonly("name", &DeviceModel::name)
        .def_readonly("coupling", &DeviceModel::coupling)
        .def_readwrite("drift_rate", &DeviceModel::drift_rate)
        .def("to_json", [](const DeviceModel &d) { return device_to_json(d); })
        .def_static("from_json", &device_from_json, "text"_a)
        .def("hash", [](const DeviceModel &d) { return device_hash(d); });
    m.def("make_random_device", [](const std::string &name, std::uint64_t seed, const CouplingMap &map) {
        return make_random_device(name, seed, map);
    }, "name"_a, "seed"_a, "coupling"_a);
    m.def("zero_noise_device", &zero_noise_device, "coupling"_a, "name"_a = "ideal");

    m.def("simulate", [](const ScheduledCircuit &sc, const DeviceModel &dm, std::uint64_t shots, std::uint64_t seed) {
        const SimulationMode mode = shots > 0 ? SimulationMode::shots_mode(shots, seed) : SimulationMode::exact();
        const OutputDistribution p = simulate(sc, dm, mode);
        return py::array_t<double>(static_cast<py::ssize_t>(p.probs.size()), p.probs.data());
    }, "scheduled"_a, "device"_a, "shots"_a = 0, "seed"_a = 0,
          "Output distribution over basis states, qubit 0 as the most significant bit.");
    m.def("measure_noise", [](const ScheduledCircuit &sc, const DeviceModel &dm) { return measure_noise(sc, dm); },
          "scheduled"_a, "device"_a, "Expected Hamming weight of the output.");

    m.def("encode_image", [](const ScheduledCircuit &sc, int width) { return image_to_array(encode_image(sc, width)); },
          "scheduled"_a, "width"_a = kDefaultImageWidth);

    m.def("fill_gaps_random", [](const ScheduledCircuit &sc, std::uint64_t seed) {
        Rng rng(seed);
        return fill_gaps_random(sc, rng);
    }, "scheduled"_a, "seed"_a);
    m.def("fill_gaps_xyxy", &fill_gaps_xyxy, "scheduled"_a);
    m.def("xyxy_eligible", &xyxy_eligible, "scheduled"_a);

    py::class_<Network>(m, "Network")
        .def_static("he_uniform", [](std::uint64_t seed, int width) {
            NetworkDims d;
            d.width = width;
            return Network::he_uniform(d, seed);
        }, "seed"_a, "width"_a = kDefaultImageWidth)
        .def_static("load", &load_weights, "path"_a)
        .def("save", [](const Network &n, const std::string &path) { save_weights(n, path); }, "path"_a)
        .def("forward", [](const Network &n, const py::array_t<double, py::array::c_style | py::array::forcecast> &img) {
            return n.forward(array_to_image(img));
        }, "image"_a)
        .def("predict_diff", [](const Network &n, const py::array_t<double, py::array::c_style | py::array::forcecast> &a,
                                const py::array_t<double, py::array::c_style | py::array::forcecast> &b) {
            return n.predict_diff(array_to_image(a), array_to_image(b));
        }, "a"_a, "b"_a)
        .def_property_readonly("parameter_count", &Network::parameter_count)
        .def("__eq__", [](const Network &a, const Network &b) { return a == b; });

    m.def("compile", [](const Circuit &c, const Network &net, const CouplingMap &map, int candidates,
                        std::uint64_t seed, bool include_base) {
        CompileConfig cfg{candidates, seed, net.dims().width, include_base};
        CompileResult r = compile(c, net, map, cfg);
        return py::dict("base"_a = r.base, "winner"_a = r.winner, "final_permutation"_a = r.final_permutation,
                        "report"_a = r.report.to_json());
    }, "circuit"_a, "network"_a, "coupling"_a, "candidates"_a = 1000, "seed"_a = 0, "include_base"_a = true);

    py::class_<DatasetManifest>(m, "Dataset")
        .def_readonly("device_name", &DatasetManifest::device_name)
        .def_readonly("device_hash", &DatasetManifest::device_hash)
        .def("records", [](const DatasetManifest &ds) {
            py::list out;
            for (const auto &r : ds.records) {
                out.append(py::dict("base"_a = r.base_id, "variant"_a = r.variant_id, "split"_a = split_name(r.split),
                                    "noise"_a = r.noise, "file"_a = r.circuit_file));
            }
            return out;
        })
        .def("circuit", [](const DatasetManifest &ds, std::size_t i) { return ds.records.at(i).circuit; }, "index"_a)
        .def("to_json", &DatasetManifest::to_json)
        .def("write", [](const DatasetManifest &ds, const std::string &dir) { write_dataset(ds, dir); }, "dir"_a)
        .def_static("read", &read_dataset, "dir"_a);

    m.def("gen_dataset", [](const DeviceModel &dm, std::uint64_t seed, int bases, int variants, int train, int val,
                            int test, int cycles) {
        DatasetConfig cfg;
        cfg.seed = seed;
        cfg.bases = bases;
        cfg.variants = variants;
        cfg.train = train;
        cfg.val = val;
        cfg.test = test;
        cfg.cycles = cycles;
        py::gil_scoped_release release;
        return gen_dataset(dm, cfg);
    }, "device"_a, "seed"_a, "bases"_a = 200, "variants"_a = 16, "train"_a = 160, "val"_a = 20, "test"_a = 20,
          "cycles"_a = 5);
    m.def("relabel_dataset", &relabel_dataset, "dataset"_a, "device"_a);

    m.def("train", [](const DatasetManifest &ds, std::uint64_t seed, int epochs, double lr, int pairs, int patience) {
        TrainConfig cfg;
        cfg.seed = seed;
        cfg.max_epochs = epochs;
        cfg.learning_rate = lr;
        cfg.patience = patience;
        ModelTraining mt;
        {
            py::gil_scoped_release release;
            mt = train_on_dataset(ds, cfg, pairs);
        }
        py::list history;
        for (const auto &e : mt.result.history) {
            history.append(py::dict("epoch"_a = e.epoch, "learning_rate"_a = e.learning_rate,
                                    "train_mse"_a = e.train_mse, "val_mse"_a = e.val_mse));
        }
        return py::make_tuple(mt.result.network, history);
    }, "dataset"_a, "seed"_a, "epochs"_a = 200, "lr"_a = 0.01, "pairs"_a = 20, "patience"_a = 10,
          "Returns (network, per-epoch history).");

    m.def("r_squared", &r_squared, "truth"_a, "predicted"_a);
    m.def("bootstrap_ci", [](const std::vector<double> &x, int resamples, double level, std::uint64_t seed) {
        const Interval ci = bootstrap_ci(x, resamples, level, seed);
        return py::make_tuple(ci.lo, ci.hi);
    }, "samples"_a, "resamples"_a = 10000, "level"_a = 0.95, "seed"_a = 0);
    m.def("percent_improvement", &percent_improvement, "base_noise"_a, "compiled_noise"_a);
}
