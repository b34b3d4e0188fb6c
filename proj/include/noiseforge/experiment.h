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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noiseforge/device.h"
#include "noiseforge/gap_compiler.h"
#include "noiseforge/network.h"
#include "noiseforge/simulator.h"

namespace noiseforge {

struct DatasetConfig {
    int bases = 200;
    /// Base circuit plus variants - 1 random fills per group.
    int variants = 16;
    int train = 160;
    int val = 20;
    int test = 20;
    int qubits = 5;
    int cycles = 5;
    int image_width = kDefaultImageWidth;
    SimulationMode labels = SimulationMode::exact();
    std::uint64_t seed = 0;

    void validate() const;
};

enum class Split { Train, Val, Test };
const char *split_name(Split s);
Split split_from_name(const std::string &name);

struct DatasetRecord {
    std::string circuit_file;
    int base_id = 0;
    int variant_id = 0;
    Split split = Split::Train;
    /// Mean number of ones per shot.
    double noise = 0;
    ScheduledCircuit circuit;
};

struct DatasetManifest {
    std::string device_name;
    std::string device_hash;
    DatasetConfig config;
    /// Bases whose first draw overflowed the image and were redrawn.
    std::vector<int> regenerated;
    std::vector<DatasetRecord> records;

    std::vector<int> base_ids(Split s) const;
    std::vector<const DatasetRecord *> records_in(Split s) const;
    /// Variant 0 of each base in the split, ordered by base id.
    std::vector<const DatasetRecord *> bases_in(Split s) const;

    /// JSON without circuits; circuit_file entries point into the dataset directory.
    std::string to_json() const;
};

/// Hex FNV-1a of the device's JSON form.
std::string device_hash(const DeviceModel &dm);

/// Mean ones per shot of a scheduled circuit on a device.
double measure_noise(const ScheduledCircuit &sc, const DeviceModel &dm, SimulationMode mode = SimulationMode::exact());

/// Base b draws random_u_circuit(qubits, cycles) followed by its inverse,
/// transpiles it onto the device's coupling map, and adds variants - 1 random
/// fills. Bases whose schedule exceeds the image width are redrawn from a fresh
/// seed. Splits partition base ids by a seeded permutation.
DatasetManifest gen_dataset(const DeviceModel &dm, const DatasetConfig &cfg);

/// The same circuits relabelled on another device sharing the coupling map.
DatasetManifest relabel_dataset(const DatasetManifest &ds, const DeviceModel &dm);

/// Writes manifest.json and circuits/b<base>_v<variant>.txt under `dir`.
void write_dataset(const DatasetManifest &ds, const std::string &dir);
DatasetManifest read_dataset(const std::string &dir);

/// Ordered pairs (a, b), a != b, within each base group of a split. With
/// pairs_per_group <= 0 or at least V(V-1), every ordered pair is used;
/// otherwise a seeded sample without replacement.
PairSet make_pairs(const DatasetManifest &ds, Split split, int pairs_per_group, std::uint64_t seed);

struct ModelTraining {
    TrainResult result;
    int train_pairs = 0;
    int val_pairs = 0;
};

/// He-uniform init from cfg.seed, pairs from the train and val splits, then train().
ModelTraining train_on_dataset(const DatasetManifest &ds, const TrainConfig &cfg, int pairs_per_group,
                               const NetworkDims &dims = {});

/// 1 - SS_res / SS_tot; empty when the labels have no variance.
std::optional<double> r_squared(const std::vector<double> &truth, const std::vector<double> &predicted);

struct ScatterRow {
    std::string circuit_id;
    double true_noise = 0;
    double predicted_noise = 0;
};

struct PredictionReport {
    std::optional<double> r2;
    /// Mean R^2 inside each test group (variants of one base), for diagnostics.
    std::optional<double> within_group_r2;
    double slope = 0;
    double intercept = 0;
    std::vector<ScatterRow> rows;

    std::string to_csv() const;
};

/// Calibrates scores to noise with a least-squares affine fit on the
/// validation split, then scores every test circuit.
PredictionReport evaluate_prediction(const Network &net, const DatasetManifest &ds);

struct Interval {
    double lo = 0;
    double hi = 0;
};

/// Percentile bootstrap interval of the mean. Throws for fewer than 2 samples.
Interval bootstrap_ci(const std::vector<double> &samples, int resamples = 10000, double level = 0.95,
                      std::uint64_t seed = 0);

/// (base - compiled) / base * 100.
double percent_improvement(double base_noise, double compiled_noise);

struct ImprovementCell {
    std::string method;  // "dl", "random", "xyxy"
    std::string model;   // device whose network ranked candidates; empty for baselines
    std::string device;  // device the circuits are evaluated on
    double mean = 0;
    Interval ci;
    int circuits = 0;
    int excluded = 0;
    std::vector<double> samples;
};

struct EvalConfig {
    int candidates = 1000;
    int resamples = 10000;
    std::uint64_t seed = 0;
    bool include_base = true;
};

struct EvalReport {
    std::vector<ImprovementCell> cells;
    std::map<std::string, double> runtime_seconds;

    const ImprovementCell *find(const std::string &method, const std::string &model, const std::string &device) const;
    std::string to_json() const;
};

/// Every (model device, eval device) DL cell plus random-fill and XYXY rows per
/// eval device, over the given base circuits. Circuits with zero base noise on
/// an eval device are excluded from that device's cells. All devices must
/// share one coupling map. models[i] belongs to devices[i].
EvalReport evaluate_improvement(const std::vector<Network> &models, const std::vector<DeviceModel> &devices,
                                const std::vector<ScheduledCircuit> &bases, const EvalConfig &cfg);

struct XyxyComparison {
    int eligible = 0;
    int skipped = 0;
    double mean_dl_noise = 0;
    double mean_xyxy_noise = 0;
    /// Mean of (xyxy - dl) / dl * 100 with bootstrap interval.
    double mean_excess_percent = 0;
    Interval ci;
    std::vector<double> dl_noise;
    std::vector<double> xyxy_noise;

    std::string to_json() const;
};

/// Compares DL compilation with XYXY fills on bases whose gaps are all
/// multiples of 4. Throws std::runtime_error when no base is eligible.
XyxyComparison evaluate_xyxy(const Network &net, const DeviceModel &dm, const std::vector<ScheduledCircuit> &bases,
                             const EvalConfig &cfg);

/// Extra held-out bases, drawn like gen_dataset's but from an independent seed
/// stream, keeping only those that pass `keep`.
std::vector<ScheduledCircuit> draw_bases(const CouplingMap &map, const DatasetConfig &cfg, std::uint64_t seed,
                                         int count, const std::function<bool(const ScheduledCircuit &)> &keep,
                                         int max_draws = 1000000);

}  // namespace noiseforge
