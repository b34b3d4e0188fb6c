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

#include "noiseforge/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "noiseforge/parallel.h"
#include "noiseforge/random_circuits.h"
#include "noiseforge/transpiler.h"

namespace noiseforge {

using nlohmann::ordered_json;

void DatasetConfig::validate() const {
    if (bases < 3) {
        throw std::invalid_argument("dataset needs at least 3 base circuits");
    }
    if (variants < 1) {
        throw std::invalid_argument("dataset needs at least 1 variant per base");
    }
    if (train < 1 || val < 1 || test < 1 || train + val + test != bases) {
        throw std::invalid_argument("split sizes must be positive and sum to the base count");
    }
    if (qubits < 2 || cycles < 1 || image_width < 1) {
        throw std::invalid_argument("dataset needs at least 2 qubits, 1 cycle and a positive image width");
    }
    if (labels.sampled && labels.shots == 0) {
        throw std::invalid_argument("shot-based labels need at least one shot");
    }
}

const char *split_name(Split s) {
    switch (s) {
        case Split::Train:
            return "train";
        case Split::Val:
            return "val";
        case Split::Test:
            return "test";
    }
    return "?";
}

Split split_from_name(const std::string &name) {
    if (name == "train") return Split::Train;
    if (name == "val") return Split::Val;
    if (name == "test") return Split::Test;
    throw std::invalid_argument("unknown split '" + name + "'");
}

std::vector<int> DatasetManifest::base_ids(Split s) const {
    std::vector<int> ids;
    for (const auto &r : records) {
        if (r.split == s && r.variant_id == 0) ids.push_back(r.base_id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<const DatasetRecord *> DatasetManifest::records_in(Split s) const {
    std::vector<const DatasetRecord *> out;
    for (const auto &r : records) {
        if (r.split == s) out.push_back(&r);
    }
    return out;
}

std::vector<const DatasetRecord *> DatasetManifest::bases_in(Split s) const {
    std::vector<const DatasetRecord *> out;
    for (const auto &r : records) {
        if (r.split == s && r.variant_id == 0) out.push_back(&r);
    }
    std::sort(out.begin(), out.end(), [](auto *a, auto *b) { return a->base_id < b->base_id; });
    return out;
}

namespace {

std::string record_id(int base, int variant) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "b%04d_v%02d", base, variant);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// One base circuit: random cycles, then their inverse, transpiled. Empty when
// the schedule does not fit the image.
std::optional<ScheduledCircuit> draw_base(const CouplingMap &map, const DatasetConfig &cfg, std::uint64_t seed) {
    Rng rng(seed);
    Circuit half = random_u_circuit(cfg.qubits, cfg.cycles, rng);
    Circuit full = concat(half, inverse_circuit(half));
    TranspileResult tr = transpile(full, map);
    if (tr.scheduled.duration > cfg.image_width) return std::nullopt;
    return tr.scheduled;
}

SimulationMode record_mode(const DatasetConfig &cfg, int base, int variant) {
    SimulationMode m = cfg.labels;
    if (m.sampled) {
        m.seed = mix_seed(cfg.labels.seed, static_cast<std::uint64_t>(base) * cfg.variants + variant);
    }
    return m;
}

void label_records(std::vector<DatasetRecord> &records, const DeviceModel &dm, const DatasetConfig &cfg) {
    parallel_for(records.size(), [&](std::size_t i) {
        auto &r = records[i];
        r.noise = measure_noise(r.circuit, dm, record_mode(cfg, r.base_id, r.variant_id));
    });
}

}  // namespace

std::string device_hash(const DeviceModel &dm) {
    return hex64(stable_hash(device_to_json(dm)));
}

double measure_noise(const ScheduledCircuit &sc, const DeviceModel &dm, SimulationMode mode) {
    return expected_hamming_weight(simulate(sc, dm, mode));
}

DatasetManifest gen_dataset(const DeviceModel &dm, const DatasetConfig &cfg) {
    cfg.validate();
    dm.validate();
    if (dm.coupling.qubit_count() != cfg.qubits) {
        throw std::invalid_argument("device has " + std::to_string(dm.coupling.qubit_count()) +
                                    " qubits but the dataset asks for " + std::to_string(cfg.qubits));
    }
    DatasetManifest ds;
    ds.device_name = dm.name;
    ds.device_hash = device_hash(dm);
    ds.config = cfg;

    const auto bases = static_cast<std::size_t>(cfg.bases);
    const auto variants = static_cast<std::size_t>(cfg.variants);
    std::vector<ScheduledCircuit> base_circuits(bases);
    std::vector<std::uint64_t> base_seeds(bases);
    std::vector<int> attempts(bases, 0);
    parallel_for(bases, [&](std::size_t b) {
        const std::uint64_t stream = mix_seed(cfg.seed, b);
        for (int attempt = 0;; ++attempt) {
            if (attempt > 10000) {
                throw std::runtime_error("base " + std::to_string(b) + " never fits the image width");
            }
            const std::uint64_t s = mix_seed(stream, static_cast<std::uint64_t>(attempt));
            if (auto sc = draw_base(dm.coupling, cfg, s)) {
                base_circuits[b] = std::move(*sc);
                base_seeds[b] = s;
                attempts[b] = attempt;
                return;
            }
        }
    });
    for (std::size_t b = 0; b < bases; ++b) {
        if (attempts[b] > 0) ds.regenerated.push_back(static_cast<int>(b));
    }

    std::vector<int> perm(bases);
    std::iota(perm.begin(), perm.end(), 0);
    Rng split_rng(mix_seed(cfg.seed, stable_hash("split")));
    shuffle_range(perm.begin(), perm.end(), split_rng);
    std::vector<Split> split_of(bases);
    for (std::size_t i = 0; i < bases; ++i) {
        const auto k = static_cast<int>(i);
        split_of[perm[i]] = k < cfg.train ? Split::Train : k < cfg.train + cfg.val ? Split::Val : Split::Test;
    }

    ds.records.resize(bases * variants);
    parallel_for(bases, [&](std::size_t b) {
        for (std::size_t v = 0; v < variants; ++v) {
            DatasetRecord &r = ds.records[b * variants + v];
            r.base_id = static_cast<int>(b);
            r.variant_id = static_cast<int>(v);
            r.split = split_of[b];
            r.circuit_file = "circuits/" + record_id(r.base_id, r.variant_id) + ".txt";
            if (v == 0) {
                r.circuit = base_circuits[b];
            } else {
                Rng rng(mix_seed(base_seeds[b], v));
                r.circuit = fill_gaps_random(base_circuits[b], rng);
            }
        }
    });
    label_records(ds.records, dm, cfg);
    return ds;
}

DatasetManifest relabel_dataset(const DatasetManifest &ds, const DeviceModel &dm) {
    dm.validate();
    DatasetManifest out = ds;
    out.device_name = dm.name;
    out.device_hash = device_hash(dm);
    label_records(out.records, dm, out.config);
    return out;
}

std::string DatasetManifest::to_json() const {
    ordered_json j;
    j["format"] = "noiseforge-dataset";
    j["version"] = 1;
    j["device"] = {{"name", device_name}, {"hash", device_hash}};
    j["seed"] = config.seed;
    j["bases"] = config.bases;
    j["variants"] = config.variants;
    j["splits"] = {{"train", config.train}, {"val", config.val}, {"test", config.test}};
    j["qubits"] = config.qubits;
    j["cycles"] = config.cycles;
    j["image_width"] = config.image_width;
    j["label_mode"] = config.labels.sampled ? "shots" : "exact";
    if (config.labels.sampled) {
        j["shots"] = config.labels.shots;
        j["label_seed"] = config.labels.seed;
    }
    j["regenerated"] = regenerated;
    ordered_json recs = ordered_json::array();
    for (const auto &r : records) {
        recs.push_back({{"file", r.circuit_file},
                        {"base", r.base_id},
                        {"variant", r.variant_id},
                        {"split", split_name(r.split)},
                        {"noise", r.noise}});
    }
    j["records"] = std::move(recs);
    return j.dump(1) + "\n";
}

void write_dataset(const DatasetManifest &ds, const std::string &dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "circuits");
    for (const auto &r : ds.records) {
        Circuit c = r.circuit.flatten();
        c.metadata["base"] = std::to_string(r.base_id);
        c.metadata["variant"] = std::to_string(r.variant_id);
        c.metadata["split"] = split_name(r.split);
        write_circuit_file((fs::path(dir) / r.circuit_file).string(), c);
    }
    std::ofstream out(fs::path(dir) / "manifest.json", std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write manifest in " + dir);
    }
    out << ds.to_json();
}

DatasetManifest read_dataset(const std::string &dir) {
    namespace fs = std::filesystem;
    std::ifstream in(fs::path(dir) / "manifest.json", std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + (fs::path(dir) / "manifest.json").string());
    }
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw std::runtime_error("manifest.json: " + std::string(e.what()));
    }
    try {
        if (j.at("format") != "noiseforge-dataset" || j.at("version") != 1) {
            throw std::runtime_error("manifest.json: unsupported format");
        }
        DatasetManifest ds;
        ds.device_name = j.at("device").at("name");
        ds.device_hash = j.at("device").at("hash");
        DatasetConfig &cfg = ds.config;
        cfg.seed = j.at("seed");
        cfg.bases = j.at("bases");
        cfg.variants = j.at("variants");
        cfg.train = j.at("splits").at("train");
        cfg.val = j.at("splits").at("val");
        cfg.test = j.at("splits").at("test");
        cfg.qubits = j.at("qubits");
        cfg.cycles = j.at("cycles");
        cfg.image_width = j.at("image_width");
        if (j.at("label_mode") == "shots") {
            cfg.labels = SimulationMode::shots_mode(j.at("shots"), j.at("label_seed"));
        }
        ds.regenerated = j.at("regenerated").get<std::vector<int>>();
        for (const auto &e : j.at("records")) {
            DatasetRecord r;
            r.circuit_file = e.at("file");
            r.base_id = e.at("base");
            r.variant_id = e.at("variant");
            r.split = split_from_name(e.at("split"));
            r.noise = e.at("noise");
            r.circuit = schedule_asap(read_circuit_file((fs::path(dir) / r.circuit_file).string()));
            ds.records.push_back(std::move(r));
        }
        return ds;
    } catch (const nlohmann::json::exception &e) {
        throw std::runtime_error("manifest.json: " + std::string(e.what()));
    }
}

PairSet make_pairs(const DatasetManifest &ds, Split split, int pairs_per_group, std::uint64_t seed) {
    const auto recs = ds.records_in(split);
    if (recs.empty()) {
        throw std::invalid_argument(std::string("split ") + split_name(split) + " is empty");
    }
    PairSet set;
    set.images.resize(recs.size());
    const int width = ds.config.image_width;
    parallel_for(recs.size(), [&](std::size_t i) { set.images[i] = encode_image(recs[i]->circuit, width); });

    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < recs.size(); ++i) groups[recs[i]->base_id].push_back(i);

    for (const auto &[base, members] : groups) {
        std::vector<std::pair<std::size_t, std::size_t>> all;
        for (std::size_t a : members) {
            for (std::size_t b : members) {
                if (a != b) all.emplace_back(a, b);
            }
        }
        std::size_t take = all.size();
        if (pairs_per_group > 0 && static_cast<std::size_t>(pairs_per_group) < all.size()) {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(base)));
            shuffle_range(all.begin(), all.end(), rng);
            take = static_cast<std::size_t>(pairs_per_group);
        }
        for (std::size_t k = 0; k < take; ++k) {
            const auto [a, b] = all[k];
            set.pairs.push_back(TrainingPair{a, b, recs[a]->noise - recs[b]->noise, base});
        }
    }
    return set;
}

ModelTraining train_on_dataset(const DatasetManifest &ds, const TrainConfig &cfg, int pairs_per_group,
                               const NetworkDims &dims) {
    NetworkDims d = dims;
    d.height = ds.config.qubits;
    d.width = ds.config.image_width;
    const PairSet train_set = make_pairs(ds, Split::Train, pairs_per_group, mix_seed(cfg.seed, 1));
    const PairSet val_set = make_pairs(ds, Split::Val, pairs_per_group, mix_seed(cfg.seed, 2));
    const Network init = Network::he_uniform(d, mix_seed(cfg.seed, 0));
    ModelTraining out{train(init, train_set, val_set, cfg), static_cast<int>(train_set.pairs.size()),
                      static_cast<int>(val_set.pairs.size())};
    return out;
}

std::optional<double> r_squared(const std::vector<double> &truth, const std::vector<double> &predicted) {
    if (truth.size() != predicted.size() || truth.empty()) {
        throw std::invalid_argument("r_squared: size mismatch or empty input");
    }
    const double mean = std::accumulate(truth.begin(), truth.end(), 0.0) / static_cast<double>(truth.size());
    double ss_tot = 0;
    double ss_res = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ss_tot += (truth[i] - mean) * (truth[i] - mean);
        ss_res += (truth[i] - predicted[i]) * (truth[i] - predicted[i]);
    }
    if (ss_tot <= 1e-300) return std::nullopt;
    return 1.0 - ss_res / ss_tot;
}

std::string PredictionReport::to_csv() const {
    std::ostringstream out;
    out << "circuit_id,true_noise,predicted_noise\n";
    char buf[64];
    for (const auto &r : rows) {
        out << r.circuit_id;
        std::snprintf(buf, sizeof buf, ",%.17g", r.true_noise);
        out << buf;
        std::snprintf(buf, sizeof buf, ",%.17g\n", r.predicted_noise);
        out << buf;
    }
    return out.str();
}

PredictionReport evaluate_prediction(const Network &net, const DatasetManifest &ds) {
    auto score = [&](const std::vector<const DatasetRecord *> &recs) {
        std::vector<double> s(recs.size());
        parallel_for(recs.size(), [&](std::size_t i) {
            s[i] = net.forward(encode_image(recs[i]->circuit, net.dims().width));
        });
        return s;
    };

    const auto val = ds.records_in(Split::Val);
    const auto test = ds.records_in(Split::Test);
    if (val.empty() || test.empty()) {
        throw std::invalid_argument("evaluate_prediction needs validation and test circuits");
    }
    const auto sv = score(val);
    double ms = 0;
    double my = 0;
    for (std::size_t i = 0; i < val.size(); ++i) {
        ms += sv[i];
        my += val[i]->noise;
    }
    ms /= static_cast<double>(val.size());
    my /= static_cast<double>(val.size());
    double sxy = 0;
    double sxx = 0;
    for (std::size_t i = 0; i < val.size(); ++i) {
        sxy += (sv[i] - ms) * (val[i]->noise - my);
        sxx += (sv[i] - ms) * (sv[i] - ms);
    }

    PredictionReport rep;
    rep.slope = sxx > 0 ? sxy / sxx : 0.0;
    rep.intercept = my - rep.slope * ms;

    const auto st = score(test);
    std::vector<double> truth;
    std::vector<double> pred;
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const double p = rep.slope * st[i] + rep.intercept;
        rep.rows.push_back(ScatterRow{record_id(test[i]->base_id, test[i]->variant_id), test[i]->noise, p});
        truth.push_back(test[i]->noise);
        pred.push_back(p);
        groups[test[i]->base_id].first.push_back(test[i]->noise);
        groups[test[i]->base_id].second.push_back(p);
    }
    rep.r2 = r_squared(truth, pred);

    double sum = 0;
    int n = 0;
    for (const auto &[base, tp] : groups) {
        if (auto r = r_squared(tp.first, tp.second)) {
            sum += *r;
            ++n;
        }
    }
    if (n > 0) rep.within_group_r2 = sum / n;
    return rep;
}

Interval bootstrap_ci(const std::vector<double> &samples, int resamples, double level, std::uint64_t seed) {
    if (samples.size() < 2) {
        throw std::invalid_argument("bootstrap_ci needs at least 2 samples");
    }
    if (resamples < 1 || !(level > 0 && level < 1)) {
        throw std::invalid_argument("bootstrap_ci needs resamples >= 1 and level in (0, 1)");
    }
    const std::size_t n = samples.size();
    Rng rng(seed);
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (auto &m : means) {
        double s = 0;
        for (std::size_t k = 0; k < n; ++k) s += samples[uniform_index(rng, n)];
        m = s / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(means.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, means.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return means[lo] + frac * (means[hi] - means[lo]);
    };
    const double tail = (1.0 - level) / 2.0;
    Interval ci{quantile(tail), quantile(1.0 - tail)};
    // A constant sample must give a degenerate interval even after rounding.
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    ci.lo = std::clamp(ci.lo, *mn, *mx);
    ci.hi = std::clamp(ci.hi, *mn, *mx);
    return ci;
}

double percent_improvement(double base_noise, double compiled_noise) {
    return (base_noise - compiled_noise) / base_noise * 100.0;
}

const ImprovementCell *EvalReport::find(const std::string &method, const std::string &model,
                                        const std::string &device) const {
    for (const auto &c : cells) {
        if (c.method == method && c.model == model && c.device == device) return &c;
    }
    return nullptr;
}

std::string EvalReport::to_json() const {
    ordered_json j;
    ordered_json arr = ordered_json::array();
    for (const auto &c : cells) {
        arr.push_back({{"method", c.method},
                       {"model", c.model},
                       {"device", c.device},
                       {"mean_percent_improvement", c.mean},
                       {"ci95", {c.ci.lo, c.ci.hi}},
                       {"circuits", c.circuits},
                       {"excluded_zero_noise", c.excluded}});
    }
    j["cells"] = std::move(arr);
    j["runtime_seconds"] = runtime_seconds;
    return j.dump(2) + "\n";
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ImprovementCell summarize(std::string method, std::string model, std::string device, std::vector<double> samples,
                          int excluded, const EvalConfig &cfg) {
    ImprovementCell c{std::move(method), std::move(model), std::move(device), 0, {}, 0, excluded, std::move(samples)};
    c.circuits = static_cast<int>(c.samples.size());
    if (!c.samples.empty()) {
        c.mean = std::accumulate(c.samples.begin(), c.samples.end(), 0.0) / static_cast<double>(c.samples.size());
        c.ci = c.samples.size() >= 2
                   ? bootstrap_ci(c.samples, cfg.resamples, 0.95,
                                  mix_seed(cfg.seed, stable_hash(c.method + "/" + c.model + "/" + c.device)))
                   : Interval{c.mean, c.mean};
    }
    return c;
}

}  // namespace

EvalReport evaluate_improvement(const std::vector<Network> &models, const std::vector<DeviceModel> &devices,
                                const std::vector<ScheduledCircuit> &bases, const EvalConfig &cfg) {
    if (models.size() != devices.size() || devices.empty()) {
        throw std::invalid_argument("evaluate_improvement needs one model per device");
    }
    for (const auto &d : devices) {
        if (!(d.coupling == devices.front().coupling)) {
            throw std::invalid_argument("evaluate_improvement: device " + d.name + " uses a different coupling map");
        }
    }
    if (bases.empty()) {
        throw std::invalid_argument("evaluate_improvement needs at least one base circuit");
    }
    const std::size_t nm = models.size();
    const std::size_t nb = bases.size();
    EvalReport report;

    // compiled[i][m]: base i ranked by model m; every model sees the same candidates.
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::vector<ScheduledCircuit>> compiled(nb, std::vector<ScheduledCircuit>(nm));
    std::vector<ScheduledCircuit> random_fill(nb);
    std::vector<ScheduledCircuit> xyxy_fill(nb);
    parallel_for(nb, [&](std::size_t i) {
        const std::uint64_t s = mix_seed(cfg.seed, i);
        const CandidateSet cs = generate_candidates(bases[i], cfg.candidates, s);
        const auto images = entrant_images(cs, cfg.include_base, models.front().dims().width);
        for (std::size_t m = 0; m < nm; ++m) {
            compiled[i][m] = entrant(cs, cfg.include_base, tournament_select(models[m], images).winner);
        }
        Rng rng(mix_seed(s, stable_hash("random-fill")));
        random_fill[i] = fill_gaps_random(bases[i], rng);
        xyxy_fill[i] = fill_gaps_xyxy(bases[i]);
    });
    report.runtime_seconds["compile"] = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    for (const auto &dev : devices) {
        // noise[i] = {base, random, xyxy, dl model 0, dl model 1, ...}
        std::vector<std::vector<double>> noise(nb, std::vector<double>(3 + nm));
        parallel_for(nb, [&](std::size_t i) {
            noise[i][0] = measure_noise(bases[i], dev);
            noise[i][1] = measure_noise(random_fill[i], dev);
            noise[i][2] = measure_noise(xyxy_fill[i], dev);
            for (std::size_t m = 0; m < nm; ++m) noise[i][3 + m] = measure_noise(compiled[i][m], dev);
        });
        auto column = [&](std::size_t col, int &excluded) {
            std::vector<double> out;
            excluded = 0;
            for (std::size_t i = 0; i < nb; ++i) {
                if (noise[i][0] <= 1e-12) {
                    ++excluded;
                    continue;
                }
                out.push_back(percent_improvement(noise[i][0], noise[i][col]));
            }
            return out;
        };
        int excluded = 0;
        for (std::size_t m = 0; m < nm; ++m) {
            auto s = column(3 + m, excluded);
            report.cells.push_back(summarize("dl", devices[m].name, dev.name, std::move(s), excluded, cfg));
        }
        auto sr = column(1, excluded);
        report.cells.push_back(summarize("random", "", dev.name, std::move(sr), excluded, cfg));
        auto sx = column(2, excluded);
        report.cells.push_back(summarize("xyxy", "", dev.name, std::move(sx), excluded, cfg));
    }
    report.runtime_seconds["simulate"] = seconds_since(t0);
    return report;
}

std::string XyxyComparison::to_json() const {
    ordered_json j;
    j["eligible"] = eligible;
    j["skipped"] = skipped;
    j["mean_dl_noise"] = mean_dl_noise;
    j["mean_xyxy_noise"] = mean_xyxy_noise;
    j["mean_excess_percent"] = mean_excess_percent;
    j["ci95"] = {ci.lo, ci.hi};
    return j.dump(2) + "\n";
}

XyxyComparison evaluate_xyxy(const Network &net, const DeviceModel &dm, const std::vector<ScheduledCircuit> &bases,
                             const EvalConfig &cfg) {
    XyxyComparison out;
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        if (xyxy_eligible(bases[i])) eligible.push_back(i);
    }
    out.skipped = static_cast<int>(bases.size() - eligible.size());
    out.eligible = static_cast<int>(eligible.size());
    if (eligible.empty()) {
        throw std::runtime_error("evaluate_xyxy: no circuit has all gap lengths divisible by 4 (" +
                                 std::to_string(bases.size()) + " skipped)");
    }
    out.dl_noise.resize(eligible.size());
    out.xyxy_noise.resize(eligible.size());
    parallel_for(eligible.size(), [&](std::size_t k) {
        const std::size_t i = eligible[k];
        CompileConfig cc{cfg.candidates, mix_seed(cfg.seed, i), net.dims().width, cfg.include_base};
        out.dl_noise[k] = measure_noise(compile_scheduled(bases[i], net, cc).winner, dm);
        out.xyxy_noise[k] = measure_noise(fill_gaps_xyxy(bases[i]), dm);
    });
    std::vector<double> excess;
    for (std::size_t k = 0; k < eligible.size(); ++k) {
        out.mean_dl_noise += out.dl_noise[k];
        out.mean_xyxy_noise += out.xyxy_noise[k];
        if (out.dl_noise[k] > 1e-12) {
            excess.push_back((out.xyxy_noise[k] - out.dl_noise[k]) / out.dl_noise[k] * 100.0);
        }
    }
    out.mean_dl_noise /= static_cast<double>(eligible.size());
    out.mean_xyxy_noise /= static_cast<double>(eligible.size());
    if (!excess.empty()) {
        out.mean_excess_percent = std::accumulate(excess.begin(), excess.end(), 0.0) / static_cast<double>(excess.size());
        out.ci = excess.size() >= 2 ? bootstrap_ci(excess, cfg.resamples, 0.95, mix_seed(cfg.seed, stable_hash("xyxy")))
                                    : Interval{out.mean_excess_percent, out.mean_excess_percent};
    }
    return out;
}

std::vector<ScheduledCircuit> draw_bases(const CouplingMap &map, const DatasetConfig &cfg, std::uint64_t seed,
                                         int count, const std::function<bool(const ScheduledCircuit &)> &keep,
                                         int max_draws) {
    std::vector<ScheduledCircuit> out;
    for (int k = 0; k < max_draws && static_cast<int>(out.size()) < count; ++k) {
        auto sc = draw_base(map, cfg, mix_seed(seed, static_cast<std::uint64_t>(k)));
        if (sc && (!keep || keep(*sc))) out.push_back(std::move(*sc));
    }
    return out;
}

}  // namespace noiseforge
