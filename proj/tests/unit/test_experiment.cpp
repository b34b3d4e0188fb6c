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
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <numeric>
#include <set>

#include "noiseforge/experiment.h"
#include "noiseforge/transpiler.h"

using namespace noiseforge;

namespace {

DatasetConfig tiny_config(std::uint64_t seed) {
    DatasetConfig cfg;
    cfg.bases = 6;
    cfg.variants = 3;
    cfg.train = 4;
    cfg.val = 1;
    cfg.test = 1;
    cfg.cycles = 2;
    cfg.seed = seed;
    return cfg;
}

DeviceModel noisy_device() {
    return make_random_device("noisy", 3, CouplingMap::t_shape());
}

double mean_of(const std::vector<double> &v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("dataset generation is deterministic and split by base", "[dataset]") {
    const DeviceModel dm = noisy_device();
    const DatasetManifest a = gen_dataset(dm, tiny_config(11));
    const DatasetManifest b = gen_dataset(dm, tiny_config(11));
    REQUIRE(a.records.size() == 18);
    REQUIRE(b.records.size() == 18);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].circuit == b.records[i].circuit);
        CHECK(a.records[i].noise == b.records[i].noise);
        CHECK(a.records[i].split == b.records[i].split);
    }
    CHECK(a.device_hash == device_hash(dm));
    CHECK(a.device_hash.size() == 16);

    const DatasetManifest c = gen_dataset(dm, tiny_config(12));
    bool differs = false;
    for (std::size_t i = 0; i < a.records.size(); ++i) differs |= !(a.records[i].circuit == c.records[i].circuit);
    CHECK(differs);

    CHECK(a.base_ids(Split::Train).size() == 4);
    CHECK(a.base_ids(Split::Val).size() == 1);
    CHECK(a.base_ids(Split::Test).size() == 1);
    std::set<int> seen;
    for (Split s : {Split::Train, Split::Val, Split::Test}) {
        for (int id : a.base_ids(s)) CHECK(seen.insert(id).second);
    }
    CHECK(seen.size() == 6);

    // Every variant shares its base's split and gate content outside the fills.
    for (const auto &r : a.records) {
        const DatasetRecord &base = a.records[static_cast<std::size_t>(r.base_id) * 3];
        CHECK(base.variant_id == 0);
        CHECK(r.split == base.split);
        CHECK(r.circuit.duration == base.circuit.duration);
        CHECK(r.circuit.duration <= 64);
        CHECK(r.noise >= 0.0);
        CHECK(r.noise <= 5.0);
        if (r.variant_id > 0) {
            CHECK(find_gaps(r.circuit).empty());
            std::size_t originals = 0;
            for (const auto &pg : r.circuit.gates) originals += !pg.gate.inserted;
            CHECK(originals == base.circuit.gates.size());
        }
    }
}

TEST_CASE("zero-noise labels are zero", "[dataset]") {
    const DatasetManifest ds = gen_dataset(zero_noise_device(CouplingMap::t_shape()), tiny_config(2));
    for (const auto &r : ds.records) CHECK(r.noise == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("relabelling keeps circuits and changes labels", "[dataset]") {
    const DatasetManifest ds = gen_dataset(noisy_device(), tiny_config(4));
    const DeviceModel other = make_random_device("other", 9, CouplingMap::t_shape());
    const DatasetManifest re = relabel_dataset(ds, other);
    CHECK(re.device_name == "other");
    CHECK(re.device_hash != ds.device_hash);
    bool changed = false;
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        CHECK(re.records[i].circuit == ds.records[i].circuit);
        CHECK(re.records[i].noise == Catch::Approx(measure_noise(ds.records[i].circuit, other)).margin(1e-12));
        changed |= re.records[i].noise != ds.records[i].noise;
    }
    CHECK(changed);
}

TEST_CASE("dataset config validation", "[dataset]") {
    DatasetConfig cfg = tiny_config(0);
    CHECK_NOTHROW(cfg.validate());
    cfg.train = 5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = tiny_config(0);
    cfg.variants = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = tiny_config(0);
    cfg.labels = SimulationMode::shots_mode(0, 1);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = tiny_config(0);
    cfg.qubits = 4;
    CHECK_THROWS_AS(gen_dataset(noisy_device(), cfg), std::invalid_argument);
    CHECK(split_from_name("val") == Split::Val);
    CHECK_THROWS_AS(split_from_name("dev"), std::invalid_argument);
}

TEST_CASE("pairs stay inside base groups", "[pairs]") {
    DatasetConfig cfg = tiny_config(5);
    cfg.variants = 2;
    const DatasetManifest ds = gen_dataset(noisy_device(), cfg);

    // Two variants give exactly two opposite pairs per group.
    const PairSet two = make_pairs(ds, Split::Train, 0, 1);
    CHECK(two.images.size() == 8);
    REQUIRE(two.pairs.size() == 8);
    const auto recs = ds.records_in(Split::Train);
    for (std::size_t k = 0; k < two.pairs.size(); k += 2) {
        const TrainingPair &p = two.pairs[k];
        const TrainingPair &q = two.pairs[k + 1];
        CHECK(p.a == q.b);
        CHECK(p.b == q.a);
        CHECK(p.label == -q.label);
    }
    for (const auto &p : two.pairs) {
        CHECK(p.a != p.b);
        CHECK(recs[p.a]->base_id == p.group);
        CHECK(recs[p.b]->base_id == p.group);
        CHECK(p.label == recs[p.a]->noise - recs[p.b]->noise);
        CHECK(two.images[p.a] == encode_image(recs[p.a]->circuit));
    }

    const DatasetManifest big = gen_dataset(noisy_device(), tiny_config(5));
    CHECK(make_pairs(big, Split::Train, 0, 1).pairs.size() == 4 * 6);
    CHECK(make_pairs(big, Split::Train, 100, 1).pairs.size() == 4 * 6);
    const PairSet sampled = make_pairs(big, Split::Train, 4, 1);
    CHECK(sampled.pairs.size() == 4 * 4);
    std::set<std::pair<std::size_t, std::size_t>> unique;
    for (const auto &p : sampled.pairs) CHECK(unique.insert({p.a, p.b}).second);
    const PairSet again = make_pairs(big, Split::Train, 4, 1);
    for (std::size_t i = 0; i < sampled.pairs.size(); ++i) {
        CHECK(sampled.pairs[i].a == again.pairs[i].a);
        CHECK(sampled.pairs[i].b == again.pairs[i].b);
    }

    DatasetConfig single = tiny_config(5);
    single.variants = 1;
    CHECK(make_pairs(gen_dataset(noisy_device(), single), Split::Train, 0, 1).pairs.empty());
}

TEST_CASE("r squared", "[stats]") {
    const std::vector<double> y = {1, 2, 4, 7};
    CHECK(r_squared(y, y).value() == 1.0);
    const double m = mean_of(y);
    CHECK(r_squared(y, std::vector<double>(4, m)).value() == Catch::Approx(0.0).margin(1e-15));
    // ss_tot = 21, ss_res = 4 for a residual of 1 everywhere.
    CHECK(r_squared(y, {2, 3, 5, 8}).value() == Catch::Approx(1.0 - 4.0 / 21.0).epsilon(1e-14));
    CHECK_FALSE(r_squared({3, 3, 3}, {1, 2, 3}).has_value());
    CHECK_THROWS_AS(r_squared({1, 2}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(r_squared({}, {}), std::invalid_argument);
}

TEST_CASE("bootstrap intervals", "[stats]") {
    const Interval c = bootstrap_ci({2.5, 2.5, 2.5, 2.5});
    CHECK(c.lo == 2.5);
    CHECK(c.hi == 2.5);

    std::vector<double> coin;
    for (int i = 0; i < 50; ++i) coin.push_back(i % 2);
    const Interval b = bootstrap_ci(coin, 4000, 0.95, 7);
    CHECK(b.lo < 0.5);
    CHECK(b.hi > 0.5);
    // Normal approximation of the mean: 0.5 +- 1.96 * 0.5 / sqrt(50).
    const double half = 1.96 * 0.5 / std::sqrt(50.0);
    CHECK(b.lo == Catch::Approx(0.5 - half).margin(0.03));
    CHECK(b.hi == Catch::Approx(0.5 + half).margin(0.03));

    const Interval again = bootstrap_ci(coin, 4000, 0.95, 7);
    CHECK(again.lo == b.lo);
    CHECK(again.hi == b.hi);
    const Interval narrow = bootstrap_ci(coin, 4000, 0.5, 7);
    CHECK(narrow.lo > b.lo);
    CHECK(narrow.hi < b.hi);

    CHECK_THROWS_AS(bootstrap_ci({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(bootstrap_ci({}), std::invalid_argument);
    CHECK_THROWS_AS(bootstrap_ci({1, 2}, 0), std::invalid_argument);
    CHECK_THROWS_AS(bootstrap_ci({1, 2}, 10, 1.0), std::invalid_argument);
}

TEST_CASE("percent improvement", "[stats]") {
    CHECK(percent_improvement(0.4, 0.3) == Catch::Approx(25.0).epsilon(1e-14));
    CHECK(percent_improvement(0.4, 0.5) == Catch::Approx(-25.0).epsilon(1e-14));
    CHECK(percent_improvement(0.4, 0.4) == 0.0);
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const double base = 0.01 + uniform_unit(rng);
        const double compiled = uniform_unit(rng);
        const double k = 0.1 + 10 * uniform_unit(rng);
        CHECK(percent_improvement(k * base, k * compiled) ==
              Catch::Approx(percent_improvement(base, compiled)).epsilon(1e-12));
    }
}

TEST_CASE("dataset directory round trip", "[dataset][io]") {
    const DatasetManifest ds = gen_dataset(noisy_device(), tiny_config(8));
    const auto dir = std::filesystem::temp_directory_path() / "noiseforge_dataset_rt";
    std::filesystem::remove_all(dir);
    write_dataset(ds, dir.string());
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    CHECK(std::filesystem::exists(dir / "circuits" / "b0000_v00.txt"));

    const DatasetManifest back = read_dataset(dir.string());
    CHECK(back.device_name == ds.device_name);
    CHECK(back.device_hash == ds.device_hash);
    CHECK(back.config.seed == ds.config.seed);
    CHECK(back.config.variants == ds.config.variants);
    CHECK(back.to_json() == ds.to_json());
    REQUIRE(back.records.size() == ds.records.size());
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        CHECK(back.records[i].noise == ds.records[i].noise);
        CHECK(back.records[i].split == ds.records[i].split);
        CHECK(encode_image(back.records[i].circuit) == encode_image(ds.records[i].circuit));
    }

    const auto j = nlohmann::json::parse(ds.to_json());
    CHECK(j["format"] == "noiseforge-dataset");
    CHECK(j["records"].size() == 18);
    CHECK(j["splits"]["train"] == 4);
    CHECK(j["label_mode"] == "exact");
    std::filesystem::remove_all(dir);
    CHECK_THROWS(read_dataset(dir.string()));
}

TEST_CASE("prediction report", "[prediction]") {
    DatasetConfig cfg = tiny_config(6);
    cfg.bases = 8;
    cfg.val = 2;
    cfg.test = 2;
    const DatasetManifest ds = gen_dataset(noisy_device(), cfg);
    NetworkDims d;
    d.conv1 = 4;
    d.conv2 = 4;
    d.fc1 = 16;
    d.fc2 = 8;
    const Network net = Network::he_uniform(d, 1);
    const PredictionReport rep = evaluate_prediction(net, ds);
    CHECK(rep.rows.size() == 6);
    const std::string csv = rep.to_csv();
    CHECK(csv.rfind("circuit_id,true_noise,predicted_noise\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

    // The affine calibration fits the validation split by least squares.
    std::vector<double> s;
    std::vector<double> y;
    for (const auto *r : ds.records_in(Split::Val)) {
        s.push_back(net.forward(encode_image(r->circuit)));
        y.push_back(r->noise);
    }
    double res = 0;
    double res_shift = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double p = rep.slope * s[i] + rep.intercept;
        res += (y[i] - p) * (y[i] - p);
        res_shift += (y[i] - p - 1e-3) * (y[i] - p - 1e-3);
    }
    CHECK(res <= res_shift);

    // A zero network predicts the validation mean everywhere.
    const PredictionReport flat = evaluate_prediction(Network(d), ds);
    CHECK(flat.slope == 0.0);
    CHECK(flat.intercept == Catch::Approx(mean_of(y)).epsilon(1e-12));
    CHECK(flat.r2.value() <= 0.0);
}

TEST_CASE("improvement evaluation with an indifferent network", "[evaluate]") {
    const DeviceModel a = noisy_device();
    const DeviceModel b = make_random_device("b", 4, CouplingMap::t_shape());
    const DatasetConfig cfg = tiny_config(0);
    const auto bases = draw_bases(a.coupling, cfg, 21, 4, [](const ScheduledCircuit &sc) { return !find_gaps(sc).empty(); });
    REQUIRE(bases.size() == 4);
    NetworkDims d;
    d.conv1 = 2;
    d.conv2 = 2;
    d.fc1 = 4;
    d.fc2 = 4;
    const Network zero(d);
    EvalConfig ec;
    ec.candidates = 8;
    ec.resamples = 200;
    const EvalReport rep = evaluate_improvement({zero, zero}, {a, b}, bases, ec);
    CHECK(rep.cells.size() == 8);
    for (const char *dev : {"noisy", "b"}) {
        // Every match ties, so the base wins and nothing changes.
        for (const char *model : {"noisy", "b"}) {
            const ImprovementCell *c = rep.find("dl", model, dev);
            REQUIRE(c != nullptr);
            CHECK(c->circuits == 4);
            CHECK(c->mean == 0.0);
        }
        const ImprovementCell *r = rep.find("random", "", dev);
        REQUIRE(r != nullptr);
        CHECK(r->ci.lo <= r->mean);
        CHECK(r->ci.hi >= r->mean);
        CHECK(rep.find("xyxy", "", dev) != nullptr);
    }
    CHECK(rep.find("dl", "c", "noisy") == nullptr);

    // Without the base as an entrant the first candidate wins every tie.
    ec.include_base = false;
    const EvalReport fills = evaluate_improvement({zero}, {a}, bases, ec);
    const ImprovementCell *dl = fills.find("dl", "noisy", "noisy");
    REQUIRE(dl != nullptr);
    for (std::size_t i = 0; i < bases.size(); ++i) {
        const CandidateSet cs = generate_candidates(bases[i], 8, mix_seed(ec.seed, i));
        const double base = measure_noise(bases[i], a);
        CHECK(dl->samples[i] == Catch::Approx(percent_improvement(base, measure_noise(cs.candidates[0], a))).margin(1e-9));
    }

    const auto j = nlohmann::json::parse(rep.to_json());
    CHECK(j["cells"].size() == 8);
    CHECK(j["cells"][0].contains("ci95"));
    CHECK(j["runtime_seconds"].contains("compile"));

    CHECK_THROWS_AS(evaluate_improvement({zero}, {a, b}, bases, ec), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_improvement({zero}, {a}, {}, ec), std::invalid_argument);
    const DeviceModel line = make_random_device("line", 1, CouplingMap("line", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}));
    CHECK_THROWS_AS(evaluate_improvement({zero, zero}, {a, line}, bases, ec), std::invalid_argument);
}

TEST_CASE("zero-noise bases are excluded", "[evaluate]") {
    const DeviceModel ideal = zero_noise_device(CouplingMap::t_shape());
    const auto bases = draw_bases(ideal.coupling, tiny_config(0), 3, 3, nullptr);
    NetworkDims d;
    d.conv1 = 2;
    d.conv2 = 2;
    d.fc1 = 4;
    d.fc2 = 4;
    EvalConfig ec;
    ec.candidates = 2;
    const EvalReport rep = evaluate_improvement({Network(d)}, {ideal}, bases, ec);
    for (const auto &c : rep.cells) {
        CHECK(c.circuits == 0);
        CHECK(c.excluded == 3);
    }
}

TEST_CASE("XYXY comparison", "[evaluate][xyxy]") {
    const DeviceModel dm = noisy_device();
    DatasetConfig cfg = tiny_config(0);
    cfg.cycles = 5;
    NetworkDims d;
    d.conv1 = 2;
    d.conv2 = 2;
    d.fc1 = 4;
    d.fc2 = 4;
    EvalConfig ec;
    ec.candidates = 4;
    ec.resamples = 200;

    const auto gap_free = draw_bases(dm.coupling, cfg, 5, 2, [](const ScheduledCircuit &sc) { return !xyxy_eligible(sc); });
    REQUIRE(gap_free.size() == 2);
    CHECK_THROWS_AS(evaluate_xyxy(Network(d), dm, gap_free, ec), std::runtime_error);

    const auto eligible = draw_bases(dm.coupling, cfg, 5, 2, xyxy_eligible);
    REQUIRE(eligible.size() == 2);
    std::vector<ScheduledCircuit> mixed = eligible;
    mixed.insert(mixed.end(), gap_free.begin(), gap_free.end());
    const XyxyComparison cmp = evaluate_xyxy(Network(d), dm, mixed, ec);
    CHECK(cmp.eligible == 2);
    CHECK(cmp.skipped == 2);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(cmp.dl_noise[k] == Catch::Approx(measure_noise(eligible[k], dm)).margin(1e-12));
        CHECK(cmp.xyxy_noise[k] == Catch::Approx(measure_noise(fill_gaps_xyxy(eligible[k]), dm)).margin(1e-12));
    }
    CHECK(cmp.mean_dl_noise == Catch::Approx(mean_of(cmp.dl_noise)).epsilon(1e-14));
    const auto j = nlohmann::json::parse(cmp.to_json());
    CHECK(j["eligible"] == 2);
    CHECK(j["ci95"].size() == 2);
}

TEST_CASE("draw_bases respects the filter and seed", "[dataset]") {
    const CouplingMap map = CouplingMap::t_shape();
    const DatasetConfig cfg = tiny_config(0);
    const auto a = draw_bases(map, cfg, 9, 5, nullptr);
    const auto b = draw_bases(map, cfg, 9, 5, nullptr);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    const auto none = draw_bases(map, cfg, 9, 5, [](const ScheduledCircuit &) { return false; }, 50);
    CHECK(none.empty());
}

TEST_CASE("training on a dataset reports pair counts", "[train]") {
    const DatasetManifest ds = gen_dataset(noisy_device(), tiny_config(10));
    TrainConfig tc;
    tc.max_epochs = 1;
    tc.seed = 3;
    NetworkDims d;
    d.conv1 = 2;
    d.conv2 = 2;
    d.fc1 = 4;
    d.fc2 = 4;
    const ModelTraining mt = train_on_dataset(ds, tc, 0, d);
    CHECK(mt.train_pairs == 4 * 6);
    CHECK(mt.val_pairs == 6);
    CHECK(mt.result.network.dims().width == 64);
    CHECK(mt.result.history.size() == 1);
    const ModelTraining again = train_on_dataset(ds, tc, 0, d);
    CHECK(again.result.history[0].val_mse == mt.result.history[0].val_mse);
}
