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

// noiseforge command line: device generation, datasets, training, compilation
// and the evaluation reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "noiseforge/experiment.h"
#include "noiseforge/transpiler.h"

using namespace noiseforge;
namespace fs = std::filesystem;

namespace {

void ensure_parent(const fs::path &path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

void write_text(const fs::path &path, const std::string &text) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string read_text(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void log(const std::string &msg) {
    std::cerr << msg << '\n';
}

// gen-device -----------------------------------------------------------------

struct GenDeviceArgs {
    std::string name = "device";
    std::uint64_t seed = 0;
    std::string coupling = "t-shape";
    std::string config;
    bool always_on = false;
    std::string out;
};

void run_gen_device(const GenDeviceArgs &a) {
    DeviceModel dm;
    if (!a.config.empty()) {
        auto j = nlohmann::json::parse(read_text(a.config));
        if (j.contains("ranges")) {
            j["name"] = j.value("name", a.name);
            j["seed"] = a.seed;
            if (!j.contains("coupling")) j["coupling"] = a.coupling;
        }
        dm = make_device(j.dump());
    } else {
        dm = make_random_device(a.name, a.seed, CouplingMap::from_name_or_file(a.coupling));
        dm.crosstalk_always_on = a.always_on;
    }
    ensure_parent(a.out);
    write_device_file(a.out, dm);
    log("wrote device " + dm.name + " (" + device_hash(dm) + ") to " + a.out);
}

// gen-data -------------------------------------------------------------------

struct GenDataArgs {
    std::string device;
    std::string relabel_from;
    DatasetConfig cfg;
    std::uint64_t shots = 0;
    std::string out;
};

void run_gen_data(GenDataArgs a) {
    const DeviceModel dm = read_device_file(a.device);
    DatasetManifest ds;
    if (!a.relabel_from.empty()) {
        ds = relabel_dataset(read_dataset(a.relabel_from), dm);
    } else {
        if (a.shots > 0) a.cfg.labels = SimulationMode::shots_mode(a.shots, mix_seed(a.cfg.seed, stable_hash("labels")));
        ds = gen_dataset(dm, a.cfg);
    }
    for (int b : ds.regenerated) log("base " + std::to_string(b) + " overflowed the image width and was redrawn");
    write_dataset(ds, a.out);
    log("wrote " + std::to_string(ds.records.size()) + " circuits to " + a.out);
}

// train ----------------------------------------------------------------------

struct TrainArgs {
    std::string data;
    TrainConfig cfg;
    int pairs = 20;
    std::string history;
    std::string out;
};

void run_train(const TrainArgs &a) {
    const DatasetManifest ds = read_dataset(a.data);
    TrainConfig cfg = a.cfg;
    ModelTraining mt = train_on_dataset(ds, cfg, a.pairs);
    ensure_parent(a.out);
    save_weights(mt.result.network, a.out);
    std::string csv = "epoch,learning_rate,train_mse,val_mse\n";
    for (const auto &e : mt.result.history) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", e.epoch, e.learning_rate, e.train_mse, e.val_mse);
        csv += buf;
    }
    if (!a.history.empty()) write_text(a.history, csv);
    char msg[256];
    std::snprintf(msg, sizeof msg, "%d train / %d val pairs; best epoch %d, val mse %.4g%s; wrote %s", mt.train_pairs,
                  mt.val_pairs, mt.result.best_epoch, mt.result.best_val_mse,
                  mt.result.stopped_early ? " (stopped early)" : "", a.out.c_str());
    log(msg);
}

// compile --------------------------------------------------------------------

struct CompileArgs {
    std::string weights;
    std::string circuit;
    std::string coupling = "t-shape";
    std::string device;
    CompileConfig cfg;
    bool no_base = false;
    std::string qasm;
    std::string report;
    std::string out;
};

void run_compile(const CompileArgs &a) {
    const Network net = load_weights(a.weights);
    CompileConfig cfg = a.cfg;
    cfg.include_base = !a.no_base;
    cfg.image_width = net.dims().width;
    std::optional<DeviceModel> dm;
    if (!a.device.empty()) dm = read_device_file(a.device);
    const CouplingMap map = dm ? dm->coupling : CouplingMap::from_name_or_file(a.coupling);
    const CompileResult r = compile(read_circuit_file(a.circuit), net, map, cfg);

    Circuit out = r.winner.flatten();
    std::string perm;
    for (int p : r.final_permutation) perm += (perm.empty() ? "" : " ") + std::to_string(p);
    out.metadata["final_permutation"] = perm;
    ensure_parent(a.out);
    write_circuit_file(a.out, out);
    if (!a.qasm.empty()) write_text(a.qasm, to_qasm2(out));

    auto j = nlohmann::ordered_json::parse(r.report.to_json());
    if (dm) {
        j["base_noise"] = measure_noise(r.base, *dm);
        j["compiled_noise"] = measure_noise(r.winner, *dm);
    }
    if (!a.report.empty()) write_text(a.report, j.dump(2) + "\n");
    std::cout << j.dump(2) << '\n';
}

// evaluate -------------------------------------------------------------------

struct EvaluateArgs {
    std::string data;
    std::vector<std::string> devices;
    std::vector<std::string> models;
    EvalConfig cfg;
    bool no_base = false;
    std::string out;
};

void run_evaluate(const EvaluateArgs &a) {
    if (a.devices.size() != a.models.size()) {
        throw std::invalid_argument("--device and --model must be given the same number of times");
    }
    std::vector<DeviceModel> devices;
    std::vector<Network> models;
    for (std::size_t i = 0; i < a.devices.size(); ++i) {
        devices.push_back(read_device_file(a.devices[i]));
        models.push_back(load_weights(a.models[i]));
    }
    const DatasetManifest ds = read_dataset(a.data);
    std::vector<ScheduledCircuit> bases;
    for (const auto *r : ds.bases_in(Split::Test)) bases.push_back(r->circuit);
    EvalConfig cfg = a.cfg;
    cfg.include_base = !a.no_base;
    const EvalReport rep = evaluate_improvement(models, devices, bases, cfg);
    std::set<std::string> logged;
    for (const auto &c : rep.cells) {
        if (c.excluded > 0 && logged.insert(c.device).second) {
            log(std::to_string(c.excluded) + " zero-noise circuit(s) excluded on " + c.device);
        }
    }
    write_text(a.out, rep.to_json());
    std::cout << rep.to_json();
}

// report ---------------------------------------------------------------------

struct ReportArgs {
    std::string data;
    std::string weights;
    std::string device;
    EvalConfig cfg;
    bool no_base = false;
    int xyxy_circuits = 20;
    std::string out_dir;
};

void run_report(const ReportArgs &a) {
    const DatasetManifest ds = read_dataset(a.data);
    const Network net = load_weights(a.weights);
    const DeviceModel dm = read_device_file(a.device);
    if (dm.name != ds.device_name) {
        log("note: dataset labels come from " + ds.device_name + ", device file is " + dm.name);
    }
    const fs::path dir(a.out_dir);

    const PredictionReport pred = evaluate_prediction(net, ds);
    write_text(dir / "scatter.csv", pred.to_csv());
    nlohmann::ordered_json pj;
    pj["r2"] = pred.r2 ? nlohmann::ordered_json(*pred.r2) : nlohmann::ordered_json(nullptr);
    pj["within_group_r2"] =
        pred.within_group_r2 ? nlohmann::ordered_json(*pred.within_group_r2) : nlohmann::ordered_json(nullptr);
    pj["calibration"] = {{"slope", pred.slope}, {"intercept", pred.intercept}};
    pj["test_circuits"] = pred.rows.size();
    write_text(dir / "prediction.json", pj.dump(2) + "\n");

    // Eligible test bases first, then held-out draws until the target count.
    std::vector<ScheduledCircuit> bases;
    int skipped = 0;
    for (const auto *r : ds.bases_in(Split::Test)) {
        if (xyxy_eligible(r->circuit)) {
            bases.push_back(r->circuit);
        } else {
            ++skipped;
        }
    }
    const int from_test = static_cast<int>(bases.size());
    if (from_test < a.xyxy_circuits) {
        auto extra = draw_bases(dm.coupling, ds.config, mix_seed(a.cfg.seed, stable_hash("xyxy-bases")),
                                a.xyxy_circuits - from_test, xyxy_eligible);
        bases.insert(bases.end(), extra.begin(), extra.end());
    }
    EvalConfig cfg = a.cfg;
    cfg.include_base = !a.no_base;
    nlohmann::ordered_json xj;
    try {
        const XyxyComparison x = evaluate_xyxy(net, dm, bases, cfg);
        xj = nlohmann::ordered_json::parse(x.to_json());
        xj["from_test_split"] = from_test;
        xj["test_split_skipped"] = skipped;
    } catch (const std::runtime_error &e) {
        xj["error"] = e.what();
    }
    write_text(dir / "xyxy.json", xj.dump(2) + "\n");

    nlohmann::ordered_json all;
    all["prediction"] = pj;
    all["xyxy"] = xj;
    std::cout << all.dump(2) << '\n';
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"noiseforge: noise-aware gap filling for small quantum circuits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "noiseforge 0.1.0");

    GenDeviceArgs gd;
    auto *c_dev = app.add_subcommand("gen-device", "Write a randomized synthetic device model as JSON");
    c_dev->add_option("--seed", gd.seed, "Device seed")->required();
    c_dev->add_option("--name", gd.name, "Device name (mixed into the seed)")->capture_default_str();
    c_dev->add_option("--coupling", gd.coupling, "Builtin coupling map name or text config path")
        ->capture_default_str();
    c_dev->add_option("--config", gd.config, "JSON device config (ranges or a full model)")->check(CLI::ExistingFile);
    c_dev->add_flag("--always-on-zz", gd.always_on, "ZZ crosstalk acts during gates as well");
    c_dev->add_option("-o,--out", gd.out, "Output JSON path")->required();
    c_dev->callback([&] { run_gen_device(gd); });

    GenDataArgs gdata;
    auto *c_data = app.add_subcommand("gen-data", "Generate and label a dataset of equivalent circuits");
    c_data->add_option("--device", gdata.device, "Device JSON used for labels")->required()->check(CLI::ExistingFile);
    c_data->add_option("--seed", gdata.cfg.seed, "Master seed")->required();
    c_data->add_option("--bases", gdata.cfg.bases, "Base circuits")->capture_default_str();
    c_data->add_option("--variants", gdata.cfg.variants, "Circuits per base, base included")->capture_default_str();
    c_data->add_option("--train", gdata.cfg.train, "Training bases")->capture_default_str();
    c_data->add_option("--val", gdata.cfg.val, "Validation bases")->capture_default_str();
    c_data->add_option("--test", gdata.cfg.test, "Test bases")->capture_default_str();
    c_data->add_option("--cycles", gdata.cfg.cycles, "Random cycles per half circuit")->capture_default_str();
    c_data->add_option("--width", gdata.cfg.image_width, "Image width in steps")->capture_default_str();
    c_data->add_option("--shots", gdata.shots, "Label from k sampled shots instead of exact probabilities");
    c_data->add_option("--relabel", gdata.relabel_from, "Relabel the circuits of an existing dataset directory")
        ->check(CLI::ExistingDirectory);
    c_data->add_option("-o,--out", gdata.out, "Output directory")->required();
    c_data->callback([&] { run_gen_data(gdata); });

    TrainArgs tr;
    auto *c_train = app.add_subcommand("train", "Train the pairwise noise model on a dataset");
    c_train->add_option("--data", tr.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    c_train->add_option("--seed", tr.cfg.seed, "Initialization and shuffling seed")->required();
    c_train->add_option("--lr", tr.cfg.learning_rate, "Initial learning rate")->capture_default_str();
    c_train->add_option("--decay", tr.cfg.decay_factor, "Learning-rate decay factor")->capture_default_str();
    c_train->add_option("--decay-period", tr.cfg.decay_period, "Epochs between decays")->capture_default_str();
    c_train->add_option("--momentum", tr.cfg.momentum, "SGD momentum")->capture_default_str();
    c_train->add_option("--batch", tr.cfg.batch_size, "Mini-batch size")->capture_default_str();
    c_train->add_option("--epochs", tr.cfg.max_epochs, "Maximum epochs")->capture_default_str();
    c_train->add_option("--patience", tr.cfg.patience, "Early-stopping patience")->capture_default_str();
    c_train->add_option("--pairs", tr.pairs, "Ordered pairs per base group; 0 uses all")->capture_default_str();
    c_train->add_option("--history", tr.history, "Per-epoch CSV output");
    c_train->add_option("-o,--out", tr.out, "Weights output path")->required();
    c_train->callback([&] { run_train(tr); });

    CompileArgs co;
    auto *c_comp = app.add_subcommand("compile", "Transpile a circuit and fill its gaps with the trained model");
    c_comp->add_option("--model,--weights", co.weights, "Trained weights")->required()->check(CLI::ExistingFile);
    c_comp->add_option("--in,--circuit", co.circuit, "Input circuit text file")->required()->check(CLI::ExistingFile);
    c_comp->add_option("--seed", co.cfg.seed, "Candidate seed")->required();
    c_comp->add_option("--candidates", co.cfg.candidates, "Random fills to rank")->capture_default_str();
    c_comp->add_option("--coupling", co.coupling, "Coupling map when no device is given")->capture_default_str();
    c_comp->add_option("--device", co.device, "Device JSON; also reports base and compiled noise")
        ->check(CLI::ExistingFile);
    c_comp->add_flag("--no-base", co.no_base, "Rank fills only, without the unfilled base as an entrant");
    c_comp->add_option("--qasm", co.qasm, "Also write OpenQASM 2.0");
    c_comp->add_option("--report", co.report, "Write the compile report as JSON");
    c_comp->add_option("-o,--out", co.out, "Compiled circuit output path")->required();
    c_comp->callback([&] { run_compile(co); });

    EvaluateArgs ev;
    auto *c_eval = app.add_subcommand("evaluate", "Percent noise improvement table over the test split");
    c_eval->add_option("--data", ev.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    c_eval->add_option("--device", ev.devices, "Device JSON (repeat, one per model)")->required()
        ->check(CLI::ExistingFile);
    c_eval->add_option("--model", ev.models, "Weights trained on the matching --device (repeat)")->required()
        ->check(CLI::ExistingFile);
    c_eval->add_option("--seed", ev.cfg.seed, "Candidate and bootstrap seed")->required();
    c_eval->add_option("--candidates", ev.cfg.candidates, "Random fills per circuit")->capture_default_str();
    c_eval->add_option("--resamples", ev.cfg.resamples, "Bootstrap resamples")->capture_default_str();
    c_eval->add_flag("--no-base", ev.no_base, "Rank fills only");
    c_eval->add_option("-o,--out", ev.out, "Report JSON path")->required();
    c_eval->callback([&] { run_evaluate(ev); });

    ReportArgs rp;
    auto *c_rep = app.add_subcommand("report", "Prediction scatter with R^2, and the XYXY comparison");
    c_rep->add_option("--data", rp.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    c_rep->add_option("--model,--weights", rp.weights, "Trained weights")->required()->check(CLI::ExistingFile);
    c_rep->add_option("--device", rp.device, "Device JSON the model was trained on")->required()
        ->check(CLI::ExistingFile);
    c_rep->add_option("--seed", rp.cfg.seed, "Candidate, draw and bootstrap seed")->required();
    c_rep->add_option("--candidates", rp.cfg.candidates, "Random fills per circuit")->capture_default_str();
    c_rep->add_option("--resamples", rp.cfg.resamples, "Bootstrap resamples")->capture_default_str();
    c_rep->add_option("--xyxy-circuits", rp.xyxy_circuits, "Eligible circuits for the XYXY comparison")
        ->capture_default_str();
    c_rep->add_flag("--no-base", rp.no_base, "Rank fills only");
    c_rep->add_option("-o,--out-dir", rp.out_dir, "Output directory")->required();
    c_rep->callback([&] { run_report(rp); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
