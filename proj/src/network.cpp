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

#include "noiseforge/network.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "noiseforge/binary_io.h"
#include "noiseforge/rng.h"

namespace noiseforge {

namespace {

using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<MatRM>;
using ConstMapRM = Eigen::Map<const MatRM>;
using Vec = Eigen::VectorXd;
using MapVec = Eigen::Map<Vec>;
using ConstMapVec = Eigen::Map<const Vec>;

enum ParamIndex : int { kConv1W, kConv1B, kConv2W, kConv2B, kFc1W, kFc1B, kFc2W, kFc2B, kOutW, kOutB, kParamCount };

constexpr int kK1 = 5;
constexpr int kPad1 = 2;
constexpr int kK2 = 3;
constexpr int kPad2 = 1;
constexpr int kPool = 2;

// Rows are (channel, ki, kj), columns are output pixels (h, w).
MatRM im2col(const double *in, int c, int h, int w, int k, int pad) {
    MatRM cols = MatRM::Zero(static_cast<Eigen::Index>(c) * k * k, static_cast<Eigen::Index>(h) * w);
    for (int ch = 0; ch < c; ++ch) {
        for (int ki = 0; ki < k; ++ki) {
            for (int kj = 0; kj < k; ++kj) {
                const Eigen::Index row = (static_cast<Eigen::Index>(ch) * k + ki) * k + kj;
                double *dst = cols.row(row).data();
                for (int y = 0; y < h; ++y) {
                    const int sy = y + ki - pad;
                    if (sy < 0 || sy >= h) continue;
                    const double *src = in + (static_cast<std::size_t>(ch) * h + sy) * w;
                    for (int x = 0; x < w; ++x) {
                        const int sx = x + kj - pad;
                        if (sx >= 0 && sx < w) dst[y * w + x] = src[sx];
                    }
                }
            }
        }
    }
    return cols;
}

MatRM col2im(const MatRM &cols, int c, int h, int w, int k, int pad) {
    MatRM out = MatRM::Zero(c, static_cast<Eigen::Index>(h) * w);
    for (int ch = 0; ch < c; ++ch) {
        double *dst = out.row(ch).data();
        for (int ki = 0; ki < k; ++ki) {
            for (int kj = 0; kj < k; ++kj) {
                const Eigen::Index row = (static_cast<Eigen::Index>(ch) * k + ki) * k + kj;
                const double *src = cols.row(row).data();
                for (int y = 0; y < h; ++y) {
                    const int sy = y + ki - pad;
                    if (sy < 0 || sy >= h) continue;
                    for (int x = 0; x < w; ++x) {
                        const int sx = x + kj - pad;
                        if (sx >= 0 && sx < w) dst[sy * w + sx] += src[y * w + x];
                    }
                }
            }
        }
    }
    return out;
}

Param make_param(std::string name, std::vector<int> shape) {
    std::size_t n = 1;
    for (int d : shape) n *= static_cast<std::size_t>(d);
    return Param{std::move(name), std::move(shape), std::vector<double>(n, 0.0)};
}

int fan_in(const Param &p) {
    int f = 1;
    for (std::size_t i = 1; i < p.shape.size(); ++i) f *= p.shape[i];
    return f;
}

void validate_dims(const NetworkDims &d) {
    if (d.in_channels <= 0 || d.height <= 0 || d.width <= 0 || d.conv1 <= 0 || d.conv2 <= 0 || d.fc1 <= 0 ||
        d.fc2 <= 0) {
        throw std::invalid_argument("network dimensions must be positive");
    }
}

}  // namespace

struct Network::Cache {
    MatRM cols1, z1, a1, cols2, z2, a2;
    Vec flat, z3, a3, z4, a4;
};

Network::Network(const NetworkDims &dims) : dims_(dims) {
    validate_dims(dims);
    const NetworkDims &d = dims_;
    params_.push_back(make_param("conv1.w", {d.conv1, d.in_channels, kK1, kK1}));
    params_.push_back(make_param("conv1.b", {d.conv1}));
    params_.push_back(make_param("conv2.w", {d.conv2, d.conv1, kK2, kK2}));
    params_.push_back(make_param("conv2.b", {d.conv2}));
    params_.push_back(make_param("fc1.w", {d.fc1, d.flat_size()}));
    params_.push_back(make_param("fc1.b", {d.fc1}));
    params_.push_back(make_param("fc2.w", {d.fc2, d.fc1}));
    params_.push_back(make_param("fc2.b", {d.fc2}));
    params_.push_back(make_param("out.w", {1, d.fc2}));
    params_.push_back(make_param("out.b", {1}));
}

Network Network::he_uniform(const NetworkDims &dims, std::uint64_t seed) {
    Network net(dims);
    Rng rng(seed);
    for (int i = kConv1W; i < kParamCount; i += 2) {
        Param &p = net.params_[i];
        const double limit = std::sqrt(6.0 / fan_in(p));
        for (double &v : p.values) v = uniform_real(rng, -limit, limit);
    }
    return net;
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const auto &p : params_) n += p.values.size();
    return n;
}

std::vector<std::vector<double>> Network::zero_gradients() const {
    std::vector<std::vector<double>> g;
    g.reserve(params_.size());
    for (const auto &p : params_) g.emplace_back(p.values.size(), 0.0);
    return g;
}

void Network::check_input(const CircuitImage &img) const {
    if (img.channels != dims_.in_channels || img.height != dims_.height || img.width != dims_.width ||
        img.data.size() != static_cast<std::size_t>(img.channels) * img.height * img.width) {
        std::ostringstream msg;
        msg << "image shape " << img.channels << "x" << img.height << "x" << img.width << " does not match network input "
            << dims_.in_channels << "x" << dims_.height << "x" << dims_.width;
        throw std::invalid_argument(msg.str());
    }
}

double Network::forward_cached(const CircuitImage &img, Cache &c) const {
    check_input(img);
    const NetworkDims &d = dims_;
    const int h = d.height;
    const int w = d.width;
    const auto &p = params_;

    c.cols1 = im2col(img.data.data(), d.in_channels, h, w, kK1, kPad1);
    ConstMapRM w1(p[kConv1W].values.data(), d.conv1, static_cast<Eigen::Index>(d.in_channels) * kK1 * kK1);
    c.z1.noalias() = w1 * c.cols1;
    c.z1.colwise() += ConstMapVec(p[kConv1B].values.data(), d.conv1);
    c.a1 = c.z1.cwiseMax(0.0);

    c.cols2 = im2col(c.a1.data(), d.conv1, h, w, kK2, kPad2);
    ConstMapRM w2(p[kConv2W].values.data(), d.conv2, static_cast<Eigen::Index>(d.conv1) * kK2 * kK2);
    c.z2.noalias() = w2 * c.cols2;
    c.z2.colwise() += ConstMapVec(p[kConv2B].values.data(), d.conv2);
    c.a2 = c.z2.cwiseMax(0.0);

    // Average pooling in ceil mode: edge windows average over the cells they cover.
    const int ph = d.pooled_height();
    const int pw = d.pooled_width();
    c.flat.resize(d.flat_size());
    for (int f = 0; f < d.conv2; ++f) {
        const double *src = c.a2.row(f).data();
        for (int py = 0; py < ph; ++py) {
            for (int px = 0; px < pw; ++px) {
                double sum = 0;
                int count = 0;
                for (int y = py * kPool; y < std::min(h, py * kPool + kPool); ++y) {
                    for (int x = px * kPool; x < std::min(w, px * kPool + kPool); ++x) {
                        sum += src[y * w + x];
                        ++count;
                    }
                }
                c.flat[(static_cast<Eigen::Index>(f) * ph + py) * pw + px] = sum / count;
            }
        }
    }

    ConstMapRM w3(p[kFc1W].values.data(), d.fc1, d.flat_size());
    c.z3.noalias() = w3 * c.flat;
    c.z3 += ConstMapVec(p[kFc1B].values.data(), d.fc1);
    c.a3 = c.z3.cwiseMax(0.0);

    ConstMapRM w4(p[kFc2W].values.data(), d.fc2, d.fc1);
    c.z4.noalias() = w4 * c.a3;
    c.z4 += ConstMapVec(p[kFc2B].values.data(), d.fc2);
    c.a4 = c.z4.cwiseMax(0.0);

    return ConstMapVec(p[kOutW].values.data(), d.fc2).dot(c.a4) + p[kOutB].values[0];
}

double Network::forward(const CircuitImage &img) const {
    Cache cache;
    return forward_cached(img, cache);
}

double Network::predict_diff(const CircuitImage &a, const CircuitImage &b) const {
    return forward(a) - forward(b);
}

double Network::accumulate_gradient(const CircuitImage &img, double upstream, std::vector<std::vector<double>> &grads,
                                    BackpropFault fault) const {
    if (grads.size() != params_.size()) {
        throw std::invalid_argument("gradient buffer layout does not match network");
    }
    Cache c;
    const double out = forward_cached(img, c);
    const NetworkDims &d = dims_;
    const int h = d.height;
    const int w = d.width;
    const auto &p = params_;

    MapVec(grads[kOutW].data(), d.fc2) += upstream * c.a4;
    grads[kOutB][0] += upstream;

    Vec dz4 = upstream * ConstMapVec(p[kOutW].values.data(), d.fc2);
    dz4 = dz4.cwiseProduct((c.z4.array() > 0).cast<double>().matrix());
    MapRM(grads[kFc2W].data(), d.fc2, d.fc1).noalias() += dz4 * c.a3.transpose();
    MapVec(grads[kFc2B].data(), d.fc2) += dz4;

    Vec dz3 = ConstMapRM(p[kFc2W].values.data(), d.fc2, d.fc1).transpose() * dz4;
    dz3 = dz3.cwiseProduct((c.z3.array() > 0).cast<double>().matrix());
    MapRM(grads[kFc1W].data(), d.fc1, d.flat_size()).noalias() += dz3 * c.flat.transpose();
    MapVec(grads[kFc1B].data(), d.fc1) += dz3;

    Vec dflat = ConstMapRM(p[kFc1W].values.data(), d.fc1, d.flat_size()).transpose() * dz3;

    const int ph = d.pooled_height();
    const int pw = d.pooled_width();
    MatRM dz2 = MatRM::Zero(d.conv2, static_cast<Eigen::Index>(h) * w);
    for (int f = 0; f < d.conv2; ++f) {
        double *dst = dz2.row(f).data();
        for (int py = 0; py < ph; ++py) {
            for (int px = 0; px < pw; ++px) {
                const int y1 = std::min(h, py * kPool + kPool);
                const int x1 = std::min(w, px * kPool + kPool);
                const int count = (y1 - py * kPool) * (x1 - px * kPool);
                const double g = dflat[(static_cast<Eigen::Index>(f) * ph + py) * pw + px] / count;
                for (int y = py * kPool; y < y1; ++y) {
                    for (int x = px * kPool; x < x1; ++x) dst[y * w + x] = g;
                }
            }
        }
    }
    dz2 = dz2.cwiseProduct((c.z2.array() > 0).cast<double>().matrix());
    MapRM(grads[kConv2W].data(), d.conv2, static_cast<Eigen::Index>(d.conv1) * kK2 * kK2).noalias() +=
        dz2 * c.cols2.transpose();
    MapVec(grads[kConv2B].data(), d.conv2) += dz2.rowwise().sum();

    MatRM dcols2 =
        ConstMapRM(p[kConv2W].values.data(), d.conv2, static_cast<Eigen::Index>(d.conv1) * kK2 * kK2).transpose() * dz2;
    MatRM dz1 = col2im(dcols2, d.conv1, h, w, kK2, kPad2);
    if (fault == BackpropFault::ConvInputGradient) {
        dz1 *= 0.5;
    }
    dz1 = dz1.cwiseProduct((c.z1.array() > 0).cast<double>().matrix());
    MapRM(grads[kConv1W].data(), d.conv1, static_cast<Eigen::Index>(d.in_channels) * kK1 * kK1).noalias() +=
        dz1 * c.cols1.transpose();
    MapVec(grads[kConv1B].data(), d.conv1) += dz1.rowwise().sum();

    return out;
}

std::vector<bool> Network::activation_pattern(const CircuitImage &img) const {
    Cache c;
    forward_cached(img, c);
    std::vector<bool> pattern;
    auto push = [&](const double *v, Eigen::Index n) {
        for (Eigen::Index i = 0; i < n; ++i) pattern.push_back(v[i] > 0);
    };
    push(c.z1.data(), c.z1.size());
    push(c.z2.data(), c.z2.size());
    push(c.z3.data(), c.z3.size());
    push(c.z4.data(), c.z4.size());
    return pattern;
}

// Weight files.

namespace {

enum LayerTag : std::uint32_t { kTagConv = 1, kTagRelu = 2, kTagAvgPool = 3, kTagFlatten = 4, kTagDense = 5 };

struct LayerSpec {
    std::uint32_t tag;
    std::vector<std::uint32_t> dims;
    bool operator==(const LayerSpec &other) const = default;
};

std::vector<LayerSpec> layer_specs(const NetworkDims &d) {
    auto u = [](int v) { return static_cast<std::uint32_t>(v); };
    return {
        {kTagConv, {u(d.conv1), u(d.in_channels), kK1, kK1, kPad1}},
        {kTagRelu, {}},
        {kTagConv, {u(d.conv2), u(d.conv1), kK2, kK2, kPad2}},
        {kTagRelu, {}},
        {kTagAvgPool, {kPool, kPool}},
        {kTagFlatten, {}},
        {kTagDense, {u(d.fc1), u(d.flat_size())}},
        {kTagRelu, {}},
        {kTagDense, {u(d.fc2), u(d.fc1)}},
        {kTagRelu, {}},
        {kTagDense, {1, u(d.fc2)}},
    };
}

void write_network(std::ostream &out, const Network &net) {
    const NetworkDims &d = net.dims();
    out.write("DQNM", 4);
    write_u32(out, kWeightFormatVersion);
    write_u32(out, static_cast<std::uint32_t>(d.in_channels));
    write_u32(out, static_cast<std::uint32_t>(d.height));
    write_u32(out, static_cast<std::uint32_t>(d.width));
    const auto specs = layer_specs(d);
    write_u32(out, static_cast<std::uint32_t>(specs.size()));
    for (const auto &s : specs) {
        write_u32(out, s.tag);
        write_u32(out, static_cast<std::uint32_t>(s.dims.size()));
        for (auto v : s.dims) write_u32(out, v);
    }
    for (const auto &p : net.params()) {
        for (double v : p.values) write_f64(out, v);
    }
}

Network read_network(std::istream &in) {
    char magic[4];
    if (!in.read(magic, 4)) {
        throw std::runtime_error("weight file: unexpected end of file");
    }
    if (std::memcmp(magic, "DQNM", 4) != 0) {
        throw std::runtime_error("weight file: bad magic");
    }
    try {
        const std::uint32_t version = read_u32(in);
        if (version != kWeightFormatVersion) {
            throw std::runtime_error("weight file: unsupported version " + std::to_string(version));
        }
        NetworkDims d;
        d.in_channels = static_cast<int>(read_u32(in));
        d.height = static_cast<int>(read_u32(in));
        d.width = static_cast<int>(read_u32(in));
        const std::uint32_t count = read_u32(in);
        if (count > 64) {
            throw std::runtime_error("weight file: implausible layer count " + std::to_string(count));
        }
        std::vector<LayerSpec> specs(count);
        for (auto &s : specs) {
            s.tag = read_u32(in);
            const std::uint32_t n = read_u32(in);
            if (n > 8) {
                throw std::runtime_error("weight file: implausible layer rank");
            }
            s.dims.resize(n);
            for (auto &v : s.dims) v = read_u32(in);
        }
        if (specs.size() != 11 || specs[0].tag != kTagConv || specs[0].dims.size() != 5 || specs[2].tag != kTagConv ||
            specs[2].dims.size() != 5 || specs[6].tag != kTagDense || specs[6].dims.size() != 2 ||
            specs[8].tag != kTagDense || specs[8].dims.size() != 2) {
            throw std::runtime_error("weight file: layer sequence does not match the noise-predictor architecture");
        }
        d.conv1 = static_cast<int>(specs[0].dims[0]);
        d.conv2 = static_cast<int>(specs[2].dims[0]);
        d.fc1 = static_cast<int>(specs[6].dims[0]);
        d.fc2 = static_cast<int>(specs[8].dims[0]);
        if (d.in_channels <= 0 || d.height <= 0 || d.width <= 0 || d.in_channels > 64 || d.height > 64 ||
            d.width > 4096 || d.conv1 <= 0 || d.conv2 <= 0 || d.fc1 <= 0 || d.fc2 <= 0 || d.conv1 > 4096 ||
            d.conv2 > 4096 || d.fc1 > 65536 || d.fc2 > 65536) {
            throw std::runtime_error("weight file: implausible dimensions");
        }
        if (specs != layer_specs(d)) {
            throw std::runtime_error("weight file: layer dimensions are inconsistent");
        }
        Network net(d);
        for (auto &p : net.params()) {
            for (double &v : p.values) v = read_f64(in);
        }
        if (in.peek() != std::char_traits<char>::eof()) {
            throw std::runtime_error("weight file: trailing bytes after weights");
        }
        return net;
    } catch (const std::runtime_error &e) {
        const std::string what = e.what();
        if (what.rfind("weight file:", 0) == 0) throw;
        throw std::runtime_error("weight file: " + what);
    }
}

}  // namespace

std::string serialize_weights(const Network &net) {
    std::ostringstream out(std::ios::binary);
    write_network(out, net);
    return out.str();
}

Network deserialize_weights(const std::string &bytes) {
    std::istringstream in(bytes, std::ios::binary);
    return read_network(in);
}

void save_weights(const Network &net, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write weight file " + path);
    }
    write_network(out, net);
    if (!out) {
        throw std::runtime_error("failed writing weight file " + path);
    }
}

Network load_weights(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open weight file " + path);
    }
    return read_network(in);
}

// Training.

void TrainConfig::validate() const {
    if (!(learning_rate > 0) || !(decay_factor > 0) || decay_period < 1) {
        throw std::invalid_argument("learning rate, decay factor and decay period must be positive");
    }
    if (momentum < 0 || momentum >= 1) {
        throw std::invalid_argument("momentum must lie in [0, 1)");
    }
    if (batch_size < 1 || max_epochs < 1) {
        throw std::invalid_argument("batch size and max epochs must be at least 1");
    }
    if (patience < 1) {
        throw std::invalid_argument("patience must be at least 1");
    }
}

double TrainConfig::rate_at(int epoch) const {
    return learning_rate * std::pow(decay_factor, epoch / decay_period);
}

namespace {

void check_pairs(const PairSet &set, const char *what) {
    if (set.pairs.empty()) {
        throw std::invalid_argument(std::string(what) + " set has no pairs");
    }
    for (const auto &pr : set.pairs) {
        if (pr.a >= set.images.size() || pr.b >= set.images.size()) {
            throw std::invalid_argument(std::string(what) + " pair references a missing image");
        }
    }
}

std::vector<double> score_all(const Network &net, const PairSet &set) {
    std::vector<bool> used(set.images.size(), false);
    for (const auto &pr : set.pairs) used[pr.a] = used[pr.b] = true;
    std::vector<double> scores(set.images.size(), 0.0);
    for (std::size_t i = 0; i < set.images.size(); ++i) {
        if (used[i]) scores[i] = net.forward(set.images[i]);
    }
    return scores;
}

double mse_from_scores(const std::vector<double> &scores, const PairSet &set, double label_scale) {
    double sum = 0;
    for (const auto &pr : set.pairs) {
        const double e = scores[pr.a] - scores[pr.b] - pr.label * label_scale;
        sum += e * e;
    }
    return sum / static_cast<double>(set.pairs.size());
}

// Groups visited in shuffled order, pairs shuffled inside each group.
std::vector<std::size_t> epoch_order(const PairSet &set, std::uint64_t seed, int epoch) {
    std::map<int, std::vector<std::size_t>> by_group;
    for (std::size_t i = 0; i < set.pairs.size(); ++i) by_group[set.pairs[i].group].push_back(i);
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(epoch)));
    std::vector<std::vector<std::size_t> *> groups;
    for (auto &[id, members] : by_group) groups.push_back(&members);
    shuffle_range(groups.begin(), groups.end(), rng);
    std::vector<std::size_t> order;
    order.reserve(set.pairs.size());
    for (auto *members : groups) {
        shuffle_range(members->begin(), members->end(), rng);
        order.insert(order.end(), members->begin(), members->end());
    }
    return order;
}

void fold_output_scale(Network &net, double factor) {
    for (double &v : net.params()[kOutW].values) v *= factor;
    for (double &v : net.params()[kOutB].values) v *= factor;
}

}  // namespace

double pair_mse(const Network &net, const PairSet &set) {
    check_pairs(set, "evaluation");
    return mse_from_scores(score_all(net, set), set, 1.0);
}

TrainResult train(const Network &init, const PairSet &train_set, const PairSet &val_set, const TrainConfig &cfg,
                  const std::function<void(const EpochRecord &)> &on_epoch) {
    cfg.validate();
    check_pairs(train_set, "training");
    check_pairs(val_set, "validation");

    double scale = 1.0;
    if (cfg.normalize_labels) {
        double ss = 0;
        for (const auto &pr : train_set.pairs) ss += pr.label * pr.label;
        const double rms = std::sqrt(ss / static_cast<double>(train_set.pairs.size()));
        if (rms > 0 && std::isfinite(rms)) scale = 1.0 / rms;
    }
    const double unscale2 = 1.0 / (scale * scale);

    // The initial network is trained as-is against the normalized labels.
    // Folding the scale in up front would multiply every upstream gradient
    // by it and blow up the first updates.
    Network net = init;
    auto velocity = net.zero_gradients();

    TrainResult result{net, {}, -1, 0, false};
    double best = std::numeric_limits<double>::infinity();
    int since_best = 0;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        const double lr = cfg.rate_at(epoch);
        const auto order = epoch_order(train_set, cfg.seed, epoch);
        double loss_sum = 0;

        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const auto batch = static_cast<double>(end - start);

            // Each distinct image is scored and backpropagated once per batch.
            std::map<std::size_t, double> score;
            for (std::size_t i = start; i < end; ++i) {
                const auto &pr = train_set.pairs[order[i]];
                score.emplace(pr.a, 0.0);
                score.emplace(pr.b, 0.0);
            }
            for (auto &[img, s] : score) s = net.forward(train_set.images[img]);

            std::map<std::size_t, double> upstream;
            for (std::size_t i = start; i < end; ++i) {
                const auto &pr = train_set.pairs[order[i]];
                const double e = score[pr.a] - score[pr.b] - pr.label * scale;
                loss_sum += e * e;
                upstream[pr.a] += 2.0 * e / batch;
                upstream[pr.b] -= 2.0 * e / batch;
            }
            if (!std::isfinite(loss_sum)) {
                throw TrainingDiverged(epoch, "training diverged at epoch " + std::to_string(epoch) +
                                                  ": loss is not finite");
            }

            auto grads = net.zero_gradients();
            for (const auto &[img, g] : upstream) {
                if (g != 0.0) net.accumulate_gradient(train_set.images[img], g, grads);
            }
            auto &params = net.params();
            for (std::size_t t = 0; t < params.size(); ++t) {
                auto &v = velocity[t];
                auto &wv = params[t].values;
                const auto &g = grads[t];
                for (std::size_t k = 0; k < wv.size(); ++k) {
                    v[k] = cfg.momentum * v[k] - lr * g[k];
                    wv[k] += v[k];
                }
            }
        }

        const double train_mse = loss_sum / static_cast<double>(order.size()) * unscale2;
        const double val_mse = mse_from_scores(score_all(net, val_set), val_set, scale) * unscale2;
        if (!std::isfinite(train_mse) || !std::isfinite(val_mse)) {
            throw TrainingDiverged(epoch, "training diverged at epoch " + std::to_string(epoch) +
                                              ": loss is not finite");
        }
        EpochRecord rec{epoch, lr, train_mse, val_mse};
        result.history.push_back(rec);
        if (on_epoch) on_epoch(rec);

        if (val_mse < best) {
            best = val_mse;
            since_best = 0;
            result.network = net;
            result.best_epoch = epoch;
            result.best_val_mse = val_mse;
        } else if (++since_best >= cfg.patience) {
            result.stopped_early = true;
            break;
        }
    }

    fold_output_scale(result.network, 1.0 / scale);
    return result;
}

// Gradient check.

namespace {

double pair_loss(const Network &net, const CircuitImage &a, const CircuitImage &b, double label) {
    const double e = net.forward(a) - net.forward(b) - label;
    return e * e;
}

}  // namespace

GradientCheckResult gradient_check(const Network &net, const CircuitImage &a, const CircuitImage &b, double label,
                                   const GradientCheckOptions &opts) {
    const std::size_t tensors = net.params().size();
    GradientCheckResult result;
    result.checked_per_param.assign(tensors, 0);

    auto grads = net.zero_gradients();
    const double e = net.forward(a) - net.forward(b) - label;
    net.accumulate_gradient(a, 2.0 * e, grads, opts.fault);
    net.accumulate_gradient(b, -2.0 * e, grads, opts.fault);

    const auto base_a = net.activation_pattern(a);
    const auto base_b = net.activation_pattern(b);

    Rng rng(opts.seed);
    Network probe = net;
    // Even quota per tensor; whatever small tensors cannot take goes round-robin
    // to the larger ones.
    std::vector<int> quota(tensors, 0);
    int remaining = std::max(opts.samples, 1);
    for (bool progress = true; remaining > 0 && progress;) {
        progress = false;
        for (std::size_t t = 0; t < tensors && remaining > 0; ++t) {
            if (static_cast<std::size_t>(quota[t]) < probe.params()[t].values.size()) {
                ++quota[t];
                --remaining;
                progress = true;
            }
        }
    }
    for (std::size_t t = 0; t < tensors; ++t) {
        auto &values = probe.params()[t].values;
        const std::size_t n = values.size();
        const int want = quota[t];
        int attempts = 0;
        while (result.checked_per_param[t] < want && attempts < 20 * want) {
            ++attempts;
            const std::size_t k = uniform_index(rng, n);
            const double orig = values[k];

            values[k] = orig + opts.step;
            const bool kink_plus = probe.activation_pattern(a) != base_a || probe.activation_pattern(b) != base_b;
            const double lp = pair_loss(probe, a, b, label);
            values[k] = orig - opts.step;
            const bool kink_minus = probe.activation_pattern(a) != base_a || probe.activation_pattern(b) != base_b;
            const double lm = pair_loss(probe, a, b, label);
            values[k] = orig;

            if (kink_plus || kink_minus) {
                ++result.skipped_kinks;
                continue;
            }
            const double numeric = (lp - lm) / (2.0 * opts.step);
            const double analytic = grads[t][k];
            const double denom = std::max({std::abs(analytic), std::abs(numeric), opts.floor});
            result.max_relative_error = std::max(result.max_relative_error, std::abs(analytic - numeric) / denom);
            ++result.checked_per_param[t];
            ++result.checked;
        }
    }
    return result;
}

}  // namespace noiseforge
