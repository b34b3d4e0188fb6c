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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "noiseforge/encoding.h"

namespace noiseforge {

/// Layer widths of the noise predictor.
///
///   conv5x5(in -> conv1, pad 2) -> relu -> conv3x3(conv1 -> conv2, pad 1) -> relu
///   -> avgpool 2x2 (ceil) -> flatten -> dense(fc1) -> relu -> dense(fc2) -> relu -> dense(1)
struct NetworkDims {
    int in_channels = kImageChannels;
    int height = 5;
    int width = kDefaultImageWidth;
    int conv1 = 16;
    int conv2 = 32;
    int fc1 = 256;
    int fc2 = 64;

    int pooled_height() const { return (height + 1) / 2; }
    int pooled_width() const { return (width + 1) / 2; }
    int flat_size() const { return conv2 * pooled_height() * pooled_width(); }

    bool operator==(const NetworkDims &other) const = default;
};

/// A weight tensor and its shape.
struct Param {
    std::string name;
    std::vector<int> shape;
    std::vector<double> values;

    bool operator==(const Param &other) const = default;
};

/// Test-only fault injection for mutation tests of the gradient checker.
enum class BackpropFault { None, ConvInputGradient };

class Network {
   public:
    /// Zero weights and biases.
    explicit Network(const NetworkDims &dims = {});

    /// He-uniform weights from `seed`, zero biases.
    static Network he_uniform(const NetworkDims &dims, std::uint64_t seed);

    const NetworkDims &dims() const { return dims_; }

    /// conv1.w, conv1.b, conv2.w, conv2.b, fc1.w, fc1.b, fc2.w, fc2.b, out.w, out.b
    std::vector<Param> &params() { return params_; }
    const std::vector<Param> &params() const { return params_; }
    std::size_t parameter_count() const;

    /// Scalar noise score. Throws std::invalid_argument on shape mismatch.
    double forward(const CircuitImage &img) const;

    /// forward(a) - forward(b); exactly antisymmetric.
    double predict_diff(const CircuitImage &a, const CircuitImage &b) const;

    /// Adds upstream * d forward(img) / d params into `grads` (same layout as params()).
    /// Returns forward(img).
    double accumulate_gradient(const CircuitImage &img, double upstream, std::vector<std::vector<double>> &grads,
                               BackpropFault fault = BackpropFault::None) const;

    /// Zero-filled buffers matching params().
    std::vector<std::vector<double>> zero_gradients() const;

    /// ReLU on/off pattern of all hidden units for one image (gradient checks).
    std::vector<bool> activation_pattern(const CircuitImage &img) const;

    bool operator==(const Network &other) const = default;

   private:
    struct Cache;
    double forward_cached(const CircuitImage &img, Cache &cache) const;
    void check_input(const CircuitImage &img) const;

    NetworkDims dims_;
    std::vector<Param> params_;
};

/// Weight file: "DQNM", u32 version, u32 input C,H,W, u32 layer count, then per
/// layer a u32 kind tag, u32 dim count and u32 dims, then every weight as an
/// f64 LE in declaration order.
inline constexpr std::uint32_t kWeightFormatVersion = 1;
void save_weights(const Network &net, const std::string &path);
Network load_weights(const std::string &path);
std::string serialize_weights(const Network &net);
Network deserialize_weights(const std::string &bytes);

struct TrainConfig {
    double learning_rate = 0.01;
    double decay_factor = 0.5;
    int decay_period = 10;
    double momentum = 0.9;
    int batch_size = 32;
    int max_epochs = 200;
    int patience = 10;
    std::uint64_t seed = 0;
    /// Train on labels divided by their RMS, then fold the scale back into
    /// the output layer so scores come out in noise units. The initial
    /// network is taken to score in normalized units.
    bool normalize_labels = true;

    void validate() const;
    /// learning_rate * decay_factor^(epoch / decay_period), epochs counted from 0.
    double rate_at(int epoch) const;
};

/// Ordered pair of pool images with label noise(a) - noise(b).
struct TrainingPair {
    std::size_t a = 0;
    std::size_t b = 0;
    double label = 0;
    int group = 0;
};

/// Image pool plus pairs indexing into it.
struct PairSet {
    std::vector<CircuitImage> images;
    std::vector<TrainingPair> pairs;
};

struct EpochRecord {
    int epoch = 0;
    double learning_rate = 0;
    double train_mse = 0;
    double val_mse = 0;
};

struct TrainResult {
    Network network;
    std::vector<EpochRecord> history;
    int best_epoch = 0;
    double best_val_mse = 0;
    bool stopped_early = false;
};

class TrainingDiverged : public std::runtime_error {
   public:
    TrainingDiverged(int epoch, const std::string &what) : std::runtime_error(what), epoch_(epoch) {}
    int epoch() const { return epoch_; }

   private:
    int epoch_;
};

/// Mean squared error of predict_diff against pair labels.
double pair_mse(const Network &net, const PairSet &set);

/// Mini-batch SGD with momentum on the pair MSE, step-decayed learning rate,
/// and early stopping on validation MSE. Each epoch visits groups in a seeded
/// shuffled order with pairs shuffled inside each group. Returns the weights
/// of the best validation epoch.
TrainResult train(const Network &init, const PairSet &train_set, const PairSet &val_set, const TrainConfig &cfg,
                  const std::function<void(const EpochRecord &)> &on_epoch = nullptr);

struct GradientCheckOptions {
    int samples = 200;
    /// Central-difference step. Smaller steps let rounding in the loss
    /// dominate the estimate for weights with near-zero gradient.
    double step = 1e-4;
    std::uint64_t seed = 0;
    /// Relative errors use max(|analytic|, |numeric|, floor) as denominator.
    double floor = 1e-6;
    BackpropFault fault = BackpropFault::None;
};

struct GradientCheckResult {
    double max_relative_error = 0;
    int checked = 0;
    int skipped_kinks = 0;
    std::vector<int> checked_per_param;
};

/// Compares the analytic gradient of (f(a) - f(b) - label)^2 with central
/// differences over weights sampled evenly from every parameter tensor.
/// Samples whose perturbation flips any ReLU are redrawn.
GradientCheckResult gradient_check(const Network &net, const CircuitImage &a, const CircuitImage &b, double label,
                                   const GradientCheckOptions &opts = {});

}  // namespace noiseforge
