// Copyright 2026 The dqc1lab developers
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "dqc1lab/dataset.hpp"
#include "dqc1lab/model.hpp"
#include "dqc1lab/rng.hpp"

namespace dqc1lab {

struct GradientDescentOpt {
    double lr = 0.01;
};
struct NesterovOpt {
    double lr = 0.01;
    double momentum = 0.9;
};
struct AdamOpt {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};
// Gain sequences a_k = a/(A + k)^alpha_decay, c_k = c/k^gamma_decay;
// stability < 0 resolves A to iterations/10.
struct SpsaOpt {
    double a = 0.2;
    double c = 0.2;
    double stability = -1.0;
    double alpha_decay = 0.602;
    double gamma_decay = 0.101;
};
using OptimizerConfig = std::variant<GradientDescentOpt, NesterovOpt, AdamOpt, SpsaOpt>;

enum class LossKind { MseHalf, HingeSign };

struct TrainConfig {
    int iterations = 200;
    int batch_size = 25;
    uint64_t seed = 0;
    LossKind loss = LossKind::MseHalf;
    int eval_cadence = 1;
};

/// sum (y_i - p_i)^2 / (2N).
double mse_loss(std::span<const double> predictions, std::span<const double> labels);

/// mean max(0, 1 - y_i p_i) for +/-1 labels.
double hinge_loss(std::span<const double> predictions, std::span<const double> labels);

using LossFn = std::function<double(std::span<const double> theta)>;
using BatchGradFn =
    std::function<std::vector<double>(std::span<const double> theta, std::span<const int> batch)>;
using BatchLossFn =
    std::function<double(std::span<const double> theta, std::span<const int> batch)>;

struct OptimizeResult {
    std::vector<double> theta;
    std::vector<double> loss_trace;  // full objective after each update
};

using IterationCallback = std::function<void(int iteration, std::span<const double> theta)>;

/// Runs `iterations` updates over mini-batches drawn by a seeded once-per-epoch
/// shuffle. SPSA ignores grad_fn entirely and uses two batch_loss evaluations
/// with +/-c Rademacher perturbations per step; the other optimizers ignore
/// batch_loss. Throws if the objective turns non-finite. on_iteration, when
/// set, fires after every update.
OptimizeResult optimize(const LossFn& full_loss, const BatchGradFn& grad_fn,
                        const BatchLossFn& batch_loss, int dataset_size,
                        std::vector<double> theta0, const OptimizerConfig& opt,
                        const TrainConfig& train, RngStream& rng,
                        const IterationCallback& on_iteration = {});

/// Real-valued model with analytic or numeric parameter gradients, shared by
/// the regression and classification drivers. value_grad fuses the two calls
/// on the training hot path.
struct Predictor {
    int param_count = 0;
    std::function<double(std::span<const double> x, std::span<const double> theta)> value;
    std::function<std::vector<double>(std::span<const double> x, std::span<const double> theta)>
        grad;
    std::function<std::pair<double, std::vector<double>>(std::span<const double> x,
                                                         std::span<const double> theta)>
        value_grad;
};

/// Re (or Im, for a Y-basis signal measurement) of the DQC1 model value with
/// the insertion-rule gradient.
Predictor dqc1_predictor(ModelConfig model);

/// <0|U^dag M U|0> with central-finite-difference gradients.
Predictor qnn_predictor(CircuitSpec circuit, CMat observable, double fd_step = 1e-5);

/// Uniform [0, 2 pi) initial parameters.
std::vector<double> random_parameters(int count, RngStream& rng);

struct RegressionResult {
    std::vector<double> theta;
    std::vector<double> mse_trace;  // full-set MSE per iteration
    double final_mse = 0.0;
};

/// Minimizes the mse-half loss of the predictor against (xs, ys) mini-batches.
RegressionResult train_regression(const Predictor& predictor, const RMat& xs, const RVec& ys,
                                  const OptimizerConfig& opt, const TrainConfig& train,
                                  RngStream& rng);

struct ClassifierResult {
    std::vector<double> theta;
    std::vector<double> loss_trace;
    std::vector<double> train_accuracy;  // one entry per epoch
    std::vector<double> test_accuracy;
};

/// Trains Re f against +/-1 labels on the dataset's train split and records
/// sign-rule accuracy on both splits once per epoch. train.iterations is the
/// epoch count here; each epoch sweeps the shuffled train split in
/// train.batch_size chunks.
ClassifierResult train_classifier(const Predictor& predictor, const Dataset& ds,
                                  const OptimizerConfig& opt, const TrainConfig& train,
                                  RngStream& rng);

}  // namespace dqc1lab
