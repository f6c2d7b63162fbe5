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
#include "dqc1lab/optimize.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace dqc1lab {

namespace {

// Once-per-epoch seeded shuffle, walked in batch_size chunks.
class Batcher {
  public:
    Batcher(int dataset_size, int batch_size, RngStream& rng)
        : rng_(rng), order_(static_cast<size_t>(dataset_size)),
          batch_(static_cast<size_t>(std::min(batch_size, dataset_size))) {
        if (dataset_size < 1) throw std::invalid_argument("optimize: empty dataset");
        if (batch_size < 1) throw std::invalid_argument("optimize: batch size must be positive");
        std::iota(order_.begin(), order_.end(), 0);
        shuffle();
    }

    std::span<const int> next() {
        if (cursor_ >= order_.size()) {
            shuffle();
            cursor_ = 0;
        }
        const size_t take = std::min(batch_.size(), order_.size() - cursor_);
        std::copy_n(order_.begin() + static_cast<std::ptrdiff_t>(cursor_), take, batch_.begin());
        cursor_ += take;
        return {batch_.data(), take};
    }

  private:
    void shuffle() {
        for (size_t i = order_.size() - 1; i > 0; --i) {
            const auto j = static_cast<size_t>(rng_.uniform_int(i + 1));
            std::swap(order_[i], order_[j]);
        }
    }

    RngStream& rng_;
    std::vector<int> order_;
    std::vector<int> batch_;
    size_t cursor_ = 0;
};

struct AdamState {
    std::vector<double> m, v;
    long t = 0;
};

}  // namespace

double mse_loss(std::span<const double> predictions, std::span<const double> labels) {
    if (predictions.size() != labels.size() || predictions.empty()) {
        throw std::invalid_argument("mse_loss: length mismatch");
    }
    double sum = 0.0;
    for (size_t i = 0; i < predictions.size(); ++i) {
        const double d = labels[i] - predictions[i];
        sum += d * d;
    }
    return sum / (2.0 * static_cast<double>(predictions.size()));
}

double hinge_loss(std::span<const double> predictions, std::span<const double> labels) {
    if (predictions.size() != labels.size() || predictions.empty()) {
        throw std::invalid_argument("hinge_loss: length mismatch");
    }
    double sum = 0.0;
    for (size_t i = 0; i < predictions.size(); ++i) {
        sum += std::max(0.0, 1.0 - labels[i] * predictions[i]);
    }
    return sum / static_cast<double>(predictions.size());
}

OptimizeResult optimize(const LossFn& full_loss, const BatchGradFn& grad_fn,
                        const BatchLossFn& batch_loss, int dataset_size,
                        std::vector<double> theta0, const OptimizerConfig& opt,
                        const TrainConfig& train, RngStream& rng,
                        const IterationCallback& on_iteration) {
    if (train.iterations < 1) throw std::invalid_argument("optimize: need iterations >= 1");
    if (train.batch_size > dataset_size) {
        throw std::invalid_argument("optimize: batch size exceeds dataset size");
    }
    const size_t p = theta0.size();
    std::vector<double> theta = std::move(theta0);

    Batcher batcher(dataset_size, train.batch_size, rng);

    const bool is_spsa = std::holds_alternative<SpsaOpt>(opt);
    if (!is_spsa && !grad_fn) throw std::invalid_argument("optimize: gradient callback required");
    if (is_spsa && !batch_loss) throw std::invalid_argument("optimize: SPSA needs a loss callback");

    std::vector<double> velocity(p, 0.0);
    AdamState adam{std::vector<double>(p, 0.0), std::vector<double>(p, 0.0), 0};
    std::vector<double> lookahead(p, 0.0);
    std::vector<double> delta(p, 0.0);
    std::vector<double> probe(p, 0.0);

    OptimizeResult result;
    result.loss_trace.reserve(static_cast<size_t>(train.iterations));

    for (int it = 0; it < train.iterations; ++it) {
        const auto batch = batcher.next();
        if (const auto* gd = std::get_if<GradientDescentOpt>(&opt)) {
            const auto g = grad_fn(theta, batch);
            for (size_t i = 0; i < p; ++i) theta[i] -= gd->lr * g[i];
        } else if (const auto* nesterov = std::get_if<NesterovOpt>(&opt)) {
            for (size_t i = 0; i < p; ++i) lookahead[i] = theta[i] - nesterov->momentum * velocity[i];
            const auto g = grad_fn(lookahead, batch);
            for (size_t i = 0; i < p; ++i) {
                velocity[i] = nesterov->momentum * velocity[i] + nesterov->lr * g[i];
                theta[i] -= velocity[i];
            }
        } else if (const auto* ad = std::get_if<AdamOpt>(&opt)) {
            const auto g = grad_fn(theta, batch);
            ++adam.t;
            const double bc1 = 1.0 - std::pow(ad->beta1, adam.t);
            const double bc2 = 1.0 - std::pow(ad->beta2, adam.t);
            for (size_t i = 0; i < p; ++i) {
                adam.m[i] = ad->beta1 * adam.m[i] + (1.0 - ad->beta1) * g[i];
                adam.v[i] = ad->beta2 * adam.v[i] + (1.0 - ad->beta2) * g[i] * g[i];
                theta[i] -= ad->lr * (adam.m[i] / bc1) / (std::sqrt(adam.v[i] / bc2) + ad->eps);
            }
        } else {
            const auto& spsa = std::get<SpsaOpt>(opt);
            const double stability =
                spsa.stability < 0.0 ? static_cast<double>(train.iterations) / 10.0 : spsa.stability;
            const double k = static_cast<double>(it) + 1.0;
            const double ak = spsa.a / std::pow(stability + k, spsa.alpha_decay);
            const double ck = spsa.c / std::pow(k, spsa.gamma_decay);
            for (size_t i = 0; i < p; ++i) delta[i] = static_cast<double>(rng.rademacher());
            for (size_t i = 0; i < p; ++i) probe[i] = theta[i] + ck * delta[i];
            const double plus = batch_loss(probe, batch);
            for (size_t i = 0; i < p; ++i) probe[i] = theta[i] - ck * delta[i];
            const double minus = batch_loss(probe, batch);
            const double scale = (plus - minus) / (2.0 * ck);
            for (size_t i = 0; i < p; ++i) theta[i] -= ak * scale / delta[i];
        }

        const double loss = full_loss(theta);
        if (!std::isfinite(loss)) {
            throw std::runtime_error("optimize: non-finite loss at iteration " + std::to_string(it));
        }
        result.loss_trace.push_back(loss);
        if (on_iteration) on_iteration(it, theta);
    }
    result.theta = std::move(theta);
    return result;
}

Predictor dqc1_predictor(ModelConfig model) {
    model.validate();
    auto shared = std::make_shared<const ModelConfig>(std::move(model));
    const bool imag_part = [&] {
        const auto* sig = std::get_if<SignalOnly>(&shared->measurement);
        return sig != nullptr && sig->basis == Axis::Y;
    }();
    Predictor p;
    p.param_count = shared->circuit.param_count();
    p.value = [shared](std::span<const double> x, std::span<const double> theta) {
        return model_output(*shared, x, theta);
    };
    p.grad = [shared, imag_part](std::span<const double> x, std::span<const double> theta) {
        const auto g = gradient(*shared, x, theta);
        std::vector<double> out(g.size());
        for (size_t i = 0; i < g.size(); ++i) out[i] = imag_part ? g[i].imag() : g[i].real();
        return out;
    };
    p.value_grad = [shared, imag_part](std::span<const double> x, std::span<const double> theta) {
        const auto vg = value_and_gradient(*shared, x, theta);
        std::vector<double> out(vg.grad.size());
        for (size_t i = 0; i < out.size(); ++i) {
            out[i] = imag_part ? vg.grad[i].imag() : vg.grad[i].real();
        }
        const double value = imag_part ? vg.value.imag() : vg.value.real();
        return std::make_pair(value, std::move(out));
    };
    return p;
}

Predictor qnn_predictor(CircuitSpec circuit, CMat observable, double fd_step) {
    auto shared = std::make_shared<const CircuitSpec>(std::move(circuit));
    auto obs = std::make_shared<const CMat>(std::move(observable));
    Predictor p;
    p.param_count = shared->param_count();
    p.value = [shared, obs](std::span<const double> x, std::span<const double> theta) {
        return qnn_evaluate(*shared, *obs, x, theta);
    };
    p.grad = [shared, obs, fd_step](std::span<const double> x, std::span<const double> theta) {
        return qnn_gradient_fd(*shared, *obs, x, theta, fd_step);
    };
    p.value_grad = [shared, obs, fd_step](std::span<const double> x,
                                          std::span<const double> theta) {
        return std::make_pair(qnn_evaluate(*shared, *obs, x, theta),
                              qnn_gradient_fd(*shared, *obs, x, theta, fd_step));
    };
    return p;
}

std::vector<double> random_parameters(int count, RngStream& rng) {
    std::vector<double> theta(static_cast<size_t>(count));
    for (auto& t : theta) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return theta;
}

namespace {

std::vector<double> batch_gradient(const Predictor& predictor, const RMat& xs, const RVec& ys,
                                   LossKind loss, std::span<const double> theta,
                                   std::span<const int> batch) {
    std::vector<double> grad(static_cast<size_t>(predictor.param_count), 0.0);
    std::vector<double> x(static_cast<size_t>(xs.cols()));
    for (int idx : batch) {
        for (Eigen::Index j = 0; j < xs.cols(); ++j) x[static_cast<size_t>(j)] = xs(idx, j);
        const auto [pred, g] = predictor.value_grad
                                   ? predictor.value_grad(x, theta)
                                   : std::make_pair(predictor.value(x, theta),
                                                    predictor.grad(x, theta));
        double weight = 0.0;
        if (loss == LossKind::MseHalf) {
            weight = (pred - ys(idx));
        } else {
            weight = (ys(idx) * pred < 1.0) ? -ys(idx) : 0.0;
        }
        if (weight == 0.0) continue;
        for (size_t i = 0; i < grad.size(); ++i) grad[i] += weight * g[i];
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (auto& v : grad) v *= inv;
    return grad;
}

double subset_loss(const Predictor& predictor, const RMat& xs, const RVec& ys, LossKind loss,
                   std::span<const double> theta, std::span<const int> subset) {
    std::vector<double> preds(subset.size());
    std::vector<double> labels(subset.size());
    std::vector<double> x(static_cast<size_t>(xs.cols()));
    for (size_t i = 0; i < subset.size(); ++i) {
        const int idx = subset[i];
        for (Eigen::Index j = 0; j < xs.cols(); ++j) x[static_cast<size_t>(j)] = xs(idx, j);
        preds[i] = predictor.value(x, theta);
        labels[i] = ys(idx);
    }
    return loss == LossKind::MseHalf ? mse_loss(preds, labels) : hinge_loss(preds, labels);
}

double subset_accuracy(const Predictor& predictor, const RMat& xs, const RVec& ys,
                       std::span<const double> theta, std::span<const int> subset) {
    if (subset.empty()) return 0.0;
    std::vector<double> x(static_cast<size_t>(xs.cols()));
    int correct = 0;
    for (int idx : subset) {
        for (Eigen::Index j = 0; j < xs.cols(); ++j) x[static_cast<size_t>(j)] = xs(idx, j);
        const double pred = predictor.value(x, theta) >= 0.0 ? 1.0 : -1.0;
        if (pred == ys(idx)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(subset.size());
}

}  // namespace

RegressionResult train_regression(const Predictor& predictor, const RMat& xs, const RVec& ys,
                                  const OptimizerConfig& opt, const TrainConfig& train,
                                  RngStream& rng) {
    if (xs.rows() != ys.size() || xs.rows() == 0) {
        throw std::invalid_argument("train_regression: bad dataset");
    }
    std::vector<int> all(static_cast<size_t>(xs.rows()));
    std::iota(all.begin(), all.end(), 0);

    const LossFn full = [&](std::span<const double> theta) {
        return subset_loss(predictor, xs, ys, train.loss, theta, all);
    };
    const BatchGradFn grad = [&](std::span<const double> theta, std::span<const int> batch) {
        return batch_gradient(predictor, xs, ys, train.loss, theta, batch);
    };
    const BatchLossFn batch_loss = [&](std::span<const double> theta, std::span<const int> batch) {
        return subset_loss(predictor, xs, ys, train.loss, theta, batch);
    };

    std::vector<double> theta0 = random_parameters(predictor.param_count, rng);
    auto res = optimize(full, grad, batch_loss, static_cast<int>(xs.rows()), std::move(theta0), opt,
                        train, rng);
    RegressionResult out;
    out.final_mse = res.loss_trace.back();
    out.theta = std::move(res.theta);
    out.mse_trace = std::move(res.loss_trace);
    return out;
}

ClassifierResult train_classifier(const Predictor& predictor, const Dataset& ds,
                                  const OptimizerConfig& opt, const TrainConfig& train,
                                  RngStream& rng) {
    if (ds.train_idx.empty()) throw std::invalid_argument("train_classifier: dataset has no split");
    for (Eigen::Index i = 0; i < ds.y.size(); ++i) {
        if (ds.y(i) != 1.0 && ds.y(i) != -1.0) {
            throw std::invalid_argument("train_classifier: labels must be +/-1");
        }
    }
    const auto& train_idx = ds.train_idx;
    const auto& test_idx = ds.test_idx;

    // One "iteration" of the config is an epoch; each epoch walks the
    // shuffled train split in batch-size chunks.
    const int epochs = train.iterations;
    const int steps_per_epoch =
        (static_cast<int>(train_idx.size()) + train.batch_size - 1) / train.batch_size;

    const LossFn full = [&](std::span<const double> theta) {
        return subset_loss(predictor, ds.X, ds.y, train.loss, theta, train_idx);
    };
    const BatchGradFn grad = [&](std::span<const double> theta, std::span<const int> batch) {
        std::vector<int> rows(batch.size());
        for (size_t i = 0; i < batch.size(); ++i) rows[i] = train_idx[static_cast<size_t>(batch[i])];
        return batch_gradient(predictor, ds.X, ds.y, train.loss, theta, rows);
    };
    const BatchLossFn batch_loss = [&](std::span<const double> theta, std::span<const int> batch) {
        std::vector<int> rows(batch.size());
        for (size_t i = 0; i < batch.size(); ++i) rows[i] = train_idx[static_cast<size_t>(batch[i])];
        return subset_loss(predictor, ds.X, ds.y, train.loss, theta, rows);
    };

    ClassifierResult out;
    TrainConfig run_cfg = train;
    run_cfg.iterations = epochs * steps_per_epoch;
    run_cfg.batch_size = std::min(train.batch_size, static_cast<int>(train_idx.size()));
    const IterationCallback record = [&](int it, std::span<const double> theta) {
        if ((it + 1) % steps_per_epoch != 0) return;
        out.train_accuracy.push_back(subset_accuracy(predictor, ds.X, ds.y, theta, train_idx));
        out.test_accuracy.push_back(subset_accuracy(predictor, ds.X, ds.y, theta, test_idx));
    };
    auto res = optimize(full, grad, batch_loss, static_cast<int>(train_idx.size()),
                        random_parameters(predictor.param_count, rng), opt, run_cfg, rng, record);
    out.theta = std::move(res.theta);
    out.loss_trace = std::move(res.loss_trace);
    return out;
}

}  // namespace dqc1lab
