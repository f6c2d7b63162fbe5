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
#include "dqc1lab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "dqc1lab/dataset.hpp"
#include "dqc1lab/model.hpp"
#include "dqc1lab/optimize.hpp"
#include "dqc1lab/spectrum.hpp"
#include "dqc1lab/util.hpp"

namespace dqc1lab {

namespace {

using nlohmann::json;

std::string csv_content(const std::string& config_hash, const CsvTable& table) {
    std::ostringstream out;
    out << "# config-hash=" << config_hash << "\n";
    for (size_t i = 0; i < table.header.size(); ++i) {
        out << table.header[i] << (i + 1 == table.header.size() ? "\n" : ",");
    }
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            out << row[i] << (i + 1 == row.size() ? "\n" : ",");
        }
    }
    return out.str();
}

class RunContext {
  public:
    RunContext(std::string command, json config, const ExperimentIO& io)
        : command_(std::move(command)), config_(std::move(config)), io_(io),
          log_(io.log != nullptr ? *io.log : std::cout),
          start_(std::chrono::steady_clock::now()) {
        hash_ = hex64(fnv1a64(config_.dump() + ":" + std::to_string(io.seed)));
        std::filesystem::create_directories(io_.out_dir);
    }

    const json& config() const { return config_; }
    const std::string& hash() const { return hash_; }
    uint64_t seed() const { return io_.seed; }
    std::ostream& log() { return log_; }
    json& metrics() { return metrics_; }

    void check(const std::string& name, bool ok) {
        log_ << (ok ? "  [ok]   " : "  [FAIL] ") << name << "\n";
        checks_.push_back(ok);
        checks_json_[name] = ok;
    }

    void emit_csv(const std::string& filename, const CsvTable& table) {
        const std::string content = csv_content(hash_, table);
        std::ofstream out(io_.out_dir / filename);
        out << content;
        artifacts_[filename] = hex64(fnv1a64(content));
    }

    void emit_json(const std::string& filename, const json& payload) {
        const std::string content = payload.dump(2) + "\n";
        std::ofstream out(io_.out_dir / filename);
        out << content;
        artifacts_[filename] = hex64(fnv1a64(content));
    }

    bool finish() {
        const auto wall =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start_)
                .count();
        bool ok = true;
        for (bool c : checks_) ok = ok && c;
        json record{{"command", command_}, {"seed", io_.seed},      {"config", config_},
                    {"config_hash", hash_}, {"wall_ms", wall},      {"metrics", metrics_},
                    {"checks", checks_json_}, {"artifacts", artifacts_}, {"passed", ok}};
        emit_json("run_record.json", record);
        log_ << command_ << ": " << (ok ? "PASS" : "FAIL") << " (" << wall << " ms)\n";
        return ok;
    }

  private:
    std::string command_;
    json config_;
    ExperimentIO io_;
    std::ostream& log_;
    std::chrono::steady_clock::time_point start_;
    std::string hash_;
    json metrics_ = json::object();
    json artifacts_ = json::object();
    json checks_json_ = json::object();
    std::vector<bool> checks_;
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

TrainConfig train_config_from(const json& cfg) {
    TrainConfig train;
    train.iterations = cfg.value("iterations", 200);
    train.batch_size = cfg.value("batch", 25);
    return train;
}

// ---------------------------------------------------------------------------
// gradcheck
// ---------------------------------------------------------------------------

json gradcheck_defaults() {
    return json{{"n", 3}, {"layers", 2}, {"circuits", 20}, {"h", 1e-5}, {"tolerance", 1e-6}};
}

}  // namespace

bool cmd_gradcheck(json config, const ExperimentIO& io) {
    json cfg = gradcheck_defaults();
    cfg.update(config);
    RunContext ctx("gradcheck", cfg, io);

    const int max_n = cfg.at("n").get<int>();
    const int max_layers = cfg.at("layers").get<int>();
    const int circuits = cfg.at("circuits").get<int>();
    const double h = cfg.at("h").get<double>();
    const double tolerance = cfg.at("tolerance").get<double>();
    if (max_n > 4) throw std::invalid_argument("gradcheck: n must be <= 4");

    RngStream root(ctx.seed());
    CsvTable table;
    table.header = {"circuit", "n", "layers", "ansatz", "params", "max_error"};

    double worst = 0.0;
    for (int c = 0; c < circuits; ++c) {
        RngStream stream = root.child(static_cast<uint64_t>(c));
        const int n = 1 + static_cast<int>(stream.uniform_int(static_cast<uint64_t>(max_n)));
        const int layers =
            1 + static_cast<int>(stream.uniform_int(static_cast<uint64_t>(max_layers)));
        const int ansatz = (n >= 2 && stream.next_u64() % 2 == 0) ? 2 : 1;
        const ModelConfig model = trace_model(univariate_trace_circuit(n, layers, ansatz));
        const std::vector<double> x{stream.uniform(-std::numbers::pi, std::numbers::pi)};
        const auto theta = random_parameters(model.circuit.param_count(), stream);

        const auto analytic = gradient(model, x, theta);
        double max_err = 0.0;
        for (int slot = 0; slot < model.circuit.param_count(); ++slot) {
            const Complex fd = grad_fd(model, x, theta, slot, h);
            max_err = std::max(max_err, std::abs(analytic[static_cast<size_t>(slot)] - fd));
        }
        worst = std::max(worst, max_err);
        table.rows.push_back({std::to_string(c), std::to_string(n), std::to_string(layers),
                              std::to_string(ansatz), std::to_string(model.circuit.param_count()),
                              format_double(max_err)});
    }

    // Single-rotation circuit: f = cos(theta), derivative -sin(theta).
    RngStream single_stream = root.child(1000);
    const double theta0 = single_stream.uniform(0.0, 2.0 * std::numbers::pi);
    CircuitSpec single(1, 1);
    single.append(single_pauli_block(PauliString("Z"), 1.0));
    single.append(product_rotation_embedding(1, Axis::X, {0}));
    const ModelConfig single_model = trace_model(single);
    const std::vector<double> x0{0.0};
    const std::vector<double> t0{theta0};
    const double analytic_single = gradient(single_model, x0, t0)[0].real();
    const double single_err = std::abs(analytic_single + std::sin(theta0));

    // Commuting-generator block: boundary insertion must match the generic
    // insertion rule exactly.
    CircuitSpec commuting(2, 1);
    commuting.append(commuting_pauli_block({PauliString("ZI"), PauliString("IZ")}));
    commuting.append(product_rotation_embedding(2, Axis::X, {0, 0}));
    commuting.append(strongly_entangling_block(2));
    const ModelConfig commuting_model = trace_model(commuting);
    RngStream commuting_stream = root.child(2000);
    const std::vector<double> xc{commuting_stream.uniform(-1.0, 1.0)};
    const auto tc = random_parameters(commuting_model.circuit.param_count(), commuting_stream);
    double commuting_gap = 0.0;
    double commuting_fd_err = 0.0;
    for (int slot = 0; slot < 2; ++slot) {
        const Complex a = grad_insertion(commuting_model, xc, tc, slot);
        const Complex b = grad_commuting(commuting_model, xc, tc, slot);
        const Complex fd = grad_fd(commuting_model, xc, tc, slot, h);
        commuting_gap = std::max(commuting_gap, std::abs(a - b));
        commuting_fd_err = std::max(commuting_fd_err, std::abs(b - fd));
    }

    ctx.metrics() = json{{"max_error", worst},
                         {"single_qubit_error", single_err},
                         {"single_qubit_analytic", analytic_single},
                         {"commuting_gap", commuting_gap},
                         {"commuting_fd_error", commuting_fd_err}};
    ctx.emit_csv("gradcheck.csv", table);
    ctx.check("max |analytic - fd| <= tolerance", worst <= tolerance);
    ctx.check("single-rotation derivative is -sin(theta)", single_err <= tolerance);
    ctx.check("commuting path matches insertion rule (1e-12)", commuting_gap <= 1e-12);
    ctx.check("commuting path matches finite differences", commuting_fd_err <= tolerance);
    return ctx.finish();
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

namespace {

json fit_defaults() {
    return json{{"target", "g3"}, {"n", 4},     {"L", 2},   {"ansatz", 1},
                {"seeds", 5},     {"iterations", 200}, {"batch", 25}, {"lr", 0.15}};
}

struct FitOutcome {
    std::vector<double> final_mse;       // per seed
    std::vector<double> best_theta;
    std::vector<std::vector<double>> traces;
    int best_seed = 0;
};

FitOutcome run_fit_family(const json& cfg, uint64_t base_seed) {
    const TargetFunction target = target_function(cfg.at("target").get<std::string>());
    const TargetGrid grid = target_grid(target);
    const int n = cfg.at("n").get<int>();
    const int layers = cfg.at("L").get<int>();
    const int ansatz = cfg.at("ansatz").get<int>();
    const int seeds = cfg.at("seeds").get<int>();
    const double lr = cfg.at("lr").get<double>();
    const TrainConfig train = train_config_from(cfg);

    const RMat xs = grid.x;
    const RVec ys = grid.y;

    FitOutcome out;
    out.final_mse.resize(static_cast<size_t>(seeds));
    out.traces.resize(static_cast<size_t>(seeds));
    std::vector<std::vector<double>> thetas(static_cast<size_t>(seeds));
    parallel_for(seeds, [&](int s) {
        RngStream rng = RngStream(base_seed).child(static_cast<uint64_t>(s));
        const Predictor predictor =
            dqc1_predictor(trace_model(univariate_trace_circuit(n, layers, ansatz)));
        const auto res = train_regression(predictor, xs, ys, AdamOpt{lr}, train, rng);
        out.final_mse[static_cast<size_t>(s)] = res.final_mse;
        out.traces[static_cast<size_t>(s)] = res.mse_trace;
        thetas[static_cast<size_t>(s)] = res.theta;
    });
    out.best_seed = 0;
    for (int s = 1; s < seeds; ++s) {
        if (out.final_mse[static_cast<size_t>(s)] < out.final_mse[static_cast<size_t>(out.best_seed)]) {
            out.best_seed = s;
        }
    }
    out.best_theta = thetas[static_cast<size_t>(out.best_seed)];
    return out;
}

}  // namespace

bool cmd_fit(json config, const ExperimentIO& io) {
    json cfg = fit_defaults();
    cfg.update(config);
    RunContext ctx("fit", cfg, io);

    const FitOutcome outcome = run_fit_family(cfg, ctx.seed());
    const TargetFunction target = target_function(cfg.at("target").get<std::string>());
    const TargetGrid grid = target_grid(target);
    const int n = cfg.at("n").get<int>();
    const int layers = cfg.at("L").get<int>();
    const double best = outcome.final_mse[static_cast<size_t>(outcome.best_seed)];

    // Plot data for the best seed.
    const Predictor predictor = dqc1_predictor(
        trace_model(univariate_trace_circuit(n, layers, cfg.at("ansatz").get<int>())));
    CsvTable curve;
    curve.header = {"x", "target", "prediction"};
    for (Eigen::Index i = 0; i < grid.x.size(); ++i) {
        const std::vector<double> x{grid.x(i)};
        curve.rows.push_back({format_double(grid.x(i)), format_double(grid.y(i)),
                              format_double(predictor.value(x, outcome.best_theta))});
    }
    ctx.emit_csv("fit_curve.csv", curve);

    CsvTable trace;
    trace.header = {"seed", "iteration", "mse"};
    for (size_t s = 0; s < outcome.traces.size(); ++s) {
        for (size_t it = 0; it < outcome.traces[s].size(); ++it) {
            trace.rows.push_back(
                {std::to_string(s), std::to_string(it), format_double(outcome.traces[s][it])});
        }
    }
    ctx.emit_csv("fit_mse.csv", trace);

    ctx.metrics() = json{{"final_mse", outcome.final_mse},
                         {"best_seed", outcome.best_seed},
                         {"best_mse", best},
                         {"omega", n * layers + 1}};

    if (cfg.contains("assert_max_mse")) {
        const double bound = cfg.at("assert_max_mse").get<double>();
        ctx.check("best-of-seeds MSE <= " + format_double(bound), best <= bound);
    }
    if (cfg.value("assert_projection_floor", false)) {
        const int max_frequency = cfg.value("projection_max_frequency", (n * layers) / 2);
        const std::span<const double> gx(grid.x.data(), static_cast<size_t>(grid.x.size()));
        const std::span<const double> gy(grid.y.data(), static_cast<size_t>(grid.y.size()));
        const double residual = fourier_projection_residual(gx, gy, max_frequency);
        ctx.metrics()["projection_residual"] = residual;
        ctx.check("trained MSE >= 0.9 * projection residual", best >= 0.9 * residual);
    }
    return ctx.finish();
}

// ---------------------------------------------------------------------------
// compare-qnn
// ---------------------------------------------------------------------------

namespace {

json compare_defaults() {
    return json{{"targets", json::array({"g1", "g2", "g3"})},
                {"ansaetze", json::array({1, 2})},
                {"seeds", 5},
                {"iterations", 200},
                {"batch", 25},
                {"lr", 0.15},
                {"dqc1", json{{"n", 4}, {"L", 2}}},
                {"qnn", json{{"n", 4}, {"L", 1}}},
                {"assert_targets", json::array({"g1", "g2"})},
                {"assert_max_mean_mse", 1e-2}};
}

}  // namespace

bool cmd_compare_qnn(json config, const ExperimentIO& io) {
    json cfg = compare_defaults();
    cfg.update(config);
    RunContext ctx("compare-qnn", cfg, io);

    const auto targets = cfg.at("targets").get<std::vector<std::string>>();
    const auto ansaetze = cfg.at("ansaetze").get<std::vector<int>>();
    const int seeds = cfg.at("seeds").get<int>();
    const double lr = cfg.at("lr").get<double>();
    const TrainConfig train = train_config_from(cfg);
    const int dqc1_n = cfg.at("dqc1").at("n").get<int>();
    const int dqc1_layers = cfg.at("dqc1").at("L").get<int>();
    const int qnn_n = cfg.at("qnn").at("n").get<int>();
    const int qnn_layers = cfg.at("qnn").at("L").get<int>();

    struct Cell {
        std::string model;
        std::string target;
        int ansatz;
    };
    std::vector<Cell> cells;
    for (const std::string model : {"dqc1", "qnn"}) {
        for (const auto& target : targets) {
            for (int ansatz : ansaetze) cells.push_back({model, target, ansatz});
        }
    }

    std::vector<std::vector<double>> cell_mse(cells.size(),
                                              std::vector<double>(static_cast<size_t>(seeds)));
    const int total = static_cast<int>(cells.size()) * seeds;
    parallel_for(total, [&](int flat) {
        const int cell_idx = flat / seeds;
        const int seed = flat % seeds;
        const Cell& cell = cells[static_cast<size_t>(cell_idx)];
        const TargetGrid grid = target_grid(target_function(cell.target));
        RngStream rng = RngStream(ctx.seed())
                            .child(static_cast<uint64_t>(cell_idx))
                            .child(static_cast<uint64_t>(seed));
        Predictor predictor;
        if (cell.model == "dqc1") {
            predictor = dqc1_predictor(
                trace_model(univariate_trace_circuit(dqc1_n, dqc1_layers, cell.ansatz)));
        } else {
            const std::string letters(static_cast<size_t>(qnn_n), 'Z');
            predictor = qnn_predictor(univariate_trace_circuit(qnn_n, qnn_layers, cell.ansatz),
                                      PauliString(letters).matrix());
        }
        const auto res = train_regression(predictor, grid.x, grid.y, AdamOpt{lr}, train, rng);
        cell_mse[static_cast<size_t>(cell_idx)][static_cast<size_t>(seed)] = res.final_mse;
    });

    CsvTable table;
    table.header = {"model", "target", "ansatz", "mean_mse", "std_mse", "best_mse"};
    json cell_metrics = json::array();
    bool asserts_ok = true;
    const auto assert_targets = cfg.at("assert_targets").get<std::vector<std::string>>();
    const double max_mean = cfg.at("assert_max_mean_mse").get<double>();
    for (size_t i = 0; i < cells.size(); ++i) {
        const auto& mses = cell_mse[i];
        const double mean = mean_of(mses);
        const double sd = std_of(mses);
        const double best = *std::min_element(mses.begin(), mses.end());
        table.rows.push_back({cells[i].model, cells[i].target, std::to_string(cells[i].ansatz),
                              format_double(mean), format_double(sd), format_double(best)});
        cell_metrics.push_back(json{{"model", cells[i].model},
                                    {"target", cells[i].target},
                                    {"ansatz", cells[i].ansatz},
                                    {"mean_mse", mean},
                                    {"std_mse", sd},
                                    {"best_mse", best}});
        if (std::find(assert_targets.begin(), assert_targets.end(), cells[i].target) !=
            assert_targets.end()) {
            asserts_ok = asserts_ok && mean <= max_mean;
        }
    }
    ctx.emit_csv("compare_qnn.csv", table);
    ctx.metrics() = json{{"cells", cell_metrics}};
    ctx.check("row count = models x targets x ansaetze",
              table.rows.size() == 2 * targets.size() * ansaetze.size());
    ctx.check("mean MSE <= " + format_double(max_mean) + " on asserted targets", asserts_ok);
    return ctx.finish();
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

namespace {

json classify_defaults(const std::string& dataset) {
    json cfg{{"dataset", dataset}, {"data_dir", "data"}, {"batch", 25},        {"zz_reps", 2},
             {"ansatz", 1},        {"n", 4},             {"feature_upper", 1.0},
             {"split_ratio", 0.8}};
    if (dataset == "iris") {
        cfg["epochs"] = 40;
        cfg["lr"] = 0.09;
        cfg["batch"] = 10;
        cfg["label_column"] = "class";
        cfg["classes"] = {1, 2};
        cfg["pca_components"] = 0;
        cfg["file"] = "iris.csv";
        cfg["asserts"] = json{{"dqc1_test", 0.95}, {"qnn_test", 0.95}};
    } else if (dataset == "wine") {
        cfg["epochs"] = 110;
        cfg["lr"] = 0.004;
        cfg["zz_reps"] = 1;
        cfg["label_column"] = "class";
        cfg["classes"] = {1, 2};
        cfg["pca_components"] = 4;
        cfg["file"] = "wine.csv";
        cfg["asserts"] = json{{"dqc1_test", 0.90}, {"qnn_train", 0.90}};
    } else if (dataset == "mnist-csv") {
        cfg["epochs"] = 70;
        cfg["lr"] = 0.005;
        cfg["label_column"] = "label";
        cfg["classes"] = {0, 1};
        cfg["pca_components"] = 4;
        cfg["file"] = "mnist.csv";
        cfg["asserts"] = json{{"dqc1_test", 0.95}, {"qnn_test", 0.95}};
    } else {
        throw std::invalid_argument("classify: dataset must be iris, wine or mnist-csv");
    }
    return cfg;
}

constexpr const char* kMnistSchema =
    "expected a CSV with a header row 'label,p0,p1,...,p783' and one flattened "
    "28x28 image per row (pixel values 0-255, label digit in column 'label')";

}  // namespace

bool cmd_classify(json config, const ExperimentIO& io) {
    const std::string dataset_name = config.value("dataset", std::string("iris"));
    json cfg = classify_defaults(dataset_name);
    cfg.update(config);
    RunContext ctx("classify", cfg, io);

    std::filesystem::path path = cfg.contains("csv_path")
                                     ? std::filesystem::path(cfg.at("csv_path").get<std::string>())
                                     : std::filesystem::path(cfg.at("data_dir").get<std::string>()) /
                                           cfg.at("file").get<std::string>();
    if (!std::filesystem::exists(path)) {
        ctx.log() << "classify: missing dataset file " << path.string() << "\n";
        if (dataset_name == "mnist-csv") ctx.log() << "classify: " << kMnistSchema << "\n";
        ctx.check("dataset file present", false);
        return ctx.finish();
    }

    const auto classes = cfg.at("classes").get<std::vector<double>>();
    Dataset ds = load_csv(path, cfg.at("label_column").get<std::string>(),
                          std::make_pair(classes.at(0), classes.at(1)));
    ds = split(std::move(ds), cfg.at("split_ratio").get<double>(), ctx.seed());
    const int pca_components = cfg.at("pca_components").get<int>();
    if (pca_components > 0) ds = pca(ds, pca_components);
    ds = minmax_scale(ds, cfg.at("feature_upper").get<double>());

    const int n = cfg.at("n").get<int>();
    if (ds.feature_dim() != n) {
        throw std::invalid_argument("classify: feature count after preprocessing must equal n");
    }

    TrainConfig train;
    train.iterations = cfg.at("epochs").get<int>();
    train.batch_size = cfg.at("batch").get<int>();
    const double lr = cfg.at("lr").get<double>();
    const CircuitSpec circuit =
        zz_classifier_circuit(n, cfg.at("zz_reps").get<int>(), cfg.at("ansatz").get<int>());
    const std::string letters(static_cast<size_t>(n), 'Z');

    ClassifierResult results[2];
    parallel_for(2, [&](int which) {
        RngStream rng = RngStream(ctx.seed()).child(static_cast<uint64_t>(which));
        const Predictor predictor =
            which == 0 ? dqc1_predictor(trace_model(circuit))
                       : qnn_predictor(circuit, PauliString(letters).matrix());
        results[which] = train_classifier(predictor, ds, AdamOpt{lr}, train, rng);
    });

    CsvTable table;
    table.header = {"model", "epoch", "train_accuracy", "test_accuracy"};
    const char* names[2] = {"dqc1", "qnn"};
    for (int which = 0; which < 2; ++which) {
        const auto& res = results[which];
        for (size_t e = 0; e < res.train_accuracy.size(); ++e) {
            table.rows.push_back({names[which], std::to_string(e + 1),
                                  format_double(res.train_accuracy[e]),
                                  format_double(res.test_accuracy[e])});
        }
    }
    ctx.emit_csv("accuracy.csv", table);

    const json metrics{
        {"dataset", dataset_name},
        {"dqc1", json{{"train", results[0].train_accuracy.back()},
                      {"test", results[0].test_accuracy.back()}}},
        {"qnn", json{{"train", results[1].train_accuracy.back()},
                     {"test", results[1].test_accuracy.back()}}}};
    ctx.metrics() = metrics;

    const json asserts = cfg.at("asserts");
    auto read_metric = [&](const std::string& key) {
        const auto sep = key.find('_');
        const std::string model = key.substr(0, sep);
        const std::string split_name = key.substr(sep + 1);
        return metrics.at(model).at(split_name).get<double>();
    };
    for (const auto& [key, bound] : asserts.items()) {
        const double value = read_metric(key);
        ctx.check(key + " accuracy >= " + format_double(bound.get<double>()),
                  value >= bound.get<double>());
    }
    return ctx.finish();
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

namespace {

json spectrum_defaults() {
    return json{{"n", 2},       {"L", 3},          {"assignment", "shared"},
                {"ansatz", 1},  {"theta_draws", 10}};
}

CircuitSpec spectrum_circuit(int n, int layers, const std::string& assignment, int ansatz) {
    if (assignment == "shared") return univariate_trace_circuit(n, layers, ansatz);
    if (assignment != "generic") {
        throw std::invalid_argument("spectrum: assignment must be 'shared' or 'generic'");
    }
    CircuitSpec spec(n, n * layers);
    for (int l = 0; l < layers; ++l) {
        std::vector<int> slots(static_cast<size_t>(n));
        for (int q = 0; q < n; ++q) slots[static_cast<size_t>(q)] = l * n + q;
        spec.append(ansatz == 1 ? strongly_entangling_block(n) : su4_pair_block(n));
        spec.append(product_rotation_embedding(n, Axis::X, slots));
    }
    spec.append(ansatz == 1 ? strongly_entangling_block(n) : su4_pair_block(n));
    return spec;
}

}  // namespace

bool cmd_spectrum(json config, const ExperimentIO& io) {
    json cfg = spectrum_defaults();
    cfg.update(config);
    RunContext ctx("spectrum", cfg, io);

    const int n = cfg.at("n").get<int>();
    const int layers = cfg.at("L").get<int>();
    const std::string assignment = cfg.at("assignment").get<std::string>();
    const int draws = cfg.at("theta_draws").get<int>();

    const CircuitSpec spec = spectrum_circuit(n, layers, assignment, cfg.at("ansatz").get<int>());
    const auto frequencies = enumerate_frequencies(spec);
    const uint64_t bound = cardinality_bound(n, layers, ModelKind::Dqc1);
    const uint64_t expected = assignment == "shared"
                                  ? static_cast<uint64_t>(n) * static_cast<uint64_t>(layers) + 1
                                  : bound;

    json freq_json = json::array();
    for (const auto& f : frequencies) freq_json.push_back(f.halves);

    const ModelConfig model = trace_model(spec);
    RngStream root(ctx.seed());
    bool subset_ok = true;
    json draws_json = json::array();
    json coefficients = json::array();
    for (int d = 0; d < draws; ++d) {
        RngStream stream = root.child(static_cast<uint64_t>(d));
        const auto theta = random_parameters(spec.param_count(), stream);
        std::vector<double> base(static_cast<size_t>(spec.feature_dim()), 0.0);
        for (auto& b : base) b = stream.uniform(-1.0, 1.0);
        base[0] = 0.0;
        const Spectrum extracted = extract_coefficients_dft(model, theta, 0, base);
        // Support along axis 0 must sit inside the enumerated projection.
        std::set<int> enum_axis;
        for (const auto& f : frequencies) enum_axis.insert(f.halves[0]);
        bool draw_ok = true;
        for (const auto& f : extracted.frequencies) draw_ok = draw_ok && enum_axis.count(f.halves[0]) > 0;
        subset_ok = subset_ok && draw_ok;
        draws_json.push_back(json{{"support", extracted.frequencies.size()}, {"subset", draw_ok}});
        if (d == 0) {
            for (const auto& [f, c] : extracted.coefficients) {
                coefficients.push_back(
                    json{{"halves", f.halves}, {"re", c.real()}, {"im", c.imag()}});
            }
        }
    }

    ctx.emit_json("spectrum.json", json{{"n", n},
                                        {"L", layers},
                                        {"assignment", assignment},
                                        {"count", frequencies.size()},
                                        {"expected", expected},
                                        {"bound", bound},
                                        {"frequencies", freq_json},
                                        {"dft_draws", draws_json},
                                        {"dft_coefficients_draw0", coefficients}});
    ctx.metrics() = json{{"count", frequencies.size()}, {"expected", expected}, {"bound", bound}};
    ctx.check("cardinality matches the construction", frequencies.size() == expected);
    ctx.check("cardinality within bound", frequencies.size() <= bound);
    ctx.check("DFT support inside enumeration for every draw", subset_ok);
    return ctx.finish();
}

// ---------------------------------------------------------------------------
// concentration
// ---------------------------------------------------------------------------

namespace {

json concentration_defaults() {
    return json{{"n_range", json::array({2, 3, 4, 5, 6, 7})},
                {"samples", 2000},
                {"scaled_var_lo", 0.4},
                {"scaled_var_hi", 0.6},
                {"scaled_var_min_n", 3},
                {"ratio_lo", 3.0},
                {"ratio_hi", 5.5}};
}

}  // namespace

bool cmd_concentration(json config, const ExperimentIO& io) {
    json cfg = concentration_defaults();
    cfg.update(config);
    RunContext ctx("concentration", cfg, io);

    const auto n_range = cfg.at("n_range").get<std::vector<int>>();
    const long samples = cfg.at("samples").get<long>();
    if (samples < 500) throw std::invalid_argument("concentration: need samples >= 500");
    for (int n : n_range) {
        if (n < 1 || n > 8) throw std::invalid_argument("concentration: n_range must lie in [1, 8]");
    }

    RngStream root(ctx.seed());
    CsvTable table;
    table.header = {"n",        "samples",    "mean_re",  "mean_im",  "var_re",
                    "var_im",   "scaled_var_re", "scaled_var_im", "dev2_rate", "dev2_bound",
                    "dev3_rate", "dev3_bound", "trace_dev_rate", "trace_dev_bound"};

    std::vector<ConcentrationReport> reports;
    bool deviations_ok = true;
    for (int n : n_range) {
        const auto values = haar_trace_samples(n, samples, root.child(static_cast<uint64_t>(n)));
        const ConcentrationReport r = report_from_samples(n, values);
        reports.push_back(r);

        const double sigma = std::sqrt(r.var_re);
        auto re_rate = [&](double threshold) {
            long cnt = 0;
            for (const Complex& f : values) {
                if (std::abs(f.real() - r.mean_re) >= threshold) ++cnt;
            }
            return static_cast<double>(cnt) / static_cast<double>(values.size());
        };
        const double dev2_rate = re_rate(2.0 * sigma);
        const double dev2_bound = clamped_probability(chebyshev_bound(r.var_re, 2.0 * sigma));
        const double dev3_rate = re_rate(3.0 * sigma);
        const double dev3_bound = clamped_probability(chebyshev_bound(r.var_re, 3.0 * sigma));

        // Unnormalized-trace tail at t = 3 sqrt(2^n) against the Hoeffding form.
        const double t = 3.0 * std::sqrt(std::pow(2.0, n));
        const double norm = std::pow(2.0, n);
        long trace_cnt = 0;
        for (const Complex& f : values) {
            const Complex tr(norm * (f.real() - r.mean_re), norm * (f.imag() - r.mean_im));
            if (std::abs(tr) >= t) ++trace_cnt;
        }
        const double trace_rate = static_cast<double>(trace_cnt) / static_cast<double>(values.size());
        const double trace_bound = clamped_probability(hoeffding_bound(n, t));

        deviations_ok = deviations_ok && dev2_rate <= dev2_bound && dev3_rate <= dev3_bound &&
                        trace_rate <= trace_bound;

        table.rows.push_back({std::to_string(n), std::to_string(samples), format_double(r.mean_re),
                              format_double(r.mean_im), format_double(r.var_re),
                              format_double(r.var_im), format_double(r.scaled_var_re),
                              format_double(r.scaled_var_im), format_double(dev2_rate),
                              format_double(dev2_bound), format_double(dev3_rate),
                              format_double(dev3_bound), format_double(trace_rate),
                              format_double(trace_bound)});
    }
    ctx.emit_csv("concentration.csv", table);

    const double lo = cfg.at("scaled_var_lo").get<double>();
    const double hi = cfg.at("scaled_var_hi").get<double>();
    const int min_n = cfg.at("scaled_var_min_n").get<int>();
    bool scaled_ok = true;
    json rows = json::array();
    for (const auto& r : reports) {
        rows.push_back(json{{"n", r.n}, {"scaled_var_re", r.scaled_var_re}});
        if (r.n >= min_n) scaled_ok = scaled_ok && r.scaled_var_re >= lo && r.scaled_var_re <= hi;
    }
    bool ratio_ok = true;
    for (size_t i = 0; i + 1 < reports.size(); ++i) {
        if (reports[i + 1].n == reports[i].n + 1) {
            const double ratio = reports[i].var_re / reports[i + 1].var_re;
            ratio_ok = ratio_ok && ratio >= cfg.at("ratio_lo").get<double>() &&
                       ratio <= cfg.at("ratio_hi").get<double>();
        }
    }
    ctx.metrics() = json{{"reports", rows}};
    ctx.check("row count equals |n_range|", table.rows.size() == n_range.size());
    ctx.check("4^n Var[Re f] within [" + format_double(lo) + ", " + format_double(hi) + "]",
              scaled_ok);
    ctx.check("consecutive-n variance shrink ratio within range", ratio_ok);
    ctx.check("deviation rates never exceed bound values", deviations_ok);
    return ctx.finish();
}

// ---------------------------------------------------------------------------
// optsweep
// ---------------------------------------------------------------------------

namespace {

json optsweep_defaults() {
    return json{{"target", "g3"},
                {"n", 4},
                {"L", 2},
                {"ansaetze", json::array({1, 2})},
                {"seeds", 5},
                {"iterations", 200},
                {"batch", 25},
                {"gd", json{{"lr", 0.01}}},
                {"nesterov", json{{"lr", 0.01}, {"momentum", 0.9}}},
                {"adam", json{{"lr", 0.01}}},
                {"spsa", json{{"a", 0.2}, {"c", 0.2}}},
                {"lr_grid", json::array({0.001, 0.01, 0.15, 0.5})}};
}

}  // namespace

bool cmd_optsweep(json config, const ExperimentIO& io) {
    json cfg = optsweep_defaults();
    cfg.update(config);
    RunContext ctx("optsweep", cfg, io);

    const TargetGrid grid = target_grid(target_function(cfg.at("target").get<std::string>()));
    const int n = cfg.at("n").get<int>();
    const int layers = cfg.at("L").get<int>();
    const auto ansaetze = cfg.at("ansaetze").get<std::vector<int>>();
    const int seeds = cfg.at("seeds").get<int>();
    const TrainConfig train = train_config_from(cfg);
    const auto lr_grid = cfg.at("lr_grid").get<std::vector<double>>();

    struct Job {
        std::string section;
        std::string name;
        int ansatz;
        OptimizerConfig opt;
    };
    std::vector<Job> jobs;
    for (int ansatz : ansaetze) {
        jobs.push_back({"optimizer", "gradient-descent", ansatz,
                        GradientDescentOpt{cfg.at("gd").at("lr").get<double>()}});
        jobs.push_back({"optimizer", "spsa", ansatz,
                        SpsaOpt{cfg.at("spsa").at("a").get<double>(),
                                cfg.at("spsa").at("c").get<double>()}});
        jobs.push_back({"optimizer", "nesterov", ansatz,
                        NesterovOpt{cfg.at("nesterov").at("lr").get<double>(),
                                    cfg.at("nesterov").at("momentum").get<double>()}});
        jobs.push_back(
            {"optimizer", "adam", ansatz, AdamOpt{cfg.at("adam").at("lr").get<double>()}});
        for (double lr : lr_grid) {
            jobs.push_back({"lr_sweep", format_double(lr), ansatz, AdamOpt{lr}});
        }
    }

    std::vector<std::vector<double>> job_mse(jobs.size(),
                                             std::vector<double>(static_cast<size_t>(seeds)));
    const int total = static_cast<int>(jobs.size()) * seeds;
    parallel_for(total, [&](int flat) {
        const int job_idx = flat / seeds;
        const int seed = flat % seeds;
        const Job& job = jobs[static_cast<size_t>(job_idx)];
        RngStream rng = RngStream(ctx.seed())
                            .child(static_cast<uint64_t>(job_idx))
                            .child(static_cast<uint64_t>(seed));
        const Predictor predictor =
            dqc1_predictor(trace_model(univariate_trace_circuit(n, layers, job.ansatz)));
        const auto res = train_regression(predictor, grid.x, grid.y, job.opt, train, rng);
        job_mse[static_cast<size_t>(job_idx)][static_cast<size_t>(seed)] = res.final_mse;
    });

    CsvTable table;
    table.header = {"section", "name", "ansatz", "mean_mse", "std_mse"};
    json rows = json::array();
    for (size_t i = 0; i < jobs.size(); ++i) {
        const double mean = mean_of(job_mse[i]);
        const double sd = std_of(job_mse[i]);
        table.rows.push_back({jobs[i].section, jobs[i].name, std::to_string(jobs[i].ansatz),
                              format_double(mean), format_double(sd)});
        rows.push_back(json{{"section", jobs[i].section},
                            {"name", jobs[i].name},
                            {"ansatz", jobs[i].ansatz},
                            {"mean_mse", mean},
                            {"std_mse", sd}});
    }
    ctx.emit_csv("optsweep.csv", table);
    ctx.metrics() = json{{"rows", rows}};

    bool adam_best = true;
    bool lr_min_ok = true;
    for (int ansatz : ansaetze) {
        double adam_mean = 0.0;
        double others_min = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].section != "optimizer" || jobs[i].ansatz != ansatz) continue;
            const double mean = mean_of(job_mse[i]);
            if (jobs[i].name == "adam") {
                adam_mean = mean;
            } else {
                others_min = std::min(others_min, mean);
            }
        }
        adam_best = adam_best && adam_mean <= others_min;

        double best_lr = 0.0;
        double best_mean = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].section != "lr_sweep" || jobs[i].ansatz != ansatz) continue;
            const double mean = mean_of(job_mse[i]);
            if (mean < best_mean) {
                best_mean = mean;
                best_lr = std::stod(jobs[i].name);
            }
        }
        lr_min_ok = lr_min_ok && (best_lr == 0.01 || best_lr == 0.15);
    }
    ctx.check("Adam attains the lowest mean MSE per ansatz", adam_best);
    ctx.check("learning-rate minimum at 0.01 or 0.15 per ansatz", lr_min_ok);
    return ctx.finish();
}

int run_command(const std::string& name, json config, const ExperimentIO& io) {
    std::ostream& log = io.log != nullptr ? *io.log : std::cout;
    try {
        bool ok = false;
        if (name == "gradcheck") {
            ok = cmd_gradcheck(std::move(config), io);
        } else if (name == "fit") {
            ok = cmd_fit(std::move(config), io);
        } else if (name == "compare-qnn") {
            ok = cmd_compare_qnn(std::move(config), io);
        } else if (name == "classify") {
            ok = cmd_classify(std::move(config), io);
        } else if (name == "spectrum") {
            ok = cmd_spectrum(std::move(config), io);
        } else if (name == "concentration") {
            ok = cmd_concentration(std::move(config), io);
        } else if (name == "optsweep") {
            ok = cmd_optsweep(std::move(config), io);
        } else {
            log << "unknown command '" << name << "'\n";
            return 2;
        }
        return ok ? 0 : 1;
    } catch (const std::exception& e) {
        log << name << ": error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace dqc1lab
