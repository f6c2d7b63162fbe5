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
#include <catch2/catch_amalgamated.hpp>
#include <fstream>
#include <sstream>

#include "dqc1lab/experiments.hpp"
#include "helpers.hpp"

using namespace dqc1lab;
using nlohmann::json;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentIO io_for(const std::filesystem::path& dir, uint64_t seed, std::ostream& log) {
    ExperimentIO io;
    io.out_dir = dir;
    io.seed = seed;
    io.log = &log;
    return io;
}

}  // namespace

TEST_CASE("gradcheck command passes its default configuration") {
    const auto dir = fresh_dir("dqc1lab_test_gradcheck");
    std::ostringstream log;
    CHECK(cmd_gradcheck(json::object(), io_for(dir, 1, log)));
    const std::string csv = slurp(dir / "gradcheck.csv");
    CHECK(csv.rfind("# config-hash=", 0) == 0);
    CHECK(csv.find("circuit,n,layers,ansatz,params,max_error") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "run_record.json"));
}

TEST_CASE("spectrum command counts shared and generic spectra") {
    std::ostringstream log;
    const auto dir = fresh_dir("dqc1lab_test_spectrum");
    CHECK(cmd_spectrum(json{{"n", 4}, {"L", 1}, {"theta_draws", 3}}, io_for(dir, 2, log)));
    const json report = json::parse(slurp(dir / "spectrum.json"));
    CHECK(report.at("count").get<int>() == 5);

    const auto dir2 = fresh_dir("dqc1lab_test_spectrum_generic");
    CHECK(cmd_spectrum(json{{"n", 2}, {"L", 2}, {"assignment", "generic"}, {"theta_draws", 2}},
                       io_for(dir2, 2, log)));
    const json report2 = json::parse(slurp(dir2 / "spectrum.json"));
    CHECK(report2.at("count").get<int>() == 16);
}

TEST_CASE("concentration command emits one row per n") {
    std::ostringstream log;
    const auto dir = fresh_dir("dqc1lab_test_conc");
    CHECK(cmd_concentration(json{{"n_range", json::array({2, 3})}, {"samples", 500}},
                            io_for(dir, 3, log)));
    const std::string csv = slurp(dir / "concentration.csv");
    int lines = 0;
    for (char c : csv) lines += c == '\n' ? 1 : 0;
    CHECK(lines == 2 + 2);  // hash comment + header + two data rows
}

TEST_CASE("fit command is deterministic and writes plot data") {
    std::ostringstream log;
    const json cfg{{"target", "g1"}, {"n", 2}, {"L", 1}, {"seeds", 1}, {"iterations", 8}};
    const auto dir_a = fresh_dir("dqc1lab_test_fit_a");
    const auto dir_b = fresh_dir("dqc1lab_test_fit_b");
    cmd_fit(cfg, io_for(dir_a, 5, log));
    cmd_fit(cfg, io_for(dir_b, 5, log));
    CHECK(slurp(dir_a / "fit_curve.csv") == slurp(dir_b / "fit_curve.csv"));
    CHECK(slurp(dir_a / "fit_mse.csv") == slurp(dir_b / "fit_mse.csv"));

    const json record = json::parse(slurp(dir_a / "run_record.json"));
    CHECK(record.at("metrics").at("final_mse").size() == 1);
    CHECK(record.at("artifacts").contains("fit_curve.csv"));

    const auto dir_c = fresh_dir("dqc1lab_test_fit_c");
    cmd_fit(cfg, io_for(dir_c, 6, log));
    CHECK(slurp(dir_a / "fit_mse.csv") != slurp(dir_c / "fit_mse.csv"));
}

TEST_CASE("compare command reports the full cell grid") {
    std::ostringstream log;
    const auto dir = fresh_dir("dqc1lab_test_compare");
    const json cfg{{"targets", json::array({"g1"})},
                   {"seeds", 1},
                   {"iterations", 5},
                   {"assert_targets", json::array()}};
    CHECK(cmd_compare_qnn(cfg, io_for(dir, 7, log)));
    const std::string csv = slurp(dir / "compare_qnn.csv");
    int lines = 0;
    for (char c : csv) lines += c == '\n' ? 1 : 0;
    CHECK(lines == 2 + 4);  // 2 models x 1 target x 2 ansaetze
}

TEST_CASE("classify smoke run trains on the bundled MNIST fixture") {
    std::ostringstream log;
    const auto dir = fresh_dir("dqc1lab_test_classify");
    const json cfg{{"dataset", "mnist-csv"},
                   {"csv_path", (dqc1lab::testing::data_dir() / "mnist_smoke.csv").string()},
                   {"epochs", 2},
                   {"asserts", json::object()}};
    CHECK(cmd_classify(cfg, io_for(dir, 8, log)));
    const std::string csv = slurp(dir / "accuracy.csv");
    CHECK(csv.find("model,epoch,train_accuracy,test_accuracy") != std::string::npos);
    CHECK(csv.find("dqc1") != std::string::npos);
    CHECK(csv.find("qnn") != std::string::npos);
}

TEST_CASE("classify names the expected schema when the MNIST csv is missing") {
    std::ostringstream log;
    const auto dir = fresh_dir("dqc1lab_test_classify_missing");
    const json cfg{{"dataset", "mnist-csv"}, {"csv_path", "/nonexistent/mnist.csv"}};
    CHECK_FALSE(cmd_classify(cfg, io_for(dir, 9, log)));
    CHECK(log.str().find("label,p0,p1,...,p783") != std::string::npos);
}

TEST_CASE("optsweep smoke run emits the full table") {
    std::ostringstream log;
    const auto dir = fresh_dir("dqc1lab_test_optsweep");
    const json cfg{{"seeds", 1},
                   {"iterations", 4},
                   {"n", 2},
                   {"L", 1},
                   {"ansaetze", json::array({1})},
                   {"lr_grid", json::array({0.01, 0.15})}};
    cmd_optsweep(cfg, io_for(dir, 10, log));  // checks may fail at 4 iterations
    const std::string csv = slurp(dir / "optsweep.csv");
    int lines = 0;
    for (char c : csv) lines += c == '\n' ? 1 : 0;
    CHECK(lines == 2 + 4 + 2);  // hash + header + 4 optimizers + 2 sweep points
    CHECK(csv.find("gradient-descent") != std::string::npos);
    CHECK(csv.find("spsa") != std::string::npos);
}

TEST_CASE("run_command dispatch") {
    std::ostringstream log;
    const auto dir = fresh_dir("dqc1lab_test_dispatch");
    CHECK(run_command("nope", json::object(), io_for(dir, 0, log)) == 2);
    CHECK(run_command("spectrum", json{{"n", 1}, {"L", 1}, {"theta_draws", 1}},
                      io_for(dir, 0, log)) == 0);
    // Bad config surfaces as exit code 2 rather than a crash.
    CHECK(run_command("spectrum", json{{"assignment", "bogus"}}, io_for(dir, 0, log)) == 2);
}

TEST_CASE("artifact hashes make reruns comparable") {
    std::ostringstream log;
    const auto dir_a = fresh_dir("dqc1lab_test_record_a");
    const auto dir_b = fresh_dir("dqc1lab_test_record_b");
    const json cfg{{"n", 2}, {"L", 1}, {"theta_draws", 2}};
    cmd_spectrum(cfg, io_for(dir_a, 11, log));
    cmd_spectrum(cfg, io_for(dir_b, 11, log));
    const json ra = json::parse(slurp(dir_a / "run_record.json"));
    const json rb = json::parse(slurp(dir_b / "run_record.json"));
    CHECK(ra.at("artifacts") == rb.at("artifacts"));
    CHECK(ra.at("config_hash") == rb.at("config_hash"));
}
