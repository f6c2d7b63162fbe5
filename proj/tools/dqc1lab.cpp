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
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dqc1lab/experiments.hpp"

namespace {

struct CommandArgs {
    std::string config_path;
    std::string out_dir = "out";
    uint64_t seed = 0;
};

void add_experiment(CLI::App& app, const std::string& name, const std::string& description,
                    std::vector<std::pair<std::string, CommandArgs>>& invocations) {
    auto* sub = app.add_subcommand(name, description);
    auto args = std::make_shared<CommandArgs>();
    sub->add_option("--config", args->config_path, "JSON experiment configuration");
    sub->add_option("--seed", args->seed, "Root seed (default 0)");
    sub->add_option("--out", args->out_dir, "Output directory (default ./out)");
    sub->callback([&invocations, name, args] { invocations.emplace_back(name, *args); });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DQC1 simulation and training experiments"};
    app.require_subcommand(1);

    std::vector<std::pair<std::string, CommandArgs>> invocations;
    add_experiment(app, "gradcheck", "Analytic vs finite-difference gradients", invocations);
    add_experiment(app, "fit", "Univariate function approximation", invocations);
    add_experiment(app, "compare-qnn", "DQC1 vs QNN regression comparison", invocations);
    add_experiment(app, "classify", "Binary classification on CSV datasets", invocations);
    add_experiment(app, "spectrum", "Frequency enumeration and DFT extraction", invocations);
    add_experiment(app, "concentration", "Haar concentration study", invocations);
    add_experiment(app, "optsweep", "Optimizer and learning-rate comparison", invocations);

    CLI11_PARSE(app, argc, argv);

    int exit_code = 0;
    for (const auto& [name, args] : invocations) {
        nlohmann::json config = nlohmann::json::object();
        if (!args.config_path.empty()) {
            std::ifstream in(args.config_path);
            if (!in) {
                std::cerr << "cannot open config file " << args.config_path << "\n";
                return 2;
            }
            try {
                in >> config;
            } catch (const std::exception& e) {
                std::cerr << "bad config file: " << e.what() << "\n";
                return 2;
            }
        }
        dqc1lab::ExperimentIO io;
        io.out_dir = args.out_dir;
        io.seed = args.seed;
        io.log = &std::cout;
        exit_code = std::max(exit_code, dqc1lab::run_command(name, std::move(config), io));
    }
    return exit_code;
}
