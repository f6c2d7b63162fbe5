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

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

namespace dqc1lab {

struct ExperimentIO {
    std::filesystem::path out_dir = "out";
    uint64_t seed = 0;
    std::ostream* log = nullptr;  // defaults to std::cout
};

// Each command fills in config defaults, runs its experiment, writes the plot
// data (CSV/JSON) plus a run_record.json into io.out_dir, logs one line per
// built-in check, and returns whether every check passed.

bool cmd_gradcheck(nlohmann::json config, const ExperimentIO& io);
bool cmd_fit(nlohmann::json config, const ExperimentIO& io);
bool cmd_compare_qnn(nlohmann::json config, const ExperimentIO& io);
bool cmd_classify(nlohmann::json config, const ExperimentIO& io);
bool cmd_spectrum(nlohmann::json config, const ExperimentIO& io);
bool cmd_concentration(nlohmann::json config, const ExperimentIO& io);
bool cmd_optsweep(nlohmann::json config, const ExperimentIO& io);

/// Dispatch by subcommand name; returns the process exit code
/// (0 pass, 1 checks failed, 2 bad command or error).
int run_command(const std::string& name, nlohmann::json config, const ExperimentIO& io);

}  // namespace dqc1lab
