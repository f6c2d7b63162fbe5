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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace dqc1lab {

/// Worker cap: DQC1LAB_THREADS when set, hardware concurrency otherwise.
int thread_budget();

/// Runs fn(0..count-1) on up to thread_budget() workers. Results must be
/// written into caller-owned per-index storage; the index order of that
/// storage makes the merge deterministic regardless of scheduling.
void parallel_for(int count, const std::function<void(int)>& fn);

uint64_t fnv1a64(std::string_view bytes);
std::string hex64(uint64_t value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Writes "# config-hash=<hash>", the header row, then the data rows.
void write_csv(const std::filesystem::path& path, const std::string& config_hash,
               const CsvTable& table);

std::string format_double(double v);

}  // namespace dqc1lab
