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
#include "dqc1lab/util.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace dqc1lab {

int thread_budget() {
    if (const char* env = std::getenv("DQC1LAB_THREADS")) {
        int value = 0;
        const auto [ptr, ec] = std::from_chars(env, env + std::string_view(env).size(), value);
        if (ec == std::errc() && value >= 1) return value;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    const int workers = std::min(thread_budget(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

std::string hex64(uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

void write_csv(const std::filesystem::path& path, const std::string& config_hash,
               const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
    out << "# config-hash=" << config_hash << "\n";
    for (size_t i = 0; i < table.header.size(); ++i) {
        out << table.header[i] << (i + 1 == table.header.size() ? "\n" : ",");
    }
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) {
            throw std::runtime_error("write_csv: row width mismatch");
        }
        for (size_t i = 0; i < row.size(); ++i) {
            out << row[i] << (i + 1 == row.size() ? "\n" : ",");
        }
    }
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

}  // namespace dqc1lab
