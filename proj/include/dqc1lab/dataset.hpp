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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dqc1lab/matrix.hpp"
#include "dqc1lab/rng.hpp"

namespace dqc1lab {

/// Feature matrix, labels, deterministic split and a JSON preprocessing log.
/// Preprocessing statistics (PCA basis, min/max) always come from the train
/// split and are recorded in `provenance` with enough detail to replay the
/// pipeline bit-identically.
struct Dataset {
    RMat X;
    RVec y;
    std::vector<int> train_idx;
    std::vector<int> test_idx;
    std::string provenance = "[]";

    Eigen::Index size() const { return X.rows(); }
    Eigen::Index feature_dim() const { return X.cols(); }
};

/// g(x) = sum_{k=-K}^{K} c_k e^{ikx} with c_0 = 0.1 and c_k = 0.05 + 0.05i
/// for every k != 0; models train against the real part.
struct TargetFunction {
    std::string id;         // g1 | g2 | g3
    int max_frequency = 2;  // K = 2, 3, 4
    Complex c0{0.1, 0.0};
    Complex ck{0.05, 0.05};
};

TargetFunction target_function(const std::string& id);

Complex target_series(const TargetFunction& fn, double x);
double target_value(const TargetFunction& fn, double x);  // Re g(x)

struct TargetGrid {
    RVec x;  // 70 points, equally spaced over [-6, 6]
    RVec y;  // Re g(x)
};
TargetGrid target_grid(const TargetFunction& fn);

/// Reads a rectangular numeric CSV with a header row. When `classes` is given,
/// keeps only rows whose label matches either class and maps the first to +1
/// and the second to -1.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 std::optional<std::pair<double, double>> classes = std::nullopt);

/// Seeded shuffle; the first `train_ratio` of rows become the train split
/// (|test| = round((1 - train_ratio) N)).
Dataset split(Dataset ds, double train_ratio, uint64_t seed);

/// Projects onto the top-k eigenvectors of the train-split covariance
/// (mean-centered, divisor N-1); each eigenvector is sign-fixed so its
/// largest-magnitude entry is positive.
Dataset pca(const Dataset& ds, int components);

/// Per-feature affine map sending the train-split min/max to [0, upper]; test
/// rows use the train statistics and are clamped to [-0.5, 1.5] * upper.
/// Constant features map to upper/2 (warning recorded in provenance).
Dataset minmax_scale(const Dataset& ds, double upper = 1.0);

/// Re-applies the provenance-recorded pipeline of `processed` to a freshly
/// loaded dataset using only the recorded statistics.
Dataset replay_provenance(Dataset raw, const std::string& provenance);

/// Writes features and labels in the load_csv schema plus a provenance JSON
/// sidecar next to it.
void save_csv(const Dataset& ds, const std::filesystem::path& path);

}  // namespace dqc1lab
