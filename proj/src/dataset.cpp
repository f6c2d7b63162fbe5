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
#include "dqc1lab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dqc1lab/sym_eig.hpp"

namespace dqc1lab {

namespace {

using nlohmann::json;

json parse_provenance(const std::string& text) { return json::parse(text); }

void push_step(Dataset& ds, json step) {
    json log = parse_provenance(ds.provenance);
    log.push_back(std::move(step));
    ds.provenance = log.dump();
}

double parse_number(const std::string& cell, const std::string& context) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw std::invalid_argument("load_csv: non-numeric cell '" + cell + "' in " + context);
    }
    return value;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::vector<int> indices_of(const Dataset& ds, bool train) {
    if (!ds.train_idx.empty() || !ds.test_idx.empty()) {
        return train ? ds.train_idx : ds.test_idx;
    }
    // No split yet: treat every row as train.
    if (!train) return {};
    std::vector<int> all(static_cast<size_t>(ds.size()));
    std::iota(all.begin(), all.end(), 0);
    return all;
}

Dataset apply_pca(const Dataset& ds, const RVec& mean, const RMat& basis, json step) {
    Dataset out = ds;
    const RMat centered = ds.X.rowwise() - mean.transpose();
    out.X = centered * basis;
    push_step(out, std::move(step));
    return out;
}

Dataset apply_minmax(const Dataset& ds, const RVec& lo, const RVec& hi, double upper, json step) {
    Dataset out = ds;
    std::vector<char> is_test(static_cast<size_t>(ds.size()), 0);
    for (int i : ds.test_idx) is_test[static_cast<size_t>(i)] = 1;
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
        const double range = hi(j) - lo(j);
        for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
            double v;
            if (range == 0.0) {
                v = 0.5 * upper;
            } else {
                v = (ds.X(i, j) - lo(j)) / range * upper;
            }
            if (is_test[static_cast<size_t>(i)]) {
                v = std::clamp(v, -0.5 * upper, 1.5 * upper);
            }
            out.X(i, j) = v;
        }
    }
    push_step(out, std::move(step));
    return out;
}

}  // namespace

TargetFunction target_function(const std::string& id) {
    TargetFunction fn;
    fn.id = id;
    if (id == "g1") {
        fn.max_frequency = 2;
    } else if (id == "g2") {
        fn.max_frequency = 3;
    } else if (id == "g3") {
        fn.max_frequency = 4;
    } else {
        throw std::invalid_argument("target_function: unknown id '" + id + "'");
    }
    return fn;
}

Complex target_series(const TargetFunction& fn, double x) {
    Complex sum = fn.c0;
    for (int k = 1; k <= fn.max_frequency; ++k) {
        sum += fn.ck * std::exp(Complex(0.0, k * x));
        sum += fn.ck * std::exp(Complex(0.0, -k * x));
    }
    return sum;
}

double target_value(const TargetFunction& fn, double x) { return target_series(fn, x).real(); }

TargetGrid target_grid(const TargetFunction& fn) {
    constexpr int kPoints = 70;
    TargetGrid grid;
    grid.x.resize(kPoints);
    grid.y.resize(kPoints);
    for (int j = 0; j < kPoints; ++j) {
        const double x = -6.0 + 12.0 * static_cast<double>(j) / (kPoints - 1);
        grid.x(j) = x;
        grid.y(j) = target_value(fn, x);
    }
    return grid;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 std::optional<std::pair<double, double>> classes) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_csv: cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("load_csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_line(line);
    const auto label_it = std::find(header.begin(), header.end(), label_column);
    if (label_it == header.end()) {
        throw std::invalid_argument("load_csv: label column '" + label_column + "' not found");
    }
    const auto label_pos = static_cast<size_t>(label_it - header.begin());

    std::vector<std::vector<double>> rows;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw std::invalid_argument("load_csv: ragged row at line " + std::to_string(line_no));
        }
        std::vector<double> row(cells.size());
        for (size_t c = 0; c < cells.size(); ++c) {
            row[c] = parse_number(cells[c], "line " + std::to_string(line_no));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("load_csv: empty dataset");

    std::vector<std::vector<double>> kept;
    std::vector<double> labels;
    for (const auto& row : rows) {
        const double label = row[label_pos];
        double mapped = label;
        if (classes) {
            if (label == classes->first) {
                mapped = 1.0;
            } else if (label == classes->second) {
                mapped = -1.0;
            } else {
                continue;
            }
        }
        std::vector<double> features;
        features.reserve(row.size() - 1);
        for (size_t c = 0; c < row.size(); ++c) {
            if (c != label_pos) features.push_back(row[c]);
        }
        kept.push_back(std::move(features));
        labels.push_back(mapped);
    }
    if (kept.empty()) {
        throw std::invalid_argument("load_csv: no rows left after class filtering");
    }
    if (classes) {
        const bool has_pos = std::find(labels.begin(), labels.end(), 1.0) != labels.end();
        const bool has_neg = std::find(labels.begin(), labels.end(), -1.0) != labels.end();
        if (!has_pos || !has_neg) {
            throw std::invalid_argument("load_csv: requested classes missing from file");
        }
    }

    Dataset ds;
    ds.X.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(kept[0].size()));
    ds.y.resize(static_cast<Eigen::Index>(kept.size()));
    for (size_t i = 0; i < kept.size(); ++i) {
        for (size_t j = 0; j < kept[i].size(); ++j) {
            ds.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kept[i][j];
        }
        ds.y(static_cast<Eigen::Index>(i)) = labels[i];
    }
    json step{{"step", "load"},
              {"path", path.string()},
              {"label_column", label_column},
              {"rows", ds.X.rows()},
              {"features", ds.X.cols()}};
    if (classes) step["classes"] = {classes->first, classes->second};
    push_step(ds, std::move(step));
    return ds;
}

Dataset split(Dataset ds, double train_ratio, uint64_t seed) {
    const auto n = static_cast<int>(ds.size());
    if (n < 5) throw std::invalid_argument("split: need at least 5 rows");
    if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
        throw std::invalid_argument("split: ratio must lie in (0, 1)");
    }
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    RngStream rng(seed);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(i) + 1));
        std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
    }
    const int test_count = static_cast<int>(std::lround((1.0 - train_ratio) * n));
    const int train_count = n - test_count;
    ds.train_idx.assign(order.begin(), order.begin() + train_count);
    ds.test_idx.assign(order.begin() + train_count, order.end());
    push_step(ds, json{{"step", "split"},
                       {"ratio", train_ratio},
                       {"seed", seed},
                       {"train", ds.train_idx},
                       {"test", ds.test_idx}});
    return ds;
}

Dataset pca(const Dataset& ds, int components) {
    if (components < 1 || components > ds.feature_dim()) {
        throw std::invalid_argument("pca: component count out of range");
    }
    const std::vector<int> train = indices_of(ds, true);
    if (train.size() < 2) throw std::invalid_argument("pca: need at least two train rows");

    RVec mean = RVec::Zero(ds.feature_dim());
    for (int i : train) mean += ds.X.row(i).transpose();
    mean /= static_cast<double>(train.size());

    RMat cov = RMat::Zero(ds.feature_dim(), ds.feature_dim());
    for (int i : train) {
        const RVec c = ds.X.row(i).transpose() - mean;
        cov += c * c.transpose();
    }
    cov /= static_cast<double>(train.size()) - 1.0;

    const SymEig eig = sym_eig(cov);
    RMat basis = eig.vectors.leftCols(components);
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
        Eigen::Index arg = 0;
        basis.col(c).cwiseAbs().maxCoeff(&arg);
        if (basis(arg, c) < 0.0) basis.col(c) = -basis.col(c);
    }

    std::vector<std::vector<double>> basis_rows;
    for (Eigen::Index r = 0; r < basis.rows(); ++r) {
        std::vector<double> row(static_cast<size_t>(basis.cols()));
        for (Eigen::Index c = 0; c < basis.cols(); ++c) row[static_cast<size_t>(c)] = basis(r, c);
        basis_rows.push_back(std::move(row));
    }
    std::vector<double> mean_v(mean.data(), mean.data() + mean.size());
    std::vector<double> eigenvalues(eig.values.data(), eig.values.data() + eig.values.size());
    return apply_pca(ds, mean, basis,
                     json{{"step", "pca"},
                          {"components", components},
                          {"mean", mean_v},
                          {"basis", basis_rows},
                          {"eigenvalues", eigenvalues}});
}

Dataset minmax_scale(const Dataset& ds, double upper) {
    if (upper <= 0.0) throw std::invalid_argument("minmax_scale: upper bound must be positive");
    const std::vector<int> train = indices_of(ds, true);
    if (train.empty()) throw std::invalid_argument("minmax_scale: empty train split");

    RVec lo = RVec::Constant(ds.feature_dim(), std::numeric_limits<double>::infinity());
    RVec hi = RVec::Constant(ds.feature_dim(), -std::numeric_limits<double>::infinity());
    for (int i : train) {
        for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
            lo(j) = std::min(lo(j), ds.X(i, j));
            hi(j) = std::max(hi(j), ds.X(i, j));
        }
    }
    std::vector<int> constant_features;
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
        if (hi(j) == lo(j)) constant_features.push_back(static_cast<int>(j));
    }
    std::vector<double> lo_v(lo.data(), lo.data() + lo.size());
    std::vector<double> hi_v(hi.data(), hi.data() + hi.size());
    json step{{"step", "minmax"}, {"upper", upper}, {"min", lo_v}, {"max", hi_v}};
    if (!constant_features.empty()) {
        step["warning"] = "constant features mapped to upper/2";
        step["constant_features"] = constant_features;
    }
    return apply_minmax(ds, lo, hi, upper, std::move(step));
}

Dataset replay_provenance(Dataset raw, const std::string& provenance) {
    const json log = parse_provenance(provenance);
    for (const auto& step : log) {
        const std::string kind = step.at("step").get<std::string>();
        if (kind == "load") {
            continue;  // the caller supplies the freshly loaded dataset
        }
        if (kind == "split") {
            raw.train_idx = step.at("train").get<std::vector<int>>();
            raw.test_idx = step.at("test").get<std::vector<int>>();
            push_step(raw, step);
        } else if (kind == "pca") {
            const auto mean_v = step.at("mean").get<std::vector<double>>();
            const auto basis_rows = step.at("basis").get<std::vector<std::vector<double>>>();
            RVec mean(static_cast<Eigen::Index>(mean_v.size()));
            for (size_t i = 0; i < mean_v.size(); ++i) mean(static_cast<Eigen::Index>(i)) = mean_v[i];
            RMat basis(static_cast<Eigen::Index>(basis_rows.size()),
                       static_cast<Eigen::Index>(basis_rows[0].size()));
            for (size_t r = 0; r < basis_rows.size(); ++r) {
                for (size_t c = 0; c < basis_rows[r].size(); ++c) {
                    basis(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = basis_rows[r][c];
                }
            }
            raw = apply_pca(raw, mean, basis, step);
        } else if (kind == "minmax") {
            const auto lo_v = step.at("min").get<std::vector<double>>();
            const auto hi_v = step.at("max").get<std::vector<double>>();
            RVec lo(static_cast<Eigen::Index>(lo_v.size()));
            RVec hi(static_cast<Eigen::Index>(hi_v.size()));
            for (size_t i = 0; i < lo_v.size(); ++i) {
                lo(static_cast<Eigen::Index>(i)) = lo_v[i];
                hi(static_cast<Eigen::Index>(i)) = hi_v[i];
            }
            raw = apply_minmax(raw, lo, hi, step.at("upper").get<double>(), step);
        } else {
            throw std::invalid_argument("replay_provenance: unknown step '" + kind + "'");
        }
    }
    return raw;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save_csv: cannot open " + path.string());
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) out << "f" << j << ",";
    out << "label\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
        for (Eigen::Index j = 0; j < ds.X.cols(); ++j) out << ds.X(i, j) << ",";
        out << ds.y(i) << "\n";
    }
    std::ofstream side(path.string() + ".provenance.json");
    side << ds.provenance << "\n";
}

}  // namespace dqc1lab
