#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fengshui/features.hpp"

namespace fengshui {

struct ScoredRow {
    std::string session_id;
    FeatureVector features;
    double score = 0.0;

    bool operator==(const ScoredRow&) const = default;
};

struct LabeledDataset {
    std::vector<ScoredRow> rows;
    std::vector<int> labels;
    double split_mean = 0.0;

    std::size_t size() const { return rows.size(); }
};

// Dense row-major table of named real columns.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::vector<std::string> columns, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }
    const std::vector<std::string>& columns() const { return columns_; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols(), cols()}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols(), cols()}; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }

    FeatureMatrix select_rows(std::span<const std::size_t> indices) const;

private:
    std::vector<std::string> columns_;
    std::size_t rows_ = 0;
    std::vector<double> data_;
};

// Projects the named features (aliases allowed) out of each row. Throws
// Error{UnknownFeatureName}.
FeatureMatrix project(std::span<const ScoredRow> rows, std::span<const std::string> names);
std::vector<std::string> all_feature_names();

}  // namespace fengshui
