#include "fengshui/dataset.hpp"

namespace fengshui {

FeatureMatrix::FeatureMatrix(std::vector<std::string> columns, std::size_t rows)
    : columns_(std::move(columns)), rows_(rows), data_(rows_ * columns_.size(), 0.0) {}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const {
    FeatureMatrix out(columns_, indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

FeatureMatrix project(std::span<const ScoredRow> rows, std::span<const std::string> names) {
    std::vector<std::size_t> idx;
    idx.reserve(names.size());
    for (const auto& n : names) idx.push_back(require_feature_index(n));
    FeatureMatrix m(std::vector<std::string>(names.begin(), names.end()), rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) m(r, c) = rows[r].features.values[idx[c]];
    return m;
}

std::vector<std::string> all_feature_names() {
    return {feature_names().begin(), feature_names().end()};
}

}  // namespace fengshui
