#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fengshui/dataset.hpp"

namespace fengshui {

enum class ModelKind { knn, decision_tree, random_forest };

std::string_view to_string(ModelKind kind);
// Throws Error{InvalidConfig}.
ModelKind parse_model_kind(std::string_view s);

struct SplitFeatures {
    enum class Mode { sqrt, all, fixed };
    Mode mode = Mode::sqrt;
    int count = 0;

    // Number of features tried at each split for a d-column problem.
    std::size_t resolve(std::size_t d) const;
    static SplitFeatures parse(std::string_view s);
    std::string to_string() const;

    bool operator==(const SplitFeatures&) const = default;
};

struct ModelSpec {
    ModelKind kind = ModelKind::knn;
    int knn_k = 3;
    std::optional<int> tree_max_depth;  // nullopt: unlimited
    int tree_min_leaf = 1;
    int forest_n_trees = 100;
    SplitFeatures forest_features_per_split;
    bool forest_bootstrap = true;
    bool standardize_features = true;  // KNN only
    std::uint64_t seed = 0;

    bool operator==(const ModelSpec&) const = default;
};

void check_model_spec(const ModelSpec& spec);

// 1 - p0^2 - p1^2. Throws Error{EmptyNode} when both counts are zero.
double gini(std::size_t n0, std::size_t n1);

struct TreeNode {
    // -1 marks a leaf.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;
    std::size_t n0 = 0;
    std::size_t n1 = 0;

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

// Binary CART tree; a query goes left when x[feature] <= threshold.
struct DecisionTree {
    std::vector<TreeNode> nodes;

    int predict(std::span<const double> x) const;
    std::size_t depth() const;
    bool operator==(const DecisionTree&) const = default;
};

struct KnnState {
    FeatureMatrix train;  // standardized when enabled
    std::vector<int> labels;
    std::vector<double> center;
    // 1/std per column; 0 for constant columns so they add no distance.
    std::vector<double> scale;
};

struct ForestState {
    std::vector<DecisionTree> trees;
};

struct TrainedModel {
    ModelSpec spec;
    std::vector<std::string> feature_names;
    std::variant<KnnState, DecisionTree, ForestState> state;

    // Throws Error{FeatureNameMismatch} when x has the wrong width.
    int predict(std::span<const double> x) const;
    // Projects the model's features out of a full vector by name.
    int predict(const FeatureVector& fv) const;
};

// Throws Error{EmptyTrainingSet | FeatureNameMismatch | InvalidConfig}.
TrainedModel fit(const ModelSpec& spec, const FeatureMatrix& x, std::span<const int> labels);

int predict(const TrainedModel& model, std::span<const double> x);
// Column names of x must equal the model's feature names.
std::vector<int> predict_all(const TrainedModel& model, const FeatureMatrix& x);

inline constexpr int kModelFormatVersion = 1;

nlohmann::ordered_json to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const TrainedModel& model);
// Throws Error{VersionMismatch | MalformedDocument}.
TrainedModel model_from_json(const nlohmann::json& j);

}  // namespace fengshui
