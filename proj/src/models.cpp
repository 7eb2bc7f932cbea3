#include "fengshui/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "fengshui/error.hpp"
#include "fengshui/rng.hpp"
#include "fengshui/text.hpp"

namespace fengshui {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::knn: return "knn";
        case ModelKind::decision_tree: return "decision_tree";
        case ModelKind::random_forest: return "random_forest";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view s) {
    if (s == "knn") return ModelKind::knn;
    if (s == "decision_tree" || s == "tree") return ModelKind::decision_tree;
    if (s == "random_forest" || s == "forest") return ModelKind::random_forest;
    throw Error(ErrorCode::InvalidConfig, "unknown model kind '" + std::string(s) + "'");
}

std::size_t SplitFeatures::resolve(std::size_t d) const {
    switch (mode) {
        case Mode::all: return d;
        case Mode::fixed: return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(count, 1)), 1, d);
        case Mode::sqrt:
        default:
            return std::clamp<std::size_t>(static_cast<std::size_t>(std::sqrt(static_cast<double>(d))), 1, d);
    }
}

SplitFeatures SplitFeatures::parse(std::string_view s) {
    if (s == "sqrt") return {Mode::sqrt, 0};
    if (s == "all") return {Mode::all, 0};
    const auto n = text::parse_int(s);
    if (!n || *n < 1)
        throw Error(ErrorCode::InvalidConfig, "features per split must be 'sqrt', 'all' or a positive integer");
    return {Mode::fixed, static_cast<int>(*n)};
}

std::string SplitFeatures::to_string() const {
    switch (mode) {
        case Mode::all: return "all";
        case Mode::fixed: return std::to_string(count);
        case Mode::sqrt:
        default: return "sqrt";
    }
}

void check_model_spec(const ModelSpec& spec) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(ErrorCode::InvalidConfig, what);
    };
    require(spec.knn_k >= 1, "knn_k must be >= 1");
    require(!spec.tree_max_depth || *spec.tree_max_depth >= 0, "tree_max_depth must be >= 0");
    require(spec.tree_min_leaf >= 1, "tree_min_leaf must be >= 1");
    require(spec.forest_n_trees >= 1, "forest_n_trees must be >= 1");
    require(spec.forest_features_per_split.mode != SplitFeatures::Mode::fixed ||
                spec.forest_features_per_split.count >= 1,
            "forest_features_per_split must be >= 1");
}

double gini(std::size_t n0, std::size_t n1) {
    const std::size_t n = n0 + n1;
    if (n == 0) throw Error(ErrorCode::EmptyNode, "gini of an empty node");
    const double p0 = static_cast<double>(n0) / static_cast<double>(n);
    const double p1 = static_cast<double>(n1) / static_cast<double>(n);
    return 1.0 - p0 * p0 - p1 * p1;
}

int DecisionTree::predict(std::span<const double> x) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const auto& node = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                 : node.right);
    }
    return nodes[i].label;
}

std::size_t DecisionTree::depth() const {
    if (nodes.empty()) return 0;
    std::size_t best = 0;
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        const auto& node = nodes[static_cast<std::size_t>(i)];
        if (!node.is_leaf()) {
            stack.emplace_back(node.left, d + 1);
            stack.emplace_back(node.right, d + 1);
        }
    }
    return best;
}

namespace {

class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix& x, std::span<const int> y, const ModelSpec& spec, std::size_t per_split,
                CounterRng* rng)
        : x_(x), y_(y), spec_(spec), per_split_(per_split), rng_(rng) {}

    DecisionTree build(std::vector<std::size_t> indices) {
        tree_.nodes.clear();
        grow(std::move(indices), 0);
        return std::move(tree_);
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double impurity = 0.0;
    };

    int grow(std::vector<std::size_t> idx, std::size_t depth) {
        TreeNode node;
        for (auto i : idx) (y_[i] == 1 ? node.n1 : node.n0)++;
        // Even leaves resolve to label 0.
        node.label = node.n1 > node.n0 ? 1 : 0;
        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.push_back(node);

        const auto min_leaf = static_cast<std::size_t>(spec_.tree_min_leaf);
        const bool pure = node.n0 == 0 || node.n1 == 0;
        const bool depth_capped = spec_.tree_max_depth && depth >= static_cast<std::size_t>(*spec_.tree_max_depth);
        if (pure || depth_capped || idx.size() < 2 * min_leaf) return id;

        const Split split = best_split(idx, node.n0, node.n1);
        if (split.feature < 0) return id;

        std::vector<std::size_t> left, right;
        for (auto i : idx)
            (x_(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(i);
        idx.clear();
        idx.shrink_to_fit();

        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        auto& stored = tree_.nodes[static_cast<std::size_t>(id)];
        stored.feature = split.feature;
        stored.threshold = split.threshold;
        stored.left = l;
        stored.right = r;
        return id;
    }

    std::vector<std::size_t> candidate_features() {
        const std::size_t d = x_.cols();
        std::vector<std::size_t> all(d);
        std::iota(all.begin(), all.end(), std::size_t{0});
        if (rng_ == nullptr || per_split_ >= d) return all;
        for (std::size_t i = 0; i < per_split_; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng_->below(d - i));
            std::swap(all[i], all[j]);
        }
        all.resize(per_split_);
        std::sort(all.begin(), all.end());
        return all;
    }

    // Lowest weighted Gini; ties go to the lower feature index, then the
    // smaller threshold.
    Split best_split(const std::vector<std::size_t>& idx, std::size_t n0, std::size_t n1) {
        const auto min_leaf = static_cast<std::size_t>(spec_.tree_min_leaf);
        const double n = static_cast<double>(idx.size());
        Split best;
        double best_impurity = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> order(idx);
        for (std::size_t f : candidate_features()) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double va = x_(a, f), vb = x_(b, f);
                return va < vb || (va == vb && a < b);
            });
            std::size_t l0 = 0, l1 = 0;
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                (y_[order[k]] == 1 ? l1 : l0)++;
                const double v = x_(order[k], f);
                const double next = x_(order[k + 1], f);
                if (v == next) continue;
                const std::size_t nl = k + 1;
                const std::size_t nr = order.size() - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                const double impurity = (static_cast<double>(nl) * gini(l0, l1) +
                                         static_cast<double>(nr) * gini(n0 - l0, n1 - l1)) /
                                        n;
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    double threshold = v + (next - v) * 0.5;
                    if (!(threshold < next)) threshold = v;
                    best = {static_cast<int>(f), threshold, impurity};
                }
            }
        }
        return best;
    }

    const FeatureMatrix& x_;
    std::span<const int> y_;
    const ModelSpec& spec_;
    std::size_t per_split_;
    CounterRng* rng_;
    DecisionTree tree_;
};

KnnState fit_knn(const ModelSpec& spec, const FeatureMatrix& x, std::span<const int> labels) {
    KnnState s;
    const std::size_t d = x.cols();
    s.center.assign(d, 0.0);
    s.scale.assign(d, 1.0);
    if (spec.standardize_features) {
        const double n = static_cast<double>(x.rows());
        for (std::size_t c = 0; c < d; ++c) {
            double sum = 0.0;
            for (std::size_t r = 0; r < x.rows(); ++r) sum += x(r, c);
            const double mean = sum / n;
            double ss = 0.0;
            for (std::size_t r = 0; r < x.rows(); ++r) ss += (x(r, c) - mean) * (x(r, c) - mean);
            const double sd = std::sqrt(ss / n);
            s.center[c] = mean;
            s.scale[c] = sd > 0.0 ? 1.0 / sd : 0.0;
        }
    }
    s.train = FeatureMatrix(x.columns(), x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < d; ++c) s.train(r, c) = (x(r, c) - s.center[c]) * s.scale[c];
    s.labels.assign(labels.begin(), labels.end());
    return s;
}

// Neighbors ordered by (distance, label, index): distance ties favor label
// 0. An even vote goes to the nearest neighbor's label.
int predict_knn(const KnnState& s, int k, std::span<const double> x) {
    const std::size_t n = s.train.rows();
    const std::size_t d = s.train.cols();
    std::vector<double> q(d);
    for (std::size_t c = 0; c < d; ++c) q[c] = (x[c] - s.center[c]) * s.scale[c];

    std::vector<std::tuple<double, int, std::size_t>> nn(n);
    for (std::size_t r = 0; r < n; ++r) {
        double dist = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = s.train(r, c) - q[c];
            dist += diff * diff;
        }
        nn[r] = {dist, s.labels[r], r};
    }
    const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), n);
    std::partial_sort(nn.begin(), nn.begin() + static_cast<std::ptrdiff_t>(kk), nn.end());
    std::size_t votes1 = 0;
    for (std::size_t i = 0; i < kk; ++i) votes1 += std::get<1>(nn[i]) == 1 ? 1 : 0;
    const std::size_t votes0 = kk - votes1;
    if (votes1 != votes0) return votes1 > votes0 ? 1 : 0;
    return std::get<1>(nn.front());
}

std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

}  // namespace

TrainedModel fit(const ModelSpec& spec, const FeatureMatrix& x, std::span<const int> labels) {
    check_model_spec(spec);
    if (x.rows() == 0) throw Error(ErrorCode::EmptyTrainingSet, "no training rows");
    if (labels.size() != x.rows())
        throw Error(ErrorCode::LengthMismatch, "label count does not match training rows");
    if (x.cols() == 0) throw Error(ErrorCode::FeatureNameMismatch, "no feature columns");
    std::set<std::string> seen;
    for (const auto& c : x.columns())
        if (c.empty() || !seen.insert(c).second)
            throw Error(ErrorCode::FeatureNameMismatch, "feature names must be non-empty and unique");
    for (int l : labels)
        if (l != 0 && l != 1) throw Error(ErrorCode::InvalidConfig, "labels must be 0 or 1");

    TrainedModel model;
    model.spec = spec;
    model.feature_names = x.columns();
    switch (spec.kind) {
        case ModelKind::knn: model.state = fit_knn(spec, x, labels); break;
        case ModelKind::decision_tree: {
            TreeBuilder builder(x, labels, spec, x.cols(), nullptr);
            model.state = builder.build(iota_indices(x.rows()));
            break;
        }
        case ModelKind::random_forest: {
            ForestState forest;
            const std::size_t per_split = spec.forest_features_per_split.resolve(x.cols());
            for (int t = 0; t < spec.forest_n_trees; ++t) {
                CounterRng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(t)));
                std::vector<std::size_t> sample;
                if (spec.forest_bootstrap) {
                    sample.resize(x.rows());
                    for (auto& s : sample) s = static_cast<std::size_t>(rng.below(x.rows()));
                } else {
                    sample = iota_indices(x.rows());
                }
                TreeBuilder builder(x, labels, spec, per_split, per_split < x.cols() ? &rng : nullptr);
                forest.trees.push_back(builder.build(std::move(sample)));
            }
            model.state = std::move(forest);
            break;
        }
    }
    return model;
}

int TrainedModel::predict(std::span<const double> x) const {
    if (x.size() != feature_names.size())
        throw Error(ErrorCode::FeatureNameMismatch, "query has " + std::to_string(x.size()) +
                                                        " features, model expects " +
                                                        std::to_string(feature_names.size()));
    return std::visit(
        [&](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, KnnState>) {
                return predict_knn(s, spec.knn_k, x);
            } else if constexpr (std::is_same_v<T, DecisionTree>) {
                return s.predict(x);
            } else {
                std::size_t votes1 = 0;
                for (const auto& tree : s.trees) votes1 += tree.predict(x) == 1 ? 1 : 0;
                // Tied forests vote 0.
                return 2 * votes1 > s.trees.size() ? 1 : 0;
            }
        },
        state);
}

int TrainedModel::predict(const FeatureVector& fv) const {
    std::vector<double> x;
    x.reserve(feature_names.size());
    for (const auto& name : feature_names) {
        const auto idx = feature_index(name);
        if (!idx) throw Error(ErrorCode::FeatureNameMismatch, "model feature '" + name + "' is not a known feature");
        x.push_back(fv.values[*idx]);
    }
    return predict(std::span<const double>(x));
}

int predict(const TrainedModel& model, std::span<const double> x) { return model.predict(x); }

std::vector<int> predict_all(const TrainedModel& model, const FeatureMatrix& x) {
    if (x.columns() != model.feature_names)
        throw Error(ErrorCode::FeatureNameMismatch, "query columns differ from the model's features");
    std::vector<int> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = model.predict(x.row(r));
    return out;
}

nlohmann::ordered_json to_json(const ModelSpec& spec) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(spec.kind);
    j["knn_k"] = spec.knn_k;
    j["tree_max_depth"] = spec.tree_max_depth ? nlohmann::ordered_json(*spec.tree_max_depth) : nullptr;
    j["tree_min_leaf"] = spec.tree_min_leaf;
    j["forest_n_trees"] = spec.forest_n_trees;
    j["forest_features_per_split"] = spec.forest_features_per_split.to_string();
    j["forest_bootstrap"] = spec.forest_bootstrap;
    j["standardize_features"] = spec.standardize_features;
    j["seed"] = spec.seed;
    return j;
}

ModelSpec model_spec_from_json(const nlohmann::json& j) {
    try {
        ModelSpec spec;
        spec.kind = parse_model_kind(j.at("kind").get<std::string>());
        spec.knn_k = j.at("knn_k").get<int>();
        if (!j.at("tree_max_depth").is_null()) spec.tree_max_depth = j.at("tree_max_depth").get<int>();
        spec.tree_min_leaf = j.at("tree_min_leaf").get<int>();
        spec.forest_n_trees = j.at("forest_n_trees").get<int>();
        spec.forest_features_per_split = SplitFeatures::parse(j.at("forest_features_per_split").get<std::string>());
        spec.forest_bootstrap = j.at("forest_bootstrap").get<bool>();
        spec.standardize_features = j.at("standardize_features").get<bool>();
        spec.seed = j.at("seed").get<std::uint64_t>();
        check_model_spec(spec);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("model spec: ") + e.what());
    }
}

namespace {

nlohmann::ordered_json tree_to_json(const DecisionTree& tree) {
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& n : tree.nodes)
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.label, n.n0, n.n1});
    return nodes;
}

DecisionTree tree_from_json(const nlohmann::json& j, std::size_t n_features) {
    DecisionTree tree;
    for (const auto& n : j) {
        TreeNode node{n.at(0).get<int>(),         n.at(1).get<double>(),      n.at(2).get<int>(),
                      n.at(3).get<int>(),         n.at(4).get<int>(),         n.at(5).get<std::size_t>(),
                      n.at(6).get<std::size_t>()};
        tree.nodes.push_back(node);
    }
    if (tree.nodes.empty()) throw Error(ErrorCode::MalformedDocument, "tree has no nodes");
    const auto count = static_cast<int>(tree.nodes.size());
    for (const auto& n : tree.nodes) {
        if (n.is_leaf()) continue;
        if (n.feature >= static_cast<int>(n_features) || n.left <= 0 || n.right <= 0 || n.left >= count ||
            n.right >= count)
            throw Error(ErrorCode::MalformedDocument, "tree node references out of range");
    }
    return tree;
}

}  // namespace

nlohmann::ordered_json to_json(const TrainedModel& model) {
    nlohmann::ordered_json j;
    j["format"] = "fengshui-model";
    j["format_version"] = kModelFormatVersion;
    j["spec"] = to_json(model.spec);
    j["feature_names"] = model.feature_names;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, KnnState>) {
                auto rows = nlohmann::ordered_json::array();
                for (std::size_t r = 0; r < s.train.rows(); ++r) {
                    const auto row = s.train.row(r);
                    rows.push_back(std::vector<double>(row.begin(), row.end()));
                }
                j["state"] = {{"train", rows}, {"labels", s.labels}, {"center", s.center}, {"scale", s.scale}};
            } else if constexpr (std::is_same_v<T, DecisionTree>) {
                j["state"] = {{"nodes", tree_to_json(s)}};
            } else {
                auto trees = nlohmann::ordered_json::array();
                for (const auto& t : s.trees) trees.push_back(tree_to_json(t));
                j["state"] = {{"trees", trees}};
            }
        },
        model.state);
    return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
    try {
        if (j.value("format", std::string{}) != "fengshui-model")
            throw Error(ErrorCode::MalformedDocument, "not a model document");
        if (j.at("format_version").get<int>() != kModelFormatVersion)
            throw Error(ErrorCode::VersionMismatch,
                        "model format_version " + j.at("format_version").dump() + " is not supported");
        TrainedModel model;
        model.spec = model_spec_from_json(j.at("spec"));
        model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        const auto& state = j.at("state");
        const std::size_t d = model.feature_names.size();
        switch (model.spec.kind) {
            case ModelKind::knn: {
                KnnState s;
                const auto& rows = state.at("train");
                s.train = FeatureMatrix(model.feature_names, rows.size());
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    const auto v = rows[r].get<std::vector<double>>();
                    if (v.size() != d) throw Error(ErrorCode::MalformedDocument, "training row width mismatch");
                    std::copy(v.begin(), v.end(), s.train.row(r).begin());
                }
                s.labels = state.at("labels").get<std::vector<int>>();
                s.center = state.at("center").get<std::vector<double>>();
                s.scale = state.at("scale").get<std::vector<double>>();
                if (s.labels.size() != rows.size() || s.center.size() != d || s.scale.size() != d || rows.empty())
                    throw Error(ErrorCode::MalformedDocument, "knn state is inconsistent");
                model.state = std::move(s);
                break;
            }
            case ModelKind::decision_tree: model.state = tree_from_json(state.at("nodes"), d); break;
            case ModelKind::random_forest: {
                ForestState forest;
                for (const auto& t : state.at("trees")) forest.trees.push_back(tree_from_json(t, d));
                if (forest.trees.empty()) throw Error(ErrorCode::MalformedDocument, "forest has no trees");
                model.state = std::move(forest);
                break;
            }
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("model: ") + e.what());
    }
}

}  // namespace fengshui
