#include "fengshui/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "fengshui/error.hpp"
#include "fengshui/rng.hpp"
#include "fengshui/text.hpp"

namespace fengshui {

LabeledDataset label_by_mean(std::vector<ScoredRow> rows) {
    if (rows.size() < 2) throw Error(ErrorCode::TooFewRows, "mean-split labeling needs at least 2 rows");
    LabeledDataset d;
    double sum = 0.0;
    for (const auto& r : rows) sum += r.score;
    d.split_mean = sum / static_cast<double>(rows.size());
    d.labels.reserve(rows.size());
    for (const auto& r : rows) d.labels.push_back(r.score > d.split_mean ? 1 : 0);
    d.rows = std::move(rows);
    return d;
}

std::string CvSpec::to_string() const {
    if (kind == Kind::loocv) return "loocv";
    return "kfold:" + std::to_string(folds) + (stratified ? "" : ":unstratified");
}

CvSpec CvSpec::parse(std::string_view s) {
    if (s == "loocv") return {};
    const auto parts = text::split(s, ':');
    if (parts.size() >= 2 && parts[0] == "kfold") {
        const auto k = text::parse_int(parts[1]);
        if (!k || *k < 2) throw Error(ErrorCode::InvalidConfig, "kfold needs k >= 2");
        CvSpec cv{Kind::kfold, static_cast<int>(*k), true};
        if (parts.size() == 3 && parts[2] == "unstratified") cv.stratified = false;
        else if (parts.size() != 2) throw Error(ErrorCode::InvalidConfig, "bad cv spec '" + std::string(s) + "'");
        return cv;
    }
    throw Error(ErrorCode::InvalidConfig, "cv must be 'loocv' or 'kfold:<k>'");
}

Metrics metrics(std::span<const int> predictions, std::span<const int> truths) {
    if (predictions.size() != truths.size() || predictions.empty())
        throw Error(ErrorCode::LengthMismatch, "predictions and truths must have equal non-zero length");
    Metrics m;
    m.n = truths.size();
    for (int label = 0; label <= 1; ++label) {
        auto& lm = m.per_label[static_cast<std::size_t>(label)];
        for (std::size_t i = 0; i < truths.size(); ++i) {
            const bool p = predictions[i] == label;
            const bool t = truths[i] == label;
            if (p && t) ++lm.counts.tp;
            else if (p) ++lm.counts.fp;
            else if (t) ++lm.counts.fn;
            else ++lm.counts.tn;
        }
        lm.support = lm.counts.tp + lm.counts.fn;
        auto ratio = [](std::size_t num, std::size_t den, bool& degenerate) {
            if (den == 0) {
                degenerate = true;
                return 0.0;
            }
            return static_cast<double>(num) / static_cast<double>(den);
        };
        lm.precision = ratio(lm.counts.tp, lm.counts.tp + lm.counts.fp, lm.precision_degenerate);
        lm.recall = ratio(lm.counts.tp, lm.counts.tp + lm.counts.fn, lm.recall_degenerate);
        if (lm.precision + lm.recall == 0.0) {
            lm.f1 = 0.0;
            lm.f1_degenerate = true;
        } else {
            lm.f1 = 2.0 * lm.precision * lm.recall / (lm.precision + lm.recall);
        }
    }
    m.confusion = m.per_label[1].counts;
    m.accuracy = static_cast<double>(m.confusion.tp + m.confusion.tn) / static_cast<double>(m.n);
    return m;
}

namespace {

std::vector<int> fold_assignment(std::span<const int> labels, const CvSpec& cv, std::uint64_t seed) {
    const std::size_t n = labels.size();
    std::vector<int> fold(n);
    if (cv.kind == CvSpec::Kind::loocv) {
        std::iota(fold.begin(), fold.end(), 0);
        return fold;
    }
    const auto k = static_cast<std::size_t>(cv.folds);
    if (k > n) throw Error(ErrorCode::TooFewRows, "more folds than rows");
    CounterRng rng(derive_seed(seed, std::string_view("cv-folds")));
    auto shuffle = [&](std::vector<std::size_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
    };
    // Deal shuffled indices round-robin; stratified deals each class in turn.
    std::size_t next = 0;
    auto deal = [&](std::vector<std::size_t> idx) {
        shuffle(idx);
        for (auto i : idx) fold[i] = static_cast<int>(next++ % k);
    };
    if (cv.stratified) {
        std::vector<std::size_t> zeros, ones;
        for (std::size_t i = 0; i < n; ++i) (labels[i] == 1 ? ones : zeros).push_back(i);
        deal(std::move(zeros));
        deal(std::move(ones));
    } else {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        deal(std::move(all));
    }
    return fold;
}

}  // namespace

EvalReport cross_validate(const FeatureMatrix& x, std::span<const int> labels, const ModelSpec& spec,
                          const CvSpec& cv, std::uint64_t seed) {
    if (x.rows() != labels.size()) throw Error(ErrorCode::LengthMismatch, "label count does not match rows");
    if (x.rows() < 3) throw Error(ErrorCode::TooFewRows, "cross-validation needs at least 3 rows");
    const auto ones = std::count(labels.begin(), labels.end(), 1);
    if (ones == 0 || static_cast<std::size_t>(ones) == labels.size())
        throw Error(ErrorCode::SingleClassDataset, "both labels must be present");

    ModelSpec fold_spec = spec;
    fold_spec.seed = seed;
    const auto fold = fold_assignment(labels, cv, seed);
    const int n_folds = *std::max_element(fold.begin(), fold.end()) + 1;

    EvalReport report;
    report.predictions.assign(x.rows(), 0);
    for (int f = 0; f < n_folds; ++f) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < x.rows(); ++i) (fold[i] == f ? test : train).push_back(i);
        if (test.empty()) continue;
        const FeatureMatrix xt = x.select_rows(train);
        std::vector<int> yt;
        yt.reserve(train.size());
        for (auto i : train) yt.push_back(labels[i]);
        const TrainedModel model = fit(fold_spec, xt, yt);
        for (auto i : test) report.predictions[i] = model.predict(x.row(i));
    }
    report.metrics = metrics(report.predictions, labels);
    report.cv = cv;
    report.model = fold_spec;
    report.seed = seed;
    report.feature_names = x.columns();
    return report;
}

EvalReport loocv(const LabeledDataset& dataset, const ModelSpec& spec, std::span<const std::string> features) {
    const auto names = features.empty() ? all_feature_names() : std::vector<std::string>(features.begin(), features.end());
    const FeatureMatrix x = project(dataset.rows, names);
    return cross_validate(x, dataset.labels, spec, CvSpec{}, spec.seed);
}

double baseline_accuracy(std::span<const int> labels) {
    if (labels.empty()) return 0.0;
    const auto ones = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    return static_cast<double>(std::max(ones, labels.size() - ones)) / static_cast<double>(labels.size());
}

nlohmann::ordered_json to_json(const Metrics& m) {
    nlohmann::ordered_json j;
    auto labels = nlohmann::ordered_json::object();
    for (int l = 0; l <= 1; ++l) {
        const auto& lm = m.per_label[static_cast<std::size_t>(l)];
        nlohmann::ordered_json e;
        e["precision"] = lm.precision;
        e["recall"] = lm.recall;
        e["f1"] = lm.f1;
        e["support"] = lm.support;
        auto degenerate = nlohmann::ordered_json::array();
        if (lm.precision_degenerate) degenerate.push_back("precision");
        if (lm.recall_degenerate) degenerate.push_back("recall");
        if (lm.f1_degenerate) degenerate.push_back("f1");
        e["degenerate"] = degenerate;
        labels[std::to_string(l)] = e;
    }
    j["labels"] = labels;
    j["accuracy"] = m.accuracy;
    j["confusion"] = {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"tn", m.confusion.tn}, {"fn", m.confusion.fn}};
    j["n"] = m.n;
    return j;
}

nlohmann::ordered_json to_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["format"] = "fengshui-eval-report";
    j["format_version"] = 1;
    j["metrics"] = to_json(r.metrics);
    j["cv"] = r.cv.to_string();
    j["model"] = to_json(r.model);
    j["seed"] = r.seed;
    j["feature_names"] = r.feature_names;
    return j;
}

std::string render_table(const EvalReport& r) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %10s %10s %10s %8s\n", "label", "precision", "recall", "f1-score", "support");
    out += buf;
    for (int l = 0; l <= 1; ++l) {
        const auto& lm = r.metrics.per_label[static_cast<std::size_t>(l)];
        std::snprintf(buf, sizeof buf, "%-8d %10.4f %10.4f %10.4f %8zu%s\n", l, lm.precision, lm.recall, lm.f1,
                      lm.support, (lm.precision_degenerate || lm.recall_degenerate) ? "  (degenerate)" : "");
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "%-8s %43.4f %8zu\n", "accuracy", r.metrics.accuracy, r.metrics.n);
    out += buf;
    const auto& c = r.metrics.confusion;
    std::snprintf(buf, sizeof buf, "confusion (label 1 positive): tp=%zu fp=%zu tn=%zu fn=%zu\n", c.tp, c.fp, c.tn, c.fn);
    out += buf;
    out += "model=" + std::string(to_string(r.model.kind)) + " cv=" + r.cv.to_string() +
           " seed=" + std::to_string(r.seed) + "\n";
    return out;
}

}  // namespace fengshui
