#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fengshui/dataset.hpp"
#include "fengshui/models.hpp"

namespace fengshui {

// Label 1 iff score > mean of all scores; a score equal to the mean is 0.
// Throws Error{TooFewRows} below two rows.
LabeledDataset label_by_mean(std::vector<ScoredRow> rows);

struct CvSpec {
    enum class Kind { loocv, kfold };
    Kind kind = Kind::loocv;
    int folds = 5;
    bool stratified = true;

    std::string to_string() const;
    // "loocv" or "kfold:<k>".
    static CvSpec parse(std::string_view s);
    bool operator==(const CvSpec&) const = default;
};

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    bool operator==(const Confusion&) const = default;
};

struct LabelMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
    Confusion counts;  // with this label as the positive class
    // Set when the metric's denominator was zero and 0 was reported.
    bool precision_degenerate = false;
    bool recall_degenerate = false;
    bool f1_degenerate = false;
};

struct Metrics {
    std::array<LabelMetrics, 2> per_label;
    double accuracy = 0.0;
    Confusion confusion;  // label 1 as positive
    std::size_t n = 0;
};

// Throws Error{LengthMismatch} for unequal or empty inputs.
Metrics metrics(std::span<const int> predictions, std::span<const int> truths);

struct EvalReport {
    Metrics metrics;
    CvSpec cv;
    ModelSpec model;
    std::uint64_t seed = 0;
    std::vector<std::string> feature_names;
    std::vector<int> predictions;  // held-out prediction per row
};

// Pooled held-out predictions. Every fold's model uses `seed`. Throws
// Error{TooFewRows | SingleClassDataset}.
EvalReport cross_validate(const FeatureMatrix& x, std::span<const int> labels, const ModelSpec& spec,
                          const CvSpec& cv, std::uint64_t seed);

// Leave-one-out over the named features (all 25 when empty), seeded by
// spec.seed.
EvalReport loocv(const LabeledDataset& dataset, const ModelSpec& spec, std::span<const std::string> features = {});

double baseline_accuracy(std::span<const int> labels);
inline double baseline_accuracy(const LabeledDataset& d) { return baseline_accuracy(d.labels); }

nlohmann::ordered_json to_json(const Metrics& m);
nlohmann::ordered_json to_json(const EvalReport& r);
// Per-label precision/recall/f1 rows followed by an accuracy line.
std::string render_table(const EvalReport& r);

}  // namespace fengshui
