#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fengshui/dataset.hpp"
#include "fengshui/eval.hpp"
#include "fengshui/models.hpp"

namespace fengshui {

// Pearson product-moment correlation, cov(x, y) / sqrt(var(x) var(y)).
// Throws Error{LengthMismatch} for unequal lengths or fewer than two
// values, Error{ZeroVariance} if either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationEntry {
    std::string feature;
    // nullopt marks an undefined coefficient (constant feature column).
    std::optional<double> r;

    bool operator==(const CorrelationEntry&) const = default;
};

struct CorrelationReport {
    std::vector<CorrelationEntry> entries;
    std::size_t n_rows = 0;

    const CorrelationEntry* find(std::string_view feature) const;
};

// Each of the 25 features against the score column. Throws
// Error{TooFewRows} below two rows.
CorrelationReport correlate_dataset(std::span<const ScoredRow> rows);

// Features with |r| strictly above threshold, in report order. Undefined
// entries never pass.
std::vector<std::string> filter_candidates(const CorrelationReport& report, double threshold);

// Two columns, feature_name,r. Undefined coefficients are written as
// "undefined".
std::string correlation_csv(const CorrelationReport& report);
CorrelationReport parse_correlation_csv(std::string_view csv);

inline constexpr std::size_t kMaxCandidates = 20;

struct SubsetScore {
    std::vector<std::string> features;  // sorted by name
    double score = 0.0;

    bool operator==(const SubsetScore&) const = default;
};

struct SubsetSearchResult {
    std::vector<std::string> best_subset;
    double best_score = 0.0;
    // Higher score first, then fewer features, then lexicographic names.
    std::vector<SubsetScore> ranking;
};

// Cross-validated accuracy for every non-empty subset of candidates. The
// model seed for a subset is derived from `seed` and its sorted name list;
// the result does not depend on `jobs`. Throws
// Error{TooManyCandidates} outside 1..20 candidates.
SubsetSearchResult exhaustive_subset_search(const LabeledDataset& dataset, std::span<const std::string> candidates,
                                            const ModelSpec& model, const CvSpec& cv, std::uint64_t seed,
                                            unsigned jobs = 1);

std::uint64_t subset_seed(std::uint64_t seed, std::span<const std::string> sorted_features);

// rank,score,n_features,features (features joined with '|').
std::string ranking_csv(const SubsetSearchResult& result);

}  // namespace fengshui
