#include "fengshui/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "fengshui/error.hpp"
#include "fengshui/rng.hpp"
#include "fengshui/text.hpp"

namespace fengshui {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "pearson inputs differ in length");
    if (x.size() < 2) throw Error(ErrorCode::LengthMismatch, "pearson needs at least 2 values");
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
    };
    if (constant(x) || constant(y)) throw Error(ErrorCode::ZeroVariance, "pearson input is constant");

    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double cxy = 0.0, cxx = 0.0, cyy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        cxy += dx * dy;
        cxx += dx * dx;
        cyy += dy * dy;
    }
    if (cxx == 0.0 || cyy == 0.0) throw Error(ErrorCode::ZeroVariance, "pearson input is constant");
    return std::clamp(cxy / std::sqrt(cxx * cyy), -1.0, 1.0);
}

const CorrelationEntry* CorrelationReport::find(std::string_view feature) const {
    const auto idx = feature_index(feature);
    for (const auto& e : entries)
        if (e.feature == feature || (idx && feature_index(e.feature) == idx)) return &e;
    return nullptr;
}

CorrelationReport correlate_dataset(std::span<const ScoredRow> rows) {
    if (rows.size() < 2) throw Error(ErrorCode::TooFewRows, "correlation needs at least 2 rows");
    std::vector<double> score(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) score[i] = rows[i].score;

    CorrelationReport report;
    report.n_rows = rows.size();
    std::vector<double> column(rows.size());
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i].features.values[f];
        CorrelationEntry entry{std::string(feature_names()[f]), std::nullopt};
        try {
            entry.r = pearson(column, score);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ZeroVariance) throw;
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

std::vector<std::string> filter_candidates(const CorrelationReport& report, double threshold) {
    if (!(threshold >= 0.0)) throw Error(ErrorCode::InvalidConfig, "threshold must be >= 0");
    std::vector<std::string> out;
    for (const auto& e : report.entries)
        if (e.r && std::abs(*e.r) > threshold) out.push_back(e.feature);
    return out;
}

std::string correlation_csv(const CorrelationReport& report) {
    std::string out = "feature_name,r\n";
    for (const auto& e : report.entries) {
        out += e.feature;
        out += ',';
        out += e.r ? text::format_double(*e.r) : std::string("undefined");
        out += '\n';
    }
    return out;
}

CorrelationReport parse_correlation_csv(std::string_view csv) {
    const auto lines = text::lines(csv);
    if (lines.empty() || text::trim(lines.front()) != "feature_name,r")
        throw Error(ErrorCode::MalformedRow, "line 1: expected header 'feature_name,r'");
    CorrelationReport report;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (text::trim(lines[i]).empty()) continue;
        const auto fields = text::split(lines[i], ',');
        const std::string where = "line " + std::to_string(i + 1);
        if (fields.size() != 2) throw Error(ErrorCode::MalformedRow, where + ": expected 2 columns");
        std::string name(text::trim(fields[0]));
        require_feature_index(name);
        if (!seen.insert(name).second) throw Error(ErrorCode::MalformedRow, where + ": duplicate feature " + name);
        CorrelationEntry e{name, std::nullopt};
        if (text::trim(fields[1]) != "undefined") {
            const auto r = text::parse_double(fields[1]);
            if (!r || !(std::abs(*r) <= 1.0))
                throw Error(ErrorCode::MalformedRow, where + ": r must be a number in [-1, 1]");
            e.r = *r;
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

std::uint64_t subset_seed(std::uint64_t seed, std::span<const std::string> sorted_features) {
    std::string key;
    for (const auto& f : sorted_features) {
        key += f;
        key += ',';
    }
    return derive_seed(seed, std::string_view(key));
}

SubsetSearchResult exhaustive_subset_search(const LabeledDataset& dataset, std::span<const std::string> candidates,
                                            const ModelSpec& model, const CvSpec& cv, std::uint64_t seed,
                                            unsigned jobs) {
    // Canonical, de-duplicated names.
    std::set<std::string> unique;
    for (const auto& c : candidates) unique.insert(std::string(feature_names()[require_feature_index(c)]));
    const std::vector<std::string> names(unique.begin(), unique.end());
    if (names.empty() || names.size() > kMaxCandidates)
        throw Error(ErrorCode::TooManyCandidates,
                    "subset search supports 1.." + std::to_string(kMaxCandidates) + " candidates, got " +
                        std::to_string(names.size()));

    const std::size_t total = (std::size_t{1} << names.size()) - 1;
    std::vector<SubsetScore> scores(total);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            const std::size_t mask = i + 1;
            std::vector<std::string> subset;
            for (std::size_t b = 0; b < names.size(); ++b)
                if (mask & (std::size_t{1} << b)) subset.push_back(names[b]);
            try {
                const FeatureMatrix x = project(dataset.rows, subset);
                const auto report = cross_validate(x, dataset.labels, model, cv, subset_seed(seed, subset));
                scores[i] = {std::move(subset), report.metrics.accuracy};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(total);
                return;
            }
        }
    };

    const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::sort(scores.begin(), scores.end(), [](const SubsetScore& a, const SubsetScore& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.features.size() != b.features.size()) return a.features.size() < b.features.size();
        return a.features < b.features;
    });
    SubsetSearchResult result;
    result.best_subset = scores.front().features;
    result.best_score = scores.front().score;
    result.ranking = std::move(scores);
    return result;
}

std::string ranking_csv(const SubsetSearchResult& result) {
    std::string out = "rank,score,n_features,features\n";
    for (std::size_t i = 0; i < result.ranking.size(); ++i) {
        const auto& s = result.ranking[i];
        std::string joined;
        for (const auto& f : s.features) {
            if (!joined.empty()) joined += '|';
            joined += f;
        }
        out += std::to_string(i + 1) + "," + text::format_double(s.score) + "," + std::to_string(s.features.size()) +
               "," + joined + "\n";
    }
    return out;
}

}  // namespace fengshui
