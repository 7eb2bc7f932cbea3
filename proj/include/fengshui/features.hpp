#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "fengshui/ingest.hpp"

namespace fengshui {

inline constexpr std::size_t kFeatureCount = 25;

// Column order of the correlation table: geometry, noise, the nine channel
// means, the nine channel stds, then the ratio score.
const std::array<std::string_view, kFeatureCount>& feature_names();
// Accepts "wh_ratio" as an alias for "wh_ratio_score".
std::optional<std::size_t> feature_index(std::string_view name);
// Throws Error{UnknownFeatureName}.
std::size_t require_feature_index(std::string_view name);

struct FeatureVector {
    std::array<double, kFeatureCount> values{};

    double at(std::string_view name) const { return values[require_feature_index(name)]; }
    double& at(std::string_view name) { return values[require_feature_index(name)]; }

    bool operator==(const FeatureVector&) const = default;
};

nlohmann::ordered_json to_json(const FeatureVector& fv);
FeatureVector feature_vector_from_json(const nlohmann::json& j);

struct RatioConfig {
    double best_ratio = 0.618;
};
// Throws Error{InvalidConfig} unless 0 < best_ratio <= 1.
void check_ratio_config(const RatioConfig& cfg);

enum class StdMode { population, sample };

struct ChannelStats {
    std::array<double, kChannelCount> mean{};
    std::array<double, kChannelCount> std{};
};

// Mean and std per channel over unmasked samples. Throws Error{EmptyChannel}
// if masking leaves a channel without samples. Sample std of one value is 0.
ChannelStats aggregate_channels(const SensorLog& log, StdMode mode = StdMode::population);

// Room-shape score. With r = min/max of the two sides, rises as sin(r*pi/2)
// up to best_ratio and mirrors down beyond it. Throws
// Error{NonPositiveDimension}.
double wh_ratio_score(double width, double length, const RatioConfig& cfg);

FeatureVector build_feature_vector(const SessionMeta& meta, const SensorLog& log, const RatioConfig& cfg,
                                   StdMode mode = StdMode::population);

}  // namespace fengshui
