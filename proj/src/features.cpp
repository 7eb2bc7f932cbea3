#include "fengshui/features.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fengshui/error.hpp"

namespace fengshui {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "width",
    "height",
    "door_direction",
    "desk_direction",
    "is_rect",
    "noise_db",
    "Temperature_mean",
    "Humidity_mean",
    "Air_Pressure_mean",
    "Light_Intensity_mean",
    "Toxic_Chemical_Level_mean",
    "TVOC_Level_mean",
    "eCO2_Level_mean",
    "H2_Level_mean",
    "Ethanol_Level_mean",
    "Temperature_std",
    "Humidity_std",
    "Air_Pressure_std",
    "Light_Intensity_std",
    "Toxic_Chemical_Level_std",
    "TVOC_Level_std",
    "eCO2_Level_std",
    "H2_Level_std",
    "Ethanol_Level_std",
    "wh_ratio_score",
};

constexpr std::size_t kMeanOffset = 6;
constexpr std::size_t kStdOffset = kMeanOffset + kChannelCount;
constexpr std::size_t kRatioIndex = kStdOffset + kChannelCount;
static_assert(kRatioIndex == kFeatureCount - 1);

}  // namespace

const std::array<std::string_view, kFeatureCount>& feature_names() { return kFeatureNames; }

std::optional<std::size_t> feature_index(std::string_view name) {
    if (name == "wh_ratio") return kRatioIndex;
    for (std::size_t i = 0; i < kFeatureCount; ++i)
        if (kFeatureNames[i] == name) return i;
    return std::nullopt;
}

std::size_t require_feature_index(std::string_view name) {
    if (auto idx = feature_index(name)) return *idx;
    throw Error(ErrorCode::UnknownFeatureName, "unknown feature '" + std::string(name) + "'");
}

nlohmann::ordered_json to_json(const FeatureVector& fv) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < kFeatureCount; ++i) j[std::string(kFeatureNames[i])] = fv.values[i];
    return j;
}

FeatureVector feature_vector_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedDocument, "feature vector must be an object");
    if (j.size() != kFeatureCount)
        throw Error(ErrorCode::MalformedDocument,
                    "feature vector has " + std::to_string(j.size()) + " entries, expected 25");
    FeatureVector fv;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const auto it = j.find(std::string(kFeatureNames[i]));
        if (it == j.end() || !it->is_number())
            throw Error(ErrorCode::MissingField, "feature '" + std::string(kFeatureNames[i]) + "' missing");
        fv.values[i] = it->get<double>();
        if (!std::isfinite(fv.values[i]))
            throw Error(ErrorCode::OutOfRange, "feature '" + std::string(kFeatureNames[i]) + "' not finite");
    }
    return fv;
}

void check_ratio_config(const RatioConfig& cfg) {
    if (!(cfg.best_ratio > 0.0 && cfg.best_ratio <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "best_ratio must be in (0, 1]");
}

ChannelStats aggregate_channels(const SensorLog& log, StdMode mode) {
    if (log.samples.empty()) throw Error(ErrorCode::EmptyChannel, "sensor log is empty");
    ChannelStats stats;
    for (std::size_t c = 0; c < kChannelCount; ++c) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < log.samples.size(); ++i) {
            if (log.is_masked(i, c)) continue;
            sum += log.samples[i].values[c];
            ++n;
        }
        if (n == 0)
            throw Error(ErrorCode::EmptyChannel,
                        "channel '" + std::string(channel_names()[c]) + "' has no unmasked samples");
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < log.samples.size(); ++i) {
            if (log.is_masked(i, c)) continue;
            const double d = log.samples[i].values[c] - mean;
            ss += d * d;
        }
        const double denom = mode == StdMode::sample ? static_cast<double>(n) - 1.0 : static_cast<double>(n);
        stats.mean[c] = mean;
        stats.std[c] = denom > 0.0 ? std::sqrt(ss / denom) : 0.0;
    }
    return stats;
}

double wh_ratio_score(double width, double length, const RatioConfig& cfg) {
    if (!(width > 0.0) || !(length > 0.0) || !std::isfinite(width) || !std::isfinite(length))
        throw Error(ErrorCode::NonPositiveDimension, "room dimensions must be positive");
    check_ratio_config(cfg);
    constexpr double half_pi = std::numbers::pi / 2.0;
    const double r = std::min(width, length) / std::max(width, length);
    const double rising = std::sin(r * half_pi);
    if (r <= cfg.best_ratio) return rising;
    return 2.0 * std::sin(cfg.best_ratio * half_pi) - rising;
}

FeatureVector build_feature_vector(const SessionMeta& meta, const SensorLog& log, const RatioConfig& cfg,
                                   StdMode mode) {
    const ChannelStats stats = aggregate_channels(log, mode);
    FeatureVector fv;
    fv.values[0] = meta.width_ft;
    fv.values[1] = meta.height_ft;
    fv.values[2] = meta.door_direction_deg;
    fv.values[3] = meta.desk_direction_deg;
    fv.values[4] = meta.is_rectangle ? 1.0 : 0.0;
    fv.values[5] = meta.noise_db;
    for (std::size_t c = 0; c < kChannelCount; ++c) {
        fv.values[kMeanOffset + c] = stats.mean[c];
        fv.values[kStdOffset + c] = stats.std[c];
    }
    fv.values[kRatioIndex] = wh_ratio_score(meta.width_ft, meta.height_ft, cfg);
    return fv;
}

}  // namespace fengshui
