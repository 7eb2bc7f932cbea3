#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fengshui/features.hpp"
#include "fengshui/ingest.hpp"

namespace fengshui {

struct PipelineOptions {
    bool despike = false;
    double z_threshold = kDefaultDespikeThreshold;
    RatioConfig ratio;
    StdMode std_mode = StdMode::population;
    std::size_t min_samples = kDefaultMinSamples;
};

void check_pipeline_options(const PipelineOptions& opts);
nlohmann::ordered_json to_json(const PipelineOptions& opts);

struct SessionFeatures {
    FeatureVector features;
    // "UnderSampled" when the log is shorter than min_samples.
    std::vector<std::string> warnings;
};

// Ingest validation, optional despike, then the 25 features. The CLI and
// the capture service both go through here.
SessionFeatures compute_session_features(const SessionMeta& meta, const SensorLog& log,
                                         const PipelineOptions& opts);

// Re-checks a log assembled outside parse_sensor_log. Throws
// Error{EmptyLog | MalformedRow | NonMonotonicTimestamp}.
void validate_sensor_log(const SensorLog& log);

inline constexpr int kSessionRecordVersion = 1;

// Output of `ingest`: validated meta plus the raw samples.
nlohmann::ordered_json session_record_json(const SessionMeta& meta, const SensorLog& log,
                                           const std::vector<std::string>& warnings);
void session_record_from_json(const nlohmann::json& j, SessionMeta& meta, SensorLog& log);

}  // namespace fengshui
