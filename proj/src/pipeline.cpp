#include "fengshui/pipeline.hpp"

#include "fengshui/error.hpp"

namespace fengshui {

void check_pipeline_options(const PipelineOptions& opts) {
    check_ratio_config(opts.ratio);
    if (opts.despike && !(opts.z_threshold > 0.0)) throw Error(ErrorCode::InvalidConfig, "z_threshold must be > 0");
}

nlohmann::ordered_json to_json(const PipelineOptions& opts) {
    nlohmann::ordered_json j;
    j["despike"] = opts.despike;
    j["z_threshold"] = opts.z_threshold;
    j["best_ratio"] = opts.ratio.best_ratio;
    j["std"] = opts.std_mode == StdMode::sample ? "sample" : "population";
    j["min_samples"] = opts.min_samples;
    return j;
}

void validate_sensor_log(const SensorLog& log) {
    if (log.samples.empty()) throw Error(ErrorCode::EmptyLog, "sensor log has no samples");
    for (std::size_t i = 0; i < log.samples.size(); ++i) {
        if (!sample_is_valid(log.samples[i]))
            throw Error(ErrorCode::MalformedRow, "sample " + std::to_string(i) + " is invalid");
        if (i > 0 && log.samples[i].timestamp_ms < log.samples[i - 1].timestamp_ms)
            throw Error(ErrorCode::NonMonotonicTimestamp, "sample " + std::to_string(i) + " goes back in time");
    }
    if (!log.masks.empty() && log.masks.size() != log.samples.size())
        throw Error(ErrorCode::MalformedRow, "mask count does not match sample count");
}

SessionFeatures compute_session_features(const SessionMeta& meta, const SensorLog& log,
                                         const PipelineOptions& opts) {
    check_pipeline_options(opts);
    SessionMeta checked = meta;
    validate_session_meta(checked);
    validate_sensor_log(log);

    SessionFeatures out;
    if (!log.is_complete(opts.min_samples)) out.warnings.push_back("UnderSampled");
    if (opts.despike) {
        out.features = build_feature_vector(checked, despike(log, opts.z_threshold), opts.ratio, opts.std_mode);
    } else {
        out.features = build_feature_vector(checked, log, opts.ratio, opts.std_mode);
    }
    return out;
}

nlohmann::ordered_json session_record_json(const SessionMeta& meta, const SensorLog& log,
                                           const std::vector<std::string>& warnings) {
    nlohmann::ordered_json j;
    j["format"] = "fengshui-session";
    j["format_version"] = kSessionRecordVersion;
    j["meta"] = to_json(meta);
    j["units"] = log.units;
    j["columns"] = nlohmann::ordered_json::array({"timestamp_ms"});
    for (auto name : channel_names()) j["columns"].push_back(name);
    auto samples = nlohmann::ordered_json::array();
    for (const auto& s : log.samples) {
        auto row = nlohmann::ordered_json::array({s.timestamp_ms});
        for (double v : s.values) row.push_back(v);
        samples.push_back(std::move(row));
    }
    j["sample_count"] = log.samples.size();
    j["samples"] = std::move(samples);
    j["warnings"] = warnings;
    return j;
}

void session_record_from_json(const nlohmann::json& j, SessionMeta& meta, SensorLog& log) {
    try {
        if (j.value("format", std::string{}) != "fengshui-session")
            throw Error(ErrorCode::MalformedDocument, "not a session record");
        if (j.at("format_version").get<int>() != kSessionRecordVersion)
            throw Error(ErrorCode::VersionMismatch, "unsupported session record version");
        meta = session_meta_from_json(j.at("meta"));
        log = SensorLog{};
        log.session_id = meta.session_id;
        if (j.contains("units")) log.units = j.at("units").get<std::map<std::string, std::string>>();
        for (const auto& row : j.at("samples")) {
            if (!row.is_array() || row.size() != kChannelCount + 1)
                throw Error(ErrorCode::MalformedRow, "session record sample has wrong width");
            SensorSample s;
            s.timestamp_ms = row.at(0).get<std::int64_t>();
            for (std::size_t c = 0; c < kChannelCount; ++c) s.values[c] = row.at(c + 1).get<double>();
            log.samples.push_back(s);
        }
        validate_sensor_log(log);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("session record: ") + e.what());
    }
}

}  // namespace fengshui
