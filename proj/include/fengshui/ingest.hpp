#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fengshui {

inline constexpr std::size_t kChannelCount = 9;

enum class Channel : std::size_t {
    temperature,
    humidity,
    air_pressure,
    light_intensity,
    toxic_chemical,
    tvoc,
    eco2,
    h2,
    ethanol,
};

// Column names used by the sensor CSV header.
const std::array<std::string_view, kChannelCount>& channel_names();

struct SensorSample {
    std::int64_t timestamp_ms = 0;
    std::array<double, kChannelCount> values{};

    double operator[](Channel c) const { return values[static_cast<std::size_t>(c)]; }
    double& operator[](Channel c) { return values[static_cast<std::size_t>(c)]; }

    bool operator==(const SensorSample&) const = default;
};

using ChannelMask = std::bitset<kChannelCount>;

struct SensorLog {
    std::string session_id;
    std::vector<SensorSample> samples;
    // Either empty (nothing masked) or one entry per sample. A set bit hides
    // that sample's channel value from aggregation; the sample itself stays.
    std::vector<ChannelMask> masks;
    // Unit labels carried in the header, e.g. "temperature[C]". Never used
    // numerically.
    std::map<std::string, std::string> units;

    bool is_masked(std::size_t sample, std::size_t channel) const {
        return !masks.empty() && masks[sample].test(channel);
    }
    std::size_t masked_count(std::size_t channel) const;
    bool is_complete(std::size_t min_samples) const { return samples.size() >= min_samples; }
};

struct SessionMeta {
    std::string session_id;
    double width_ft = 0.0;
    // Second floor dimension; plays the "length" role in the ratio score.
    double height_ft = 0.0;
    bool is_rectangle = true;
    double door_direction_deg = 0.0;
    double desk_direction_deg = 0.0;
    double noise_db = 0.0;
    std::optional<double> heart_rate_bpm;

    bool operator==(const SessionMeta&) const = default;
};

inline constexpr std::size_t kDefaultMinSamples = 1000;
inline constexpr double kDefaultDespikeThreshold = 4.0;

std::string_view sensor_csv_header();

// Throws Error{MalformedRow | NonMonotonicTimestamp | EmptyLog}. Line numbers
// in messages are 1-based and count the header.
SensorLog parse_sensor_log(std::string_view csv_text, std::string session_id);
std::string serialize_sensor_log(const SensorLog& log);
// One CSV data row (no newline), shared with the service's raw-log journal.
std::string format_sample_row(const SensorSample& sample);

// Checks the per-sample invariants (finite values, non-negative timestamp).
bool sample_is_valid(const SensorSample& sample);

// Maps any finite angle into [0, 360).
double normalize_degrees(double deg);

// Throws Error{MissingField | OutOfRange | UnknownField | MalformedDocument}.
SessionMeta parse_session_meta(std::string_view text);
std::string serialize_session_meta(const SessionMeta& meta);
// Normalizes angles in place and throws Error{OutOfRange} on violations.
void validate_session_meta(SessionMeta& meta);

// Per-channel z-score masking. Statistics always come from the full,
// unmasked channel so repeated application is idempotent; new masks are
// OR-ed with any existing ones. Constant channels are never masked.
SensorLog despike(const SensorLog& log, double z_threshold);

nlohmann::ordered_json to_json(const SessionMeta& meta);
// Field names as in SessionMeta; validates and normalizes like
// parse_session_meta. session_id may be absent.
SessionMeta session_meta_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const SensorSample& sample);
// Throws Error{MalformedSample} for missing or non-finite fields.
SensorSample sensor_sample_from_json(const nlohmann::json& j);

}  // namespace fengshui
