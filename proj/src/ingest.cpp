#include "fengshui/ingest.hpp"

#include <cmath>
#include <set>

#include "fengshui/error.hpp"
#include "fengshui/text.hpp"

namespace fengshui {

namespace {

constexpr std::array<std::string_view, kChannelCount> kChannelNames = {
    "temperature", "humidity", "air_pressure", "light_intensity", "toxic_chemical",
    "tvoc",        "eco2",     "h2",           "ethanol",
};

constexpr std::string_view kHeader =
    "timestamp_ms,temperature,humidity,air_pressure,light_intensity,toxic_chemical,tvoc,eco2,h2,"
    "ethanol";

// "temperature[C]" and "temperature (C)" both name the temperature column
// with unit label "C".
std::pair<std::string_view, std::string_view> split_unit(std::string_view column) {
    column = text::trim(column);
    for (auto [open, close] : {std::pair{'[', ']'}, std::pair{'(', ')'}}) {
        const auto pos = column.find(open);
        if (pos != std::string_view::npos && column.back() == close) {
            return {text::trim(column.substr(0, pos)),
                    text::trim(column.substr(pos + 1, column.size() - pos - 2))};
        }
    }
    return {column, {}};
}

std::string line_ref(std::size_t line) { return "line " + std::to_string(line); }

}  // namespace

const std::array<std::string_view, kChannelCount>& channel_names() { return kChannelNames; }

std::string_view sensor_csv_header() { return kHeader; }

std::size_t SensorLog::masked_count(std::size_t channel) const {
    std::size_t n = 0;
    for (const auto& m : masks) n += m.test(channel) ? 1 : 0;
    return n;
}

bool sample_is_valid(const SensorSample& sample) {
    if (sample.timestamp_ms < 0) return false;
    for (double v : sample.values)
        if (!std::isfinite(v)) return false;
    return true;
}

SensorLog parse_sensor_log(std::string_view csv_text, std::string session_id) {
    const auto rows = text::lines(csv_text);
    if (rows.empty() || text::trim(rows.front()).empty())
        throw Error(ErrorCode::EmptyLog, "sensor log has no header");

    SensorLog log;
    log.session_id = std::move(session_id);

    const auto header = text::split(rows.front(), ',');
    if (header.size() != kChannelCount + 1)
        throw Error(ErrorCode::MalformedRow,
                    line_ref(1) + ": header must have " + std::to_string(kChannelCount + 1) +
                        " columns");
    for (std::size_t col = 0; col < header.size(); ++col) {
        auto [name, unit] = split_unit(header[col]);
        const std::string_view expected = col == 0 ? "timestamp_ms" : kChannelNames[col - 1];
        if (name != expected)
            throw Error(ErrorCode::MalformedRow, line_ref(1) + ": column " + std::to_string(col + 1) +
                                                     " must be '" + std::string(expected) + "'");
        if (!unit.empty()) log.units.emplace(std::string(name), std::string(unit));
    }

    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::size_t line = i + 1;
        if (text::trim(rows[i]).empty()) continue;
        const auto fields = text::split(rows[i], ',');
        if (fields.size() != kChannelCount + 1)
            throw Error(ErrorCode::MalformedRow, line_ref(line) + ": expected " +
                                                     std::to_string(kChannelCount + 1) +
                                                     " columns, got " + std::to_string(fields.size()));
        SensorSample s;
        const auto ts = text::parse_int(fields[0]);
        if (!ts || *ts < 0)
            throw Error(ErrorCode::MalformedRow,
                        line_ref(line) + ": timestamp_ms '" + std::string(fields[0]) + "' is not a non-negative integer");
        s.timestamp_ms = *ts;
        for (std::size_t c = 0; c < kChannelCount; ++c) {
            const auto v = text::parse_double(fields[c + 1]);
            if (!v || !std::isfinite(*v))
                throw Error(ErrorCode::MalformedRow, line_ref(line) + ": column '" +
                                                         std::string(kChannelNames[c]) + "' value '" +
                                                         std::string(text::trim(fields[c + 1])) +
                                                         "' is not a finite number");
            s.values[c] = *v;
        }
        if (!log.samples.empty() && s.timestamp_ms < log.samples.back().timestamp_ms)
            throw Error(ErrorCode::NonMonotonicTimestamp,
                        line_ref(line) + ": timestamp " + std::to_string(s.timestamp_ms) +
                            " precedes " + std::to_string(log.samples.back().timestamp_ms));
        log.samples.push_back(s);
    }
    if (log.samples.empty()) throw Error(ErrorCode::EmptyLog, "sensor log has no data rows");
    return log;
}

std::string format_sample_row(const SensorSample& sample) {
    std::string row = std::to_string(sample.timestamp_ms);
    for (double v : sample.values) {
        row += ',';
        row += text::format_double(v);
    }
    return row;
}

std::string serialize_sensor_log(const SensorLog& log) {
    std::string out;
    out += "timestamp_ms";
    for (auto name : kChannelNames) {
        out += ',';
        out += name;
        if (auto it = log.units.find(std::string(name)); it != log.units.end())
            out += "[" + it->second + "]";
    }
    out += '\n';
    for (const auto& s : log.samples) {
        out += format_sample_row(s);
        out += '\n';
    }
    return out;
}

double normalize_degrees(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) r += 360.0;
    if (r >= 360.0) r = 0.0;
    return r;
}

void validate_session_meta(SessionMeta& meta) {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw Error(ErrorCode::OutOfRange, what);
    };
    require(std::isfinite(meta.width_ft) && meta.width_ft > 0.0, "width_ft must be > 0");
    require(std::isfinite(meta.height_ft) && meta.height_ft > 0.0, "height_ft must be > 0");
    require(std::isfinite(meta.door_direction_deg), "door_direction_deg must be finite");
    require(std::isfinite(meta.desk_direction_deg), "desk_direction_deg must be finite");
    require(std::isfinite(meta.noise_db) && meta.noise_db >= 0.0, "noise_db must be >= 0");
    if (meta.heart_rate_bpm)
        require(std::isfinite(*meta.heart_rate_bpm) && *meta.heart_rate_bpm > 0.0,
                "heart_rate_bpm must be > 0");
    meta.door_direction_deg = normalize_degrees(meta.door_direction_deg);
    meta.desk_direction_deg = normalize_degrees(meta.desk_direction_deg);
}

SessionMeta parse_session_meta(std::string_view doc) {
    std::map<std::string, std::string, std::less<>> kv;
    std::size_t line_no = 0;
    for (auto line : text::lines(doc)) {
        ++line_no;
        line = text::trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::MalformedDocument, line_ref(line_no) + ": expected 'key = value'");
        const std::string key(text::trim(line.substr(0, eq)));
        const std::string value(text::trim(line.substr(eq + 1)));
        if (!kv.emplace(key, value).second)
            throw Error(ErrorCode::MalformedDocument, line_ref(line_no) + ": duplicate key '" + key + "'");
    }

    static const std::set<std::string, std::less<>> known = {
        "session_id", "width_ft",   "height_ft", "is_rectangle", "door_direction_deg",
        "desk_direction_deg", "noise_db", "heart_rate_bpm"};
    for (const auto& [k, v] : kv)
        if (!known.contains(k)) throw Error(ErrorCode::UnknownField, "unknown key '" + k + "'");

    auto raw = [&](std::string_view key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw Error(ErrorCode::MissingField, "missing key '" + std::string(key) + "'");
        return it->second;
    };
    auto number = [&](std::string_view key) {
        const auto v = text::parse_double(raw(key));
        if (!v) throw Error(ErrorCode::MalformedDocument, "key '" + std::string(key) + "' is not a number");
        return *v;
    };

    SessionMeta meta;
    meta.session_id = raw("session_id");
    meta.width_ft = number("width_ft");
    meta.height_ft = number("height_ft");
    const auto rect = text::parse_bool(raw("is_rectangle"));
    if (!rect) throw Error(ErrorCode::MalformedDocument, "key 'is_rectangle' must be true or false");
    meta.is_rectangle = *rect;
    meta.door_direction_deg = number("door_direction_deg");
    meta.desk_direction_deg = number("desk_direction_deg");
    meta.noise_db = number("noise_db");
    if (auto it = kv.find("heart_rate_bpm"); it != kv.end() && !it->second.empty())
        meta.heart_rate_bpm = number("heart_rate_bpm");
    validate_session_meta(meta);
    return meta;
}

std::string serialize_session_meta(const SessionMeta& meta) {
    std::string out;
    auto put = [&](std::string_view key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    put("session_id", meta.session_id);
    put("width_ft", text::format_double(meta.width_ft));
    put("height_ft", text::format_double(meta.height_ft));
    put("is_rectangle", meta.is_rectangle ? "true" : "false");
    put("door_direction_deg", text::format_double(meta.door_direction_deg));
    put("desk_direction_deg", text::format_double(meta.desk_direction_deg));
    put("noise_db", text::format_double(meta.noise_db));
    if (meta.heart_rate_bpm) put("heart_rate_bpm", text::format_double(*meta.heart_rate_bpm));
    return out;
}

SensorLog despike(const SensorLog& log, double z_threshold) {
    if (log.samples.empty()) throw Error(ErrorCode::EmptyLog, "cannot despike an empty log");
    if (!(z_threshold > 0.0)) throw Error(ErrorCode::InvalidConfig, "z_threshold must be > 0");

    SensorLog out = log;
    if (out.masks.empty()) out.masks.assign(out.samples.size(), ChannelMask{});

    const auto n = static_cast<double>(log.samples.size());
    for (std::size_t c = 0; c < kChannelCount; ++c) {
        const double first = log.samples.front().values[c];
        bool constant = true;
        double sum = 0.0;
        for (const auto& s : log.samples) {
            sum += s.values[c];
            constant = constant && s.values[c] == first;
        }
        if (constant) continue;
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& s : log.samples) ss += (s.values[c] - mean) * (s.values[c] - mean);
        const double sd = std::sqrt(ss / n);
        if (sd == 0.0) continue;
        for (std::size_t i = 0; i < log.samples.size(); ++i)
            if (std::abs(log.samples[i].values[c] - mean) > z_threshold * sd) out.masks[i].set(c);
    }
    return out;
}


nlohmann::ordered_json to_json(const SessionMeta& meta) {
    nlohmann::ordered_json j;
    j["session_id"] = meta.session_id;
    j["width_ft"] = meta.width_ft;
    j["height_ft"] = meta.height_ft;
    j["is_rectangle"] = meta.is_rectangle;
    j["door_direction_deg"] = meta.door_direction_deg;
    j["desk_direction_deg"] = meta.desk_direction_deg;
    j["noise_db"] = meta.noise_db;
    j["heart_rate_bpm"] = meta.heart_rate_bpm ? nlohmann::ordered_json(*meta.heart_rate_bpm) : nullptr;
    return j;
}

SessionMeta session_meta_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedDocument, "session meta must be an object");
    static const std::set<std::string, std::less<>> known = {
        "session_id", "width_ft",   "height_ft", "is_rectangle", "door_direction_deg",
        "desk_direction_deg", "noise_db", "heart_rate_bpm"};
    for (const auto& [k, v] : j.items())
        if (!known.contains(k)) throw Error(ErrorCode::UnknownField, "unknown key '" + k + "'");
    auto number = [&](const char* key) {
        if (!j.contains(key)) throw Error(ErrorCode::MissingField, std::string("missing key '") + key + "'");
        if (!j.at(key).is_number()) throw Error(ErrorCode::MalformedDocument, std::string("key '") + key + "' is not a number");
        return j.at(key).get<double>();
    };
    SessionMeta meta;
    if (j.contains("session_id") && j.at("session_id").is_string()) meta.session_id = j.at("session_id").get<std::string>();
    meta.width_ft = number("width_ft");
    meta.height_ft = number("height_ft");
    if (!j.contains("is_rectangle")) throw Error(ErrorCode::MissingField, "missing key 'is_rectangle'");
    if (!j.at("is_rectangle").is_boolean()) throw Error(ErrorCode::MalformedDocument, "key 'is_rectangle' must be a boolean");
    meta.is_rectangle = j.at("is_rectangle").get<bool>();
    meta.door_direction_deg = number("door_direction_deg");
    meta.desk_direction_deg = number("desk_direction_deg");
    meta.noise_db = number("noise_db");
    if (j.contains("heart_rate_bpm") && !j.at("heart_rate_bpm").is_null()) meta.heart_rate_bpm = number("heart_rate_bpm");
    validate_session_meta(meta);
    return meta;
}

nlohmann::ordered_json to_json(const SensorSample& sample) {
    nlohmann::ordered_json j;
    j["timestamp_ms"] = sample.timestamp_ms;
    for (std::size_t c = 0; c < kChannelCount; ++c) j[std::string(kChannelNames[c])] = sample.values[c];
    return j;
}

SensorSample sensor_sample_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedSample, "sample must be an object");
    SensorSample s;
    const auto ts = j.find("timestamp_ms");
    if (ts == j.end() || !ts->is_number_integer())
        throw Error(ErrorCode::MalformedSample, "sample timestamp_ms must be an integer");
    s.timestamp_ms = ts->get<std::int64_t>();
    for (std::size_t c = 0; c < kChannelCount; ++c) {
        const auto it = j.find(std::string(kChannelNames[c]));
        if (it == j.end() || !it->is_number())
            throw Error(ErrorCode::MalformedSample, "sample field '" + std::string(kChannelNames[c]) + "' missing or not a number");
        s.values[c] = it->get<double>();
    }
    if (!sample_is_valid(s)) throw Error(ErrorCode::MalformedSample, "sample has a negative timestamp or non-finite value");
    return s;
}

}  // namespace fengshui
