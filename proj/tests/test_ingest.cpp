#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "fengshui/error.hpp"
#include "fengshui/ingest.hpp"
#include "fengshui/text.hpp"

using namespace fengshui;

namespace {

std::string make_csv(std::size_t n, std::int64_t step_ms, double base = 1.0) {
    std::string s(sensor_csv_header());
    s += "\n";
    for (std::size_t i = 0; i < n; ++i) {
        s += std::to_string(static_cast<std::int64_t>(i) * step_ms);
        for (std::size_t c = 0; c < kChannelCount; ++c) s += "," + text::format_double(base + c + 0.25 * i);
        s += "\n";
    }
    return s;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoFailure;
}

SessionMeta valid_meta() {
    SessionMeta m;
    m.session_id = "room-7";
    m.width_ft = 12.5;
    m.height_ft = 10.0;
    m.is_rectangle = true;
    m.door_direction_deg = 90.0;
    m.desk_direction_deg = 271.25;
    m.noise_db = 41.5;
    m.heart_rate_bpm = 72.0;
    return m;
}

SensorLog channel_log(const std::vector<double>& channel0, double others = 1.0) {
    SensorLog log;
    for (std::size_t i = 0; i < channel0.size(); ++i) {
        SensorSample s;
        s.timestamp_ms = static_cast<std::int64_t>(i) * 500;
        s.values.fill(others);
        s.values[0] = channel0[i];
        log.samples.push_back(s);
    }
    return log;
}

}  // namespace

TEST_CASE("single valid row parses to a log of length 1") {
    const auto log = parse_sensor_log(make_csv(1, 500), "s");
    CHECK(log.samples.size() == 1);
    CHECK(log.session_id == "s");
    CHECK(log.samples[0].values[8] == 9.0);
}

TEST_CASE("1000 rows at 500 ms spacing form a complete log ending at 499500 ms") {
    const auto log = parse_sensor_log(make_csv(1000, 500), "s");
    CHECK(log.samples.size() == 1000);
    CHECK(log.samples.back().timestamp_ms == 499500);
    CHECK(log.is_complete(kDefaultMinSamples));
    CHECK_FALSE(parse_sensor_log(make_csv(999, 500), "s").is_complete(kDefaultMinSamples));
}

TEST_CASE("non-numeric tvoc names the offending line") {
    std::string csv = make_csv(3, 500);
    auto lines = text::lines(csv);
    std::string bad(lines[2]);
    auto fields = text::split(bad, ',');
    std::string rebuilt;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) rebuilt += ",";
        rebuilt += i == 6 ? std::string("abc") : std::string(fields[i]);
    }
    const std::string doc = std::string(lines[0]) + "\n" + std::string(lines[1]) + "\n" + rebuilt + "\n" +
                            std::string(lines[3]) + "\n";
    try {
        parse_sensor_log(doc, "s");
        FAIL("accepted a non-numeric value");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedRow);
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("tvoc") != std::string::npos);
    }
}

TEST_CASE("parse errors") {
    CHECK(code_of([] { parse_sensor_log("", "s"); }) == ErrorCode::EmptyLog);
    CHECK(code_of([] { parse_sensor_log(std::string(sensor_csv_header()) + "\n", "s"); }) == ErrorCode::EmptyLog);
    CHECK(code_of([] { parse_sensor_log(std::string(sensor_csv_header()) + "\n0,1,2,3\n", "s"); }) ==
          ErrorCode::MalformedRow);
    CHECK(code_of([] { parse_sensor_log("time,a,b\n", "s"); }) == ErrorCode::MalformedRow);
    CHECK(code_of([] {
              parse_sensor_log(std::string(sensor_csv_header()) + "\n0,1,2,3,4,5,6,7,8,nan\n", "s");
          }) == ErrorCode::MalformedRow);
    CHECK(code_of([] {
              parse_sensor_log(std::string(sensor_csv_header()) + "\n-5,1,2,3,4,5,6,7,8,9\n", "s");
          }) == ErrorCode::MalformedRow);
    const std::string backwards = std::string(sensor_csv_header()) +
                                  "\n1000,1,2,3,4,5,6,7,8,9\n999,1,2,3,4,5,6,7,8,9\n";
    CHECK(code_of([&] { parse_sensor_log(backwards, "s"); }) == ErrorCode::NonMonotonicTimestamp);
}

TEST_CASE("equal timestamps, CRLF and unit labels are accepted") {
    const std::string doc =
        "timestamp_ms,temperature[C],humidity (%),air_pressure,light_intensity,toxic_chemical,tvoc,eco2,h2,ethanol\r\n"
        "0,1,2,3,4,5,6,7,8,9\r\n"
        "0,1,2,3,4,5,6,7,8,9\r\n";
    const auto log = parse_sensor_log(doc, "s");
    CHECK(log.samples.size() == 2);
    CHECK(log.units.at("temperature") == "C");
    CHECK(log.units.at("humidity") == "%");
}

TEST_CASE("serialize then parse reproduces samples bit-exactly") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd(0.0, 1e3);
    SensorLog log;
    std::int64_t t = 0;
    for (int i = 0; i < 500; ++i) {
        SensorSample s;
        t += static_cast<std::int64_t>(gen() % 3) * 250;
        s.timestamp_ms = t;
        for (auto& v : s.values) v = nd(gen);
        log.samples.push_back(s);
    }
    const auto back = parse_sensor_log(serialize_sensor_log(log), "x");
    REQUIRE(back.samples.size() == log.samples.size());
    for (std::size_t i = 0; i < log.samples.size(); ++i) CHECK(back.samples[i] == log.samples[i]);
}

TEST_CASE("door direction 370 normalizes to 10") {
    auto m = valid_meta();
    m.door_direction_deg = 370;
    const auto parsed = parse_session_meta(serialize_session_meta(m));
    CHECK(parsed.door_direction_deg == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(normalize_degrees(-90.0) == 270.0);
    CHECK(normalize_degrees(360.0) == 0.0);
    CHECK(normalize_degrees(720.5) == doctest::Approx(0.5));
}

TEST_CASE("meta range and presence checks") {
    auto doc = serialize_session_meta(valid_meta());
    auto replace = [&](const std::string& key, const std::string& value) {
        std::string out;
        for (auto line : text::lines(doc)) {
            if (text::trim(line).rfind(key + " ", 0) == 0) out += key + " = " + value + "\n";
            else out += std::string(line) + "\n";
        }
        return out;
    };
    CHECK(code_of([&] { parse_session_meta(replace("width_ft", "0")); }) == ErrorCode::OutOfRange);
    CHECK(code_of([&] { parse_session_meta(replace("height_ft", "-3")); }) == ErrorCode::OutOfRange);
    CHECK(code_of([&] { parse_session_meta(replace("noise_db", "-1")); }) == ErrorCode::OutOfRange);
    CHECK(code_of([&] { parse_session_meta(replace("heart_rate_bpm", "0")); }) == ErrorCode::OutOfRange);
    CHECK(code_of([&] { parse_session_meta(replace("width_ft", "wide")); }) == ErrorCode::MalformedDocument);
    CHECK(code_of([&] { parse_session_meta(doc + "color = red\n"); }) == ErrorCode::UnknownField);

    std::string missing;
    for (auto line : text::lines(doc))
        if (text::trim(line).rfind("noise_db", 0) != 0) missing += std::string(line) + "\n";
    CHECK(code_of([&] { parse_session_meta(missing); }) == ErrorCode::MissingField);
}

TEST_CASE("full meta document round-trips, heart rate optional") {
    const auto m = valid_meta();
    CHECK(parse_session_meta(serialize_session_meta(m)) == m);
    auto no_hr = m;
    no_hr.heart_rate_bpm.reset();
    CHECK(parse_session_meta(serialize_session_meta(no_hr)) == no_hr);
    CHECK(parse_session_meta("# comment\n" + serialize_session_meta(m)) == m);
    CHECK(session_meta_from_json(to_json(m)) == m);
}

TEST_CASE("despike leaves a constant channel untouched") {
    const auto log = channel_log(std::vector<double>(100, 7.0));
    const auto out = despike(log, 4.0);
    CHECK(out.samples == log.samples);
    for (std::size_t c = 0; c < kChannelCount; ++c) CHECK(out.masked_count(c) == 0);
}

TEST_CASE("a single 10000 spike among 999 tens is masked") {
    std::vector<double> v(1000, 10.0);
    v[500] = 10000.0;
    // Hand z-score: mean = 10 + 9990/1000, population sd = 9990 * sqrt(999) / 1000.
    const double mean = 10.0 + 9990.0 / 1000.0;
    const double sd = 9990.0 * std::sqrt(999.0) / 1000.0;
    CHECK((10000.0 - mean) / sd > 4.0);
    CHECK(std::abs(10.0 - mean) / sd < 4.0);

    const auto out = despike(channel_log(v), 4.0);
    CHECK(out.masked_count(0) == 1);
    CHECK(out.is_masked(500, 0));
    for (std::size_t c = 1; c < kChannelCount; ++c) CHECK(out.masked_count(c) == 0);
    CHECK(out.samples.size() == 1000);
}

TEST_CASE("a huge threshold masks nothing") {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd;
    std::vector<double> v(500);
    for (auto& x : v) x = nd(gen);
    v[17] = 1e6;
    const auto out = despike(channel_log(v), 1e12);
    for (std::size_t c = 0; c < kChannelCount; ++c) CHECK(out.masked_count(c) == 0);
}

TEST_CASE("despike is idempotent at a fixed threshold") {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 50; ++trial) {
        SensorLog log;
        for (int i = 0; i < 300; ++i) {
            SensorSample s;
            s.timestamp_ms = i;
            for (auto& x : s.values) x = nd(gen) + (gen() % 40 == 0 ? 50.0 : 0.0);
            log.samples.push_back(s);
        }
        const double z = 1.0 + static_cast<double>(trial % 5);
        const auto once = despike(log, z);
        const auto twice = despike(once, z);
        CHECK(once.masks == twice.masks);
        CHECK(once.samples == twice.samples);
    }
}

TEST_CASE("despike rejects a non-positive threshold") {
    CHECK(code_of([] { despike(channel_log({1, 2, 3}), 0.0); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("sample JSON validation") {
    SensorSample s;
    s.timestamp_ms = 5;
    s.values = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    CHECK(sensor_sample_from_json(to_json(s)) == s);
    auto j = nlohmann::json::parse(to_json(s).dump());
    j.erase("eco2");
    CHECK(code_of([&] { sensor_sample_from_json(j); }) == ErrorCode::MalformedSample);
    j = nlohmann::json::parse(to_json(s).dump());
    j["timestamp_ms"] = -1;
    CHECK(code_of([&] { sensor_sample_from_json(j); }) == ErrorCode::MalformedSample);
}
