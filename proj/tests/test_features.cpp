#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fengshui/error.hpp"
#include "fengshui/features.hpp"
#include "fengshui/ingest.hpp"

using namespace fengshui;

namespace {

constexpr double kPi = std::numbers::pi;

double branch_rise(double r) { return std::sin(r * kPi / 2); }
double branch_fall(double r, double best) { return 2 * std::sin(best * kPi / 2) - std::sin(r * kPi / 2); }

SensorLog random_log(std::mt19937_64& gen, std::size_t n) {
    std::normal_distribution<double> nd(0.0, 5.0);
    SensorLog log;
    for (std::size_t i = 0; i < n; ++i) {
        SensorSample s;
        s.timestamp_ms = static_cast<std::int64_t>(i) * 500;
        for (std::size_t c = 0; c < kChannelCount; ++c) s.values[c] = 100.0 * c + nd(gen);
        log.samples.push_back(s);
    }
    return log;
}

SessionMeta meta(double w, double h, bool rect = true) {
    SessionMeta m;
    m.session_id = "m";
    m.width_ft = w;
    m.height_ft = h;
    m.is_rectangle = rect;
    m.door_direction_deg = 45;
    m.desk_direction_deg = 300;
    m.noise_db = 38;
    return m;
}

}  // namespace

TEST_CASE("feature names follow the correlation table") {
    const auto& names = feature_names();
    CHECK(names.size() == 25);
    CHECK(names.front() == "width");
    CHECK(names[5] == "noise_db");
    CHECK(names[6] == "Temperature_mean");
    CHECK(names[14] == "Ethanol_Level_mean");
    CHECK(names[15] == "Temperature_std");
    CHECK(names[23] == "Ethanol_Level_std");
    CHECK(names[24] == "wh_ratio_score");
    CHECK(feature_index("wh_ratio") == feature_index("wh_ratio_score"));
    CHECK_FALSE(feature_index("Temperature"));
    CHECK_THROWS_AS(require_feature_index("bogus"), Error);
}

TEST_CASE("aggregate examples") {
    SensorLog constant;
    for (int i = 0; i < 1000; ++i) {
        SensorSample s;
        s.timestamp_ms = i * 500;
        s.values.fill(7.5);
        constant.samples.push_back(s);
    }
    auto st = aggregate_channels(constant);
    for (std::size_t c = 0; c < kChannelCount; ++c) {
        CHECK(st.mean[c] == 7.5);
        CHECK(st.std[c] == 0.0);
    }

    SensorLog three;
    for (int i = 1; i <= 3; ++i) {
        SensorSample s;
        s.timestamp_ms = i;
        s.values.fill(static_cast<double>(i));
        three.samples.push_back(s);
    }
    st = aggregate_channels(three);
    CHECK(st.mean[0] == 2.0);
    CHECK(st.std[0] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    CHECK(aggregate_channels(three, StdMode::sample).std[0] == doctest::Approx(1.0).epsilon(1e-15));

    SensorLog one;
    one.samples.push_back(three.samples[0]);
    for (double s : aggregate_channels(one).std) CHECK(s == 0.0);
    for (double s : aggregate_channels(one, StdMode::sample).std) CHECK(s == 0.0);
}

TEST_CASE("masked values are excluded from aggregation") {
    SensorLog log;
    for (int i = 0; i < 4; ++i) {
        SensorSample s;
        s.timestamp_ms = i;
        s.values.fill(i == 3 ? 100.0 : 1.0 + i);
        log.samples.push_back(s);
    }
    log.masks.assign(4, ChannelMask{});
    log.masks[3].set(2);
    const auto st = aggregate_channels(log);
    CHECK(st.mean[2] == 2.0);
    CHECK(st.mean[0] == doctest::Approx(106.0 / 4.0));

    for (auto& m : log.masks) m.set(5);
    CHECK_THROWS_AS(aggregate_channels(log), Error);
}

TEST_CASE("duplicating every sample leaves mean and population std unchanged") {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto log = random_log(gen, 1 + gen() % 200);
        auto doubled = log;
        doubled.samples.insert(doubled.samples.end(), log.samples.begin(), log.samples.end());
        const auto a = aggregate_channels(log);
        const auto b = aggregate_channels(doubled);
        for (std::size_t c = 0; c < kChannelCount; ++c) {
            CHECK(b.mean[c] == doctest::Approx(a.mean[c]).epsilon(1e-12));
            CHECK(b.std[c] == doctest::Approx(a.std[c]).epsilon(1e-9));
        }
    }
}

TEST_CASE("ratio score examples") {
    CHECK(wh_ratio_score(9, 9, {1.0}) == 1.0);
    const double at_best = wh_ratio_score(6.18, 10, {0.618});
    CHECK(at_best == doctest::Approx(0.8253).epsilon(1e-4));
    CHECK(std::abs(branch_rise(0.618) - branch_fall(0.618, 0.618)) < 1e-12);
    const double v = wh_ratio_score(12, 10, {0.618});
    CHECK(v == doctest::Approx(branch_fall(10.0 / 12.0, 0.618)).epsilon(1e-15));
    CHECK(v == doctest::Approx(0.6847).epsilon(1e-4));
    CHECK_THROWS_AS(wh_ratio_score(0, 10, {0.618}), Error);
    CHECK_THROWS_AS(wh_ratio_score(5, -1, {0.618}), Error);
    CHECK_THROWS_AS(wh_ratio_score(5, 5, {0.0}), Error);
    CHECK_THROWS_AS(wh_ratio_score(5, 5, {1.5}), Error);
}

TEST_CASE("ratio score shape properties") {
    for (double best : {0.3, 0.618, 1.0}) {
        CAPTURE(best);
        const RatioConfig cfg{best};
        const double peak = std::sin(best * kPi / 2);
        CHECK(std::abs(wh_ratio_score(best, 1.0, cfg) - peak) < 1e-15);
        double prev = -1;
        for (int i = 1; i <= 1000; ++i) {
            const double r = i / 1000.0;
            const double s = wh_ratio_score(r, 1.0, cfg);
            if (r <= best) {
                CHECK(s > prev);
                CHECK(s <= peak);
            } else {
                CHECK(s < prev);
            }
            prev = s;
            CHECK(wh_ratio_score(1.0, r, cfg) == s);
            CHECK(wh_ratio_score(r * 13.0, 13.0, cfg) == doctest::Approx(s).epsilon(1e-14));
        }
    }
}

TEST_CASE("feature vector equals an independently assembled one") {
    std::mt19937_64 gen(21);
    const auto log = random_log(gen, 1000);
    const auto m = meta(14, 11, false);
    const auto fv = build_feature_vector(m, log, {0.618});

    std::array<double, 25> expected{};
    expected[0] = 14;
    expected[1] = 11;
    expected[2] = 45;
    expected[3] = 300;
    expected[4] = 0;
    expected[5] = 38;
    for (std::size_t c = 0; c < kChannelCount; ++c) {
        long double sum = 0;
        for (const auto& s : log.samples) sum += s.values[c];
        const long double mean = sum / log.samples.size();
        long double ss = 0;
        for (const auto& s : log.samples) ss += (s.values[c] - mean) * (s.values[c] - mean);
        expected[6 + c] = static_cast<double>(mean);
        expected[15 + c] = static_cast<double>(std::sqrt(ss / log.samples.size()));
    }
    expected[24] = branch_fall(11.0 / 14.0, 0.618);

    for (std::size_t i = 0; i < 25; ++i) {
        CAPTURE(feature_names()[i]);
        CHECK(fv.values[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
    CHECK(build_feature_vector(m, log, {0.618}) == fv);
}

TEST_CASE("constant log in a square room") {
    SensorLog log;
    for (int i = 0; i < 10; ++i) {
        SensorSample s;
        s.timestamp_ms = i;
        s.values.fill(3.0);
        log.samples.push_back(s);
    }
    const auto fv = build_feature_vector(meta(10, 10), log, {0.618});
    for (std::size_t c = 0; c < kChannelCount; ++c) CHECK(fv.values[15 + c] == 0.0);
    CHECK(fv.at("wh_ratio_score") == doctest::Approx(branch_fall(1.0, 0.618)).epsilon(1e-15));
    CHECK(fv.at("is_rect") == 1.0);
    CHECK(build_feature_vector(meta(10, 10), log, {1.0}).at("wh_ratio_score") == 1.0);
}

TEST_CASE("feature JSON round-trip keeps all 25 names") {
    FeatureVector fv;
    for (std::size_t i = 0; i < 25; ++i) fv.values[i] = 0.1 * i + 1e-17 * i;
    const auto j = to_json(fv);
    CHECK(j.size() == 25);
    CHECK(feature_vector_from_json(nlohmann::json::parse(j.dump())) == fv);
}
