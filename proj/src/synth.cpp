#include "fengshui/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "fengshui/error.hpp"
#include "fengshui/eval.hpp"
#include "fengshui/rng.hpp"

namespace fengshui {

namespace {

struct WalkParams {
    double base_lo;
    double base_hi;
    double step_std;
};

// Per channel: starting level drawn uniformly from [base_lo, base_hi), then
// Gaussian increments with step_std.
constexpr std::array<WalkParams, kChannelCount> kWalks = {{
    {18.0, 27.0, 0.02},         // temperature
    {25.0, 65.0, 0.1},          // humidity
    {990.0, 1030.0, 0.05},      // air_pressure
    {50.0, 800.0, 2.0},         // light_intensity
    {0.0, 50.0, 0.5},           // toxic_chemical
    {0.0, 500.0, 3.0},          // tvoc
    {400.0, 1500.0, 5.0},       // eco2
    {11000.0, 14000.0, 10.0},   // h2
    {15000.0, 20000.0, 10.0},   // ethanol
}};

// Spikes are offset by this many step_std units.
constexpr double kSpikeSteps = 400.0;

}  // namespace

std::string synth_session_id(std::size_t room_index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "synth-%04zu", room_index);
    return buf;
}

void check_synth_spec(const SynthSpec& spec) {
    if (spec.n_rooms < 2) throw Error(ErrorCode::InvalidConfig, "n_rooms must be >= 2");
    if (!(spec.noise_std >= 0.0) || !std::isfinite(spec.noise_std))
        throw Error(ErrorCode::InvalidConfig, "noise_std must be >= 0");
    if (!(spec.sensor_spike_rate >= 0.0 && spec.sensor_spike_rate <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "sensor_spike_rate must be in [0, 1]");
    if (spec.samples_per_room < 1) throw Error(ErrorCode::InvalidConfig, "samples_per_room must be >= 1");
    if (spec.sample_interval_ms < 0) throw Error(ErrorCode::InvalidConfig, "sample_interval_ms must be >= 0");
    for (const auto& [name, weight] : spec.informative_features) {
        require_feature_index(name);
        if (!std::isfinite(weight)) throw Error(ErrorCode::InvalidConfig, "weight for " + name + " is not finite");
    }
    check_ratio_config(spec.ratio);
}

SynthSessions generate(const SynthSpec& spec) {
    check_synth_spec(spec);
    SynthSessions out;
    out.metas.reserve(spec.n_rooms);
    out.logs.reserve(spec.n_rooms);

    for (std::size_t room = 0; room < spec.n_rooms; ++room) {
        CounterRng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(room)));
        SessionMeta meta;
        meta.session_id = synth_session_id(room);
        meta.width_ft = rng.uniform(8.0, 20.0);
        meta.height_ft = rng.uniform(8.0, 20.0);
        meta.is_rectangle = rng.bernoulli(0.8);
        meta.door_direction_deg = rng.uniform(0.0, 360.0);
        meta.desk_direction_deg = rng.uniform(0.0, 360.0);
        meta.noise_db = rng.uniform(30.0, 60.0);
        meta.heart_rate_bpm = rng.uniform(60.0, 90.0);

        SensorLog log;
        log.session_id = meta.session_id;
        log.samples.resize(spec.samples_per_room);
        std::array<double, kChannelCount> level{};
        for (std::size_t c = 0; c < kChannelCount; ++c) level[c] = rng.uniform(kWalks[c].base_lo, kWalks[c].base_hi);
        for (std::size_t i = 0; i < spec.samples_per_room; ++i) {
            auto& s = log.samples[i];
            s.timestamp_ms = static_cast<std::int64_t>(i) * spec.sample_interval_ms;
            for (std::size_t c = 0; c < kChannelCount; ++c) {
                if (i > 0) level[c] += kWalks[c].step_std * rng.normal();
                s.values[c] = level[c];
                if (spec.sensor_spike_rate > 0.0 && rng.bernoulli(spec.sensor_spike_rate)) {
                    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
                    s.values[c] += sign * kSpikeSteps * kWalks[c].step_std;
                }
            }
        }
        out.features.push_back(build_feature_vector(meta, log, spec.ratio));
        out.metas.push_back(std::move(meta));
        out.logs.push_back(std::move(log));
    }

    // Link scores to standardized post-aggregation features.
    const auto n = static_cast<double>(spec.n_rooms);
    std::vector<double> linear(spec.n_rooms, 3.0);
    for (const auto& [name, weight] : spec.informative_features) {
        const std::size_t f = require_feature_index(name);
        double sum = 0.0;
        for (const auto& fv : out.features) sum += fv.values[f];
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& fv : out.features) ss += (fv.values[f] - mean) * (fv.values[f] - mean);
        const double sd = std::sqrt(ss / n);
        if (sd == 0.0) continue;
        for (std::size_t r = 0; r < spec.n_rooms; ++r) linear[r] += weight * (out.features[r].values[f] - mean) / sd;
    }
    CounterRng noise(derive_seed(spec.seed, std::string_view("score-noise")));
    out.scores.resize(spec.n_rooms);
    for (std::size_t r = 0; r < spec.n_rooms; ++r) {
        const double eps = spec.noise_std > 0.0 ? spec.noise_std * noise.normal() : 0.0;
        out.scores[r] = std::clamp(linear[r] + eps, 1.0, 5.0);
    }
    return out;
}

LabeledDataset generate_dataset(const SynthSpec& spec) {
    SynthSessions sessions = generate(spec);
    std::vector<ScoredRow> rows;
    rows.reserve(spec.n_rooms);
    for (std::size_t r = 0; r < spec.n_rooms; ++r)
        rows.push_back({sessions.metas[r].session_id, sessions.features[r], sessions.scores[r]});
    return label_by_mean(std::move(rows));
}

}  // namespace fengshui
