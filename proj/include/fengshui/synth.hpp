#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fengshui/dataset.hpp"
#include "fengshui/features.hpp"
#include "fengshui/ingest.hpp"

namespace fengshui {

struct SynthSpec {
    std::size_t n_rooms = 22;
    // (feature name, weight applied to the standardized feature)
    std::vector<std::pair<std::string, double>> informative_features;
    double noise_std = 0.3;
    double sensor_spike_rate = 0.0;
    std::uint64_t seed = 0;
    std::size_t samples_per_room = kDefaultMinSamples;
    std::int64_t sample_interval_ms = 500;
    RatioConfig ratio;
};

// Throws Error{UnknownFeatureName | InvalidConfig}.
void check_synth_spec(const SynthSpec& spec);

struct SynthSessions {
    std::vector<SessionMeta> metas;
    std::vector<SensorLog> logs;
    std::vector<double> scores;
    std::vector<FeatureVector> features;  // what the scores were linked to
};

// Room i draws everything from the stream derive_seed(seed, i); score noise
// comes from a separate "score-noise" stream. Channel values are random
// walks whose parameters are listed in docs/formats.md.
SynthSessions generate(const SynthSpec& spec);

// generate -> build_feature_vector -> label_by_mean.
LabeledDataset generate_dataset(const SynthSpec& spec);

std::string synth_session_id(std::size_t room_index);

}  // namespace fengshui
