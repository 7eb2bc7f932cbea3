#include "fengshui/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <random>

#include "fengshui/rng.hpp"
#include "fengshui/text.hpp"

namespace fengshui {

namespace fs = std::filesystem;

std::string_view to_string(SessionState s) {
    switch (s) {
        case SessionState::created: return "created";
        case SessionState::collecting: return "collecting";
        case SessionState::survey_done: return "survey_done";
        case SessionState::finalized: return "finalized";
        case SessionState::aborted: return "aborted";
    }
    return "unknown";
}

nlohmann::ordered_json FinalizeSummary::to_json() const {
    nlohmann::ordered_json j;
    j["session_id"] = session_id;
    j["state"] = "finalized";
    j["score"] = score;
    j["wh_ratio_score"] = features.at("wh_ratio_score");
    j["sample_count"] = sample_count;
    j["warnings"] = warnings;
    j["features"] = fengshui::to_json(features);
    return j;
}

namespace {

constexpr const char* kMetaFile = "meta.txt";
constexpr const char* kSamplesFile = "samples.csv";
constexpr const char* kSurveyFile = "survey.json";
constexpr const char* kFinalizedFile = "finalized.json";
constexpr const char* kAbortedFile = "aborted";

void append_durably(const std::string& path, std::string_view data, bool sync) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0) throw Error(ErrorCode::IoFailure, "open " + path + ": " + std::strerror(errno));
    while (!data.empty()) {
        const auto n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            const std::string msg = std::strerror(errno);
            ::close(fd);
            throw Error(ErrorCode::IoFailure, "write " + path + ": " + msg);
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
    if (sync && ::fsync(fd) != 0) {
        ::close(fd);
        throw Error(ErrorCode::IoFailure, "fsync " + path);
    }
    ::close(fd);
}

FinalizeSummary summary_from_json(const nlohmann::json& j) {
    FinalizeSummary s;
    s.session_id = j.at("session_id").get<std::string>();
    s.score = j.at("score").get<double>();
    s.sample_count = j.at("sample_count").get<std::size_t>();
    s.warnings = j.at("warnings").get<std::vector<std::string>>();
    s.features = feature_vector_from_json(j.at("features"));
    return s;
}

}  // namespace

struct SessionManager::Live {
    std::mutex mutex;
    std::string id;
    SessionState state = SessionState::created;
    SessionMeta meta;
    std::vector<SensorSample> samples;
    std::optional<SurveyRecord> survey;
    std::optional<WellbeingScore> score;
    std::optional<FinalizeSummary> summary;
    std::chrono::steady_clock::time_point created_at;
    std::chrono::steady_clock::time_point last_activity;
};

SessionManager::SessionManager(ServiceConfig config, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
    check_pipeline_options(config_.pipeline);
    check_definition(config_.survey);
    fs::create_directories(fs::path(config_.data_dir) / "sessions");
    writer_ = std::make_unique<DatasetWriter>(dataset_path());
    for (const auto& w : writer_->open_warnings()) recovery_warnings_.push_back(w);
    std::random_device rd;
    id_salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    recover();
}

SessionManager::~SessionManager() = default;

std::string SessionManager::dataset_path() const { return (fs::path(config_.data_dir) / "dataset.jsonl").string(); }

std::string SessionManager::session_dir(const std::string& id) const {
    return (fs::path(config_.data_dir) / "sessions" / id).string();
}

std::vector<std::string> SessionManager::recovery_warnings() const {
    std::shared_lock lock(map_mutex_);
    return recovery_warnings_;
}

std::string SessionManager::new_id() {
    while (true) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "s%012llx",
                      static_cast<unsigned long long>(splitmix64_mix(id_salt_ + ++id_counter_) & 0xFFFFFFFFFFFFULL));
        std::string id = buf;
        if (!sessions_.contains(id) && !fs::exists(session_dir(id)) && !writer_->contains(id)) return id;
    }
}

void SessionManager::recover() {
    const fs::path root = fs::path(config_.data_dir) / "sessions";
    for (const auto& entry : fs::directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        const std::string id = entry.path().filename().string();
        const fs::path dir = entry.path();
        try {
            auto live = std::make_shared<Live>();
            live->id = id;
            live->meta = parse_session_meta(text::read_file((dir / kMetaFile).string()));
            live->meta.session_id = id;

            const std::string samples_path = (dir / kSamplesFile).string();
            if (fs::exists(samples_path)) {
                std::string content = text::read_file(samples_path);
                const auto last_nl = content.rfind('\n');
                const std::size_t good = last_nl == std::string::npos ? 0 : last_nl + 1;
                if (good != content.size()) {
                    recovery_warnings_.push_back("session " + id + ": dropped torn journal line");
                    content.resize(good);
                    fs::resize_file(samples_path, good);
                }
                if (text::lines(content).size() > 1) live->samples = parse_sensor_log(content, id).samples;
            }
            if (fs::exists(dir / kSurveyFile)) {
                const auto j = nlohmann::json::parse(text::read_file((dir / kSurveyFile).string()));
                live->survey = survey_record_from_json(j.at("record"));
                live->score = wellbeing_score(*live->survey, config_.survey);
            }
            if (fs::exists(dir / kFinalizedFile)) {
                live->summary = summary_from_json(nlohmann::json::parse(text::read_file((dir / kFinalizedFile).string())));
                live->state = SessionState::finalized;
            } else if (fs::exists(dir / kAbortedFile)) {
                live->state = SessionState::aborted;
            } else if (live->survey) {
                live->state = SessionState::survey_done;
            } else if (!live->samples.empty()) {
                live->state = SessionState::collecting;
            } else {
                live->state = SessionState::created;
            }
            live->created_at = live->last_activity = clock_();
            sessions_.emplace(id, std::move(live));
        } catch (const std::exception& e) {
            recovery_warnings_.push_back("session " + id + " not recovered: " + e.what());
        }
    }
}

std::shared_ptr<SessionManager::Live> SessionManager::find(const std::string& id) {
    std::shared_ptr<Live> live;
    {
        std::shared_lock lock(map_mutex_);
        const auto it = sessions_.find(id);
        if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + id + "'");
        live = it->second;
    }
    return live;
}

namespace {

bool is_open(SessionState s) { return s != SessionState::finalized && s != SessionState::aborted; }

[[noreturn]] void bad_state(const std::string& op, SessionState s) {
    throw Error(ErrorCode::BadState, op + " not allowed in state " + std::string(to_string(s)));
}

}  // namespace

bool SessionManager::expire_if_idle(Live& live, std::chrono::steady_clock::time_point now) {
    if (!is_open(live.state) || now - live.last_activity <= config_.session_ttl) return false;
    live.state = SessionState::aborted;
    text::write_file((fs::path(session_dir(live.id)) / kAbortedFile).string(), "expired\n");
    return true;
}

std::string SessionManager::create_session(SessionMeta meta) {
    try {
        validate_session_meta(meta);
    } catch (const Error& e) {
        throw ValidationFailure(e.what(), {});
    }
    std::unique_lock lock(map_mutex_);
    const std::string id = new_id();
    meta.session_id = id;
    const fs::path dir = session_dir(id);
    fs::create_directories(dir);
    text::write_file((dir / kMetaFile).string(), serialize_session_meta(meta));
    append_durably((dir / kSamplesFile).string(), std::string(sensor_csv_header()) + "\n", config_.sync_journal);

    auto live = std::make_shared<Live>();
    live->id = id;
    live->meta = std::move(meta);
    live->created_at = live->last_activity = clock_();
    sessions_.emplace(id, std::move(live));
    return id;
}

std::size_t SessionManager::push_samples(const std::string& id, std::span<const SensorSample> batch) {
    auto live = find(id);
    std::lock_guard lock(live->mutex);
    const auto now = clock_();
    expire_if_idle(*live, now);
    if (live->state != SessionState::created && live->state != SessionState::collecting)
        bad_state("push_samples", live->state);

    std::int64_t last = live->samples.empty() ? 0 : live->samples.back().timestamp_ms;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        if (!sample_is_valid(batch[i]))
            throw Error(ErrorCode::MalformedSample, "sample " + std::to_string(i) + " has a negative timestamp or non-finite value");
        if (batch[i].timestamp_ms < last)
            throw Error(ErrorCode::MalformedSample, "sample " + std::to_string(i) + " timestamp " +
                                                        std::to_string(batch[i].timestamp_ms) + " precedes " +
                                                        std::to_string(last));
        last = batch[i].timestamp_ms;
    }
    if (!batch.empty()) {
        std::string rows;
        for (const auto& s : batch) {
            rows += format_sample_row(s);
            rows += '\n';
        }
        append_durably((fs::path(session_dir(id)) / kSamplesFile).string(), rows, config_.sync_journal);
        live->samples.insert(live->samples.end(), batch.begin(), batch.end());
    }
    live->state = SessionState::collecting;
    live->last_activity = now;
    return live->samples.size();
}

Progress SessionManager::get_progress(const std::string& id) {
    auto live = find(id);
    std::lock_guard lock(live->mutex);
    const auto now = clock_();
    expire_if_idle(*live, now);
    Progress p;
    p.state = live->state;
    p.sample_count = live->samples.size();
    p.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - live->created_at).count();
    if (!live->samples.empty()) p.latest = live->samples.back();
    return p;
}

WellbeingScore SessionManager::submit_survey(const std::string& id, const SurveyRecord& record) {
    auto live = find(id);
    std::lock_guard lock(live->mutex);
    const auto now = clock_();
    expire_if_idle(*live, now);
    if (live->state != SessionState::collecting) bad_state("submit_survey", live->state);

    auto violations = validate_record(record, config_.survey);
    if (!violations.empty()) {
        std::string msg = "survey record rejected:";
        for (const auto& v : violations) msg += " " + to_string(v.kind);
        throw ValidationFailure(msg, std::move(violations));
    }
    SurveyRecord stored = record;
    stored.session_id = id;
    const WellbeingScore score = wellbeing_score(stored, config_.survey);

    nlohmann::ordered_json j;
    j["record"] = to_json(stored);
    j["score"] = score.value;
    j["mean_image_rating"] = score.mean_image_rating;
    text::write_file((fs::path(session_dir(id)) / kSurveyFile).string(), j.dump(2));

    live->survey = std::move(stored);
    live->score = score;
    live->state = SessionState::survey_done;
    live->last_activity = now;
    return score;
}

FinalizeSummary SessionManager::finalize_session(const std::string& id) {
    auto live = find(id);
    std::lock_guard lock(live->mutex);
    if (live->state == SessionState::finalized) return *live->summary;
    const auto now = clock_();
    expire_if_idle(*live, now);
    if (live->state != SessionState::survey_done) bad_state("finalize_session", live->state);

    SensorLog log;
    log.session_id = id;
    log.samples = live->samples;
    const SessionFeatures computed = compute_session_features(live->meta, log, config_.pipeline);

    FinalizeSummary summary;
    summary.session_id = id;
    summary.features = computed.features;
    summary.score = live->score->value;
    summary.sample_count = live->samples.size();
    summary.warnings = computed.warnings;

    DatasetRow row;
    row.session_id = id;
    row.timestamp = utc_timestamp();
    row.features = computed.features;
    row.score = summary.score;
    const std::string rel = (fs::path("sessions") / id).string();
    row.artifacts = {{"meta", rel + "/" + kMetaFile},
                     {"sensor_log", rel + "/" + kSamplesFile},
                     {"survey", rel + "/" + kSurveyFile}};
    try {
        writer_->append(row);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DuplicateSession) throw;
    }
    text::write_file((fs::path(session_dir(id)) / kFinalizedFile).string(), summary.to_json().dump(2));
    live->summary = summary;
    live->state = SessionState::finalized;
    live->last_activity = now;
    return summary;
}

void SessionManager::abort_session(const std::string& id) {
    auto live = find(id);
    std::lock_guard lock(live->mutex);
    if (live->state == SessionState::finalized) bad_state("abort_session", live->state);
    if (live->state == SessionState::aborted) return;
    text::write_file((fs::path(session_dir(id)) / kAbortedFile).string(), "aborted\n");
    live->state = SessionState::aborted;
    live->last_activity = clock_();
}

std::size_t SessionManager::expire_idle() {
    std::vector<std::shared_ptr<Live>> all;
    {
        std::shared_lock lock(map_mutex_);
        for (const auto& [id, live] : sessions_) all.push_back(live);
    }
    std::size_t expired = 0;
    const auto now = clock_();
    for (const auto& live : all) {
        std::lock_guard lock(live->mutex);
        if (expire_if_idle(*live, now)) ++expired;
    }
    return expired;
}

std::string SessionManager::export_dataset_csv() const {
    const auto loaded = load_dataset(dataset_path());
    return export_csv(loaded.rows);
}

int http_status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownSession: return 404;
        case ErrorCode::BadState: return 409;
        case ErrorCode::ValidationError:
        case ErrorCode::MalformedSample:
        case ErrorCode::MalformedDocument:
        case ErrorCode::MissingField:
        case ErrorCode::UnknownField:
        case ErrorCode::OutOfRange:
        case ErrorCode::EmptyChannel:
        case ErrorCode::EmptyLog: return 422;
        case ErrorCode::IoFailure:
        case ErrorCode::CorruptRow:
        case ErrorCode::VersionMismatch: return 500;
        default: return 400;
    }
}

}  // namespace fengshui
