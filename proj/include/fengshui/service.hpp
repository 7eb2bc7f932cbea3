#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fengshui/error.hpp"
#include "fengshui/ingest.hpp"
#include "fengshui/pipeline.hpp"
#include "fengshui/store.hpp"
#include "fengshui/survey.hpp"

namespace fengshui {

enum class SessionState { created, collecting, survey_done, finalized, aborted };

std::string_view to_string(SessionState s);

struct ServiceConfig {
    std::string data_dir = "fengshui-data";
    PipelineOptions pipeline;
    std::chrono::seconds session_ttl = std::chrono::hours(4);
    SurveyDefinition survey = default_survey_definition();
    // fsync the raw-sample journal after every push.
    bool sync_journal = true;
};

// ValidationError that also carries the survey violations.
class ValidationFailure : public Error {
public:
    ValidationFailure(const std::string& message, std::vector<Violation> violations)
        : Error(ErrorCode::ValidationError, message), violations_(std::move(violations)) {}
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

struct Progress {
    SessionState state = SessionState::created;
    std::size_t sample_count = 0;
    std::int64_t elapsed_ms = 0;
    std::optional<SensorSample> latest;
};

struct FinalizeSummary {
    std::string session_id;
    FeatureVector features;
    double score = 0.0;
    std::size_t sample_count = 0;
    std::vector<std::string> warnings;

    nlohmann::ordered_json to_json() const;
};

// Live capture sessions. Sessions are independent; operations on one
// session are serialized by its own lock, and dataset appends go through a
// single DatasetWriter. Every pushed batch is journaled under
// <data_dir>/sessions/<id>/ before it is acknowledged, and the constructor
// rebuilds unfinished sessions from those journals.
class SessionManager {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;

    explicit SessionManager(ServiceConfig config, Clock clock = &std::chrono::steady_clock::now);
    ~SessionManager();
    SessionManager(const SessionManager&) = delete;
    SessionManager& operator=(const SessionManager&) = delete;

    // Throws ValidationFailure for an invalid meta. The server assigns the id.
    std::string create_session(SessionMeta meta);
    // Appends an entire batch or nothing. Returns the running total.
    std::size_t push_samples(const std::string& id, std::span<const SensorSample> batch);
    Progress get_progress(const std::string& id);
    WellbeingScore submit_survey(const std::string& id, const SurveyRecord& record);
    // Idempotent: a finalized session returns its stored summary.
    FinalizeSummary finalize_session(const std::string& id);
    void abort_session(const std::string& id);

    // Aborts sessions idle longer than the TTL; returns how many.
    std::size_t expire_idle();

    const ServiceConfig& config() const { return config_; }
    std::string dataset_path() const;
    std::string export_dataset_csv() const;
    std::vector<std::string> recovery_warnings() const;

private:
    struct Live;

    std::shared_ptr<Live> find(const std::string& id);
    // Caller holds live's lock.
    bool expire_if_idle(Live& live, std::chrono::steady_clock::time_point now);
    std::string new_id();
    std::string session_dir(const std::string& id) const;
    void recover();

    ServiceConfig config_;
    Clock clock_;
    std::unique_ptr<DatasetWriter> writer_;
    mutable std::shared_mutex map_mutex_;
    std::map<std::string, std::shared_ptr<Live>> sessions_;
    std::uint64_t id_counter_ = 0;
    std::uint64_t id_salt_ = 0;
    std::vector<std::string> recovery_warnings_;
};

// HTTP front end. Bodies are JSON; errors come back as
// {"error": <code>, "message": ..., "violations": [...]}.
class HttpService {
public:
    explicit HttpService(SessionManager& manager);
    ~HttpService();
    HttpService(const HttpService&) = delete;
    HttpService& operator=(const HttpService&) = delete;

    // Blocks until stop(). Returns false if the port could not be bound.
    bool listen(const std::string& host, int port);
    // Binds an ephemeral port and returns it (or -1); serve with run().
    int bind_any_port(const std::string& host);
    bool run();
    void stop();
    // Blocks until the server is accepting connections.
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

int http_status_for(ErrorCode code);

}  // namespace fengshui
