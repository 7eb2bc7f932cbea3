#include <httplib.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <thread>

#include "fengshui/service.hpp"

namespace fengshui {

namespace {

using ordered_json = nlohmann::ordered_json;

void send_json(httplib::Response& res, int status, const ordered_json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
    ordered_json body;
    body["error"] = to_string(e.code());
    body["message"] = e.what();
    body["violations"] = ordered_json::array();
    if (const auto* vf = dynamic_cast<const ValidationFailure*>(&e))
        for (const auto& v : vf->violations()) body["violations"].push_back(to_json(v));
    send_json(res, http_status_for(e.code()), body);
}

nlohmann::json parse_body(const httplib::Request& req) {
    try {
        return nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("request body is not JSON: ") + e.what());
    }
}

template <class Handler>
httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const std::exception& e) {
            send_error(res, Error(ErrorCode::IoFailure, e.what()));
        }
    };
}

ordered_json progress_json(const Progress& p, std::size_t target) {
    ordered_json j;
    j["state"] = to_string(p.state);
    j["sample_count"] = p.sample_count;
    j["target"] = target;
    j["elapsed_ms"] = p.elapsed_ms;
    j["latest"] = p.latest ? to_json(*p.latest) : ordered_json(nullptr);
    return j;
}

}  // namespace

struct HttpService::Impl {
    SessionManager& manager;
    httplib::Server server;
    std::jthread sweeper;
    std::mutex sweep_mutex;
    std::condition_variable_any sweep_cv;

    explicit Impl(SessionManager& m) : manager(m) { install_routes(); }

    void install_routes() {
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Headers", "Content-Type"},
                                    {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
        server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

        server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
            SessionMeta meta;
            try {
                meta = session_meta_from_json(parse_body(req));
            } catch (const Error& e) {
                throw ValidationFailure(e.what(), {});
            }
            const std::string id = manager.create_session(meta);
            send_json(res, 200, {{"session_id", id}, {"state", "created"}});
        }));

        server.Post(R"(/sessions/([^/]+)/samples)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            const auto body = parse_body(req);
            if (!body.is_array() && !(body.is_object() && body.contains("samples")))
                throw Error(ErrorCode::MalformedSample, "expected an array of samples or {\"samples\": [...]}");
            const auto& arr = body.is_array() ? body : body.at("samples");
            if (!arr.is_array()) throw Error(ErrorCode::MalformedSample, "samples must be an array");
            std::vector<SensorSample> batch;
            batch.reserve(arr.size());
            for (const auto& s : arr) batch.push_back(sensor_sample_from_json(s));
            const auto total = manager.push_samples(req.matches[1], batch);
            send_json(res, 200, {{"accepted", batch.size()}, {"sample_count", total}});
        }));

        server.Get(R"(/sessions/([^/]+)/progress)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            send_json(res, 200, progress_json(manager.get_progress(req.matches[1]), manager.config().pipeline.min_samples));
        }));

        server.Post(R"(/sessions/([^/]+)/survey)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            SurveyRecord record;
            try {
                record = survey_record_from_json(parse_body(req));
            } catch (const Error& e) {
                throw ValidationFailure(e.what(), {});
            }
            const auto score = manager.submit_survey(req.matches[1], record);
            send_json(res, 200, {{"score", score.value}, {"mean_image_rating", score.mean_image_rating}, {"state", "survey_done"}});
        }));

        server.Post(R"(/sessions/([^/]+)/finalize)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            send_json(res, 200, manager.finalize_session(req.matches[1]).to_json());
        }));

        server.Post(R"(/sessions/([^/]+)/abort)", guarded([this](const httplib::Request& req, httplib::Response& res) {
            manager.abort_session(req.matches[1]);
            send_json(res, 200, {{"state", "aborted"}});
        }));

        server.Get("/dataset/export.csv", guarded([this](const httplib::Request&, httplib::Response& res) {
            res.set_content(manager.export_dataset_csv(), "text/csv");
        }));

        server.Get("/survey/definition", guarded([this](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, to_json(manager.config().survey));
        }));
    }

    void start_sweeper() {
        sweeper = std::jthread([this](std::stop_token stop) {
            std::unique_lock lock(sweep_mutex);
            while (!stop.stop_requested()) {
                sweep_cv.wait_for(lock, stop, std::chrono::seconds(60), [] { return false; });
                if (stop.stop_requested()) break;
                manager.expire_idle();
            }
        });
    }
};

HttpService::HttpService(SessionManager& manager) : impl_(std::make_unique<Impl>(manager)) {}

HttpService::~HttpService() { stop(); }

bool HttpService::listen(const std::string& host, int port) {
    impl_->start_sweeper();
    return impl_->server.listen(host, port);
}

int HttpService::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpService::run() {
    impl_->start_sweeper();
    return impl_->server.listen_after_bind();
}

void HttpService::stop() {
    impl_->server.stop();
    if (impl_->sweeper.joinable()) {
        impl_->sweeper.request_stop();
        impl_->sweeper.join();
    }
}

void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace fengshui
