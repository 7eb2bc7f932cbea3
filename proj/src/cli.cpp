#include "fengshui/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fengshui/analysis.hpp"
#include "fengshui/error.hpp"
#include "fengshui/eval.hpp"
#include "fengshui/features.hpp"
#include "fengshui/ingest.hpp"
#include "fengshui/models.hpp"
#include "fengshui/pipeline.hpp"
#include "fengshui/service.hpp"
#include "fengshui/store.hpp"
#include "fengshui/survey.hpp"
#include "fengshui/synth.hpp"
#include "fengshui/text.hpp"

namespace fengshui {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct PipelineFlags {
    bool despike = false;
    double z_threshold = kDefaultDespikeThreshold;
    double best_ratio = 0.618;
    bool sample_std = false;
    std::size_t min_samples = kDefaultMinSamples;

    void add(CLI::App* app) {
        app->add_flag("--despike", despike, "Mask per-channel z-score outliers before aggregation");
        app->add_option("--z-threshold", z_threshold, "Despike z-score threshold")->capture_default_str();
        app->add_option("--best-ratio", best_ratio, "Peak of the room-shape ratio score, in (0, 1]")->capture_default_str();
        app->add_flag("--sample-std", sample_std, "Use the N-1 standard deviation instead of N");
        app->add_option("--min-samples", min_samples, "Samples below which a log is flagged UnderSampled")
            ->capture_default_str();
    }

    PipelineOptions options() const {
        PipelineOptions o;
        o.despike = despike;
        o.z_threshold = z_threshold;
        o.ratio.best_ratio = best_ratio;
        o.std_mode = sample_std ? StdMode::sample : StdMode::population;
        o.min_samples = min_samples;
        check_pipeline_options(o);
        return o;
    }
};

struct ModelFlags {
    std::string kind = "knn";
    int k = 3;
    int max_depth = -1;
    int min_leaf = 1;
    int trees = 100;
    std::string per_split = "sqrt";
    bool no_bootstrap = false;
    bool no_standardize = false;

    void add(CLI::App* app) {
        app->add_option("--model", kind, "knn | decision_tree | random_forest")->capture_default_str();
        app->add_option("--k", k, "KNN neighbors")->capture_default_str();
        app->add_option("--max-depth", max_depth, "Tree depth limit (-1: unlimited)")->capture_default_str();
        app->add_option("--min-leaf", min_leaf, "Minimum rows per tree leaf")->capture_default_str();
        app->add_option("--trees", trees, "Random forest size")->capture_default_str();
        app->add_option("--features-per-split", per_split, "sqrt | all | <n>")->capture_default_str();
        app->add_flag("--no-bootstrap", no_bootstrap, "Grow forest trees on the full training set");
        app->add_flag("--no-standardize", no_standardize, "Use raw feature scales for KNN");
    }

    ModelSpec spec(std::uint64_t seed) const {
        ModelSpec s;
        s.kind = parse_model_kind(kind);
        s.knn_k = k;
        if (max_depth >= 0) s.tree_max_depth = max_depth;
        s.tree_min_leaf = min_leaf;
        s.forest_n_trees = trees;
        s.forest_features_per_split = SplitFeatures::parse(per_split);
        s.forest_bootstrap = !no_bootstrap;
        s.standardize_features = !no_standardize;
        s.seed = seed;
        check_model_spec(s);
        return s;
    }
};

std::vector<std::string> split_names(const std::string& list) {
    std::vector<std::string> out;
    for (auto part : text::split(list, ',')) {
        const auto t = text::trim(part);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

LabeledDataset load_labeled(const std::string& path, std::ostream& err) {
    const LoadResult loaded = load_dataset(path);
    for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";
    return label_by_mean(to_scored_rows(loaded.rows));
}

void write_output(const std::string& path, std::string_view content) { text::write_file(path, content); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void print_features(std::ostream& out, const FeatureVector& fv) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-28s %.10g\n", std::string(feature_names()[i]).c_str(), fv.values[i]);
        out << buf;
    }
}

struct LoadedSession {
    SessionMeta meta;
    SensorLog log;
};

LoadedSession load_session_inputs(const std::string& session_file, const std::string& log_file,
                                  const std::string& meta_file) {
    LoadedSession s;
    if (!session_file.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text::read_file(session_file));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedDocument, session_file + ": " + e.what());
        }
        session_record_from_json(j, s.meta, s.log);
        return s;
    }
    if (log_file.empty() || meta_file.empty())
        throw Error(ErrorCode::MissingField, "either --session or both --log and --meta are required");
    try {
        s.meta = parse_session_meta(text::read_file(meta_file));
    } catch (const Error& e) {
        throw Error(e.code(), meta_file + ": " + e.what());
    }
    try {
        s.log = parse_sensor_log(text::read_file(log_file), s.meta.session_id);
    } catch (const Error& e) {
        throw Error(e.code(), log_file + ": " + e.what());
    }
    return s;
}

SurveyDefinition load_definition(const std::string& path) {
    if (path.empty()) return default_survey_definition();
    try {
        auto def = survey_definition_from_json(nlohmann::json::parse(text::read_file(path)));
        check_definition(def);
        return def;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, path + ": " + e.what());
    }
}

SurveyRecord load_record(const std::string& path) {
    try {
        return survey_record_from_json(nlohmann::json::parse(text::read_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, path + ": " + e.what());
    }
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Room environment feature analysis toolkit", "fengshui"};
    app.require_subcommand(1, 1);
    app.fallthrough(false);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Validate a sensor log and session meta into a session record");
    std::string ingest_log, ingest_meta, ingest_out;
    std::size_t ingest_min = kDefaultMinSamples;
    ingest->add_option("--log", ingest_log, "Sensor CSV")->required();
    ingest->add_option("--meta", ingest_meta, "Session meta (key = value)")->required();
    ingest->add_option("--min-samples", ingest_min, "Protocol sample target")->capture_default_str();
    ingest->add_option("--out", ingest_out, "Session record JSON");

    // survey-score
    auto* survey_cmd = app.add_subcommand("survey-score", "Score a survey record");
    std::string survey_record, survey_def, survey_out;
    survey_cmd->add_option("--record", survey_record, "Survey record JSON")->required();
    survey_cmd->add_option("--definition", survey_def, "Survey definition JSON (default: built-in placeholder)");
    survey_cmd->add_option("--out", survey_out, "Score JSON");

    // features
    auto* features = app.add_subcommand("features", "Compute the 25-feature vector of one session");
    std::string feat_session, feat_log, feat_meta, feat_out, feat_survey, feat_def, feat_append;
    PipelineFlags feat_flags;
    features->add_option("--session", feat_session, "Session record from `ingest`");
    features->add_option("--log", feat_log, "Sensor CSV (with --meta)");
    features->add_option("--meta", feat_meta, "Session meta (with --log)");
    features->add_option("--survey", feat_survey, "Survey record; adds the wellbeing score");
    features->add_option("--definition", feat_def, "Survey definition JSON");
    features->add_option("--append", feat_append, "Append the scored row to this dataset file (needs --survey)");
    features->add_option("--out", feat_out, "Feature JSON");
    feat_flags.add(features);

    // correlate
    auto* correlate = app.add_subcommand("correlate", "Pearson correlation of each feature with the score");
    std::string corr_dataset, corr_out;
    correlate->add_option("--dataset", corr_dataset, "Dataset file")->required();
    correlate->add_option("--out", corr_out, "Two-column CSV feature_name,r");

    // select
    auto* select = app.add_subcommand("select", "Threshold candidates and search all their subsets");
    std::string sel_dataset, sel_report, sel_out, sel_summary, sel_cv = "loocv";
    double sel_threshold = 0.2;
    std::optional<std::uint64_t> sel_seed;
    unsigned sel_jobs = 1;
    std::size_t sel_top = 10;
    ModelFlags sel_model;
    select->add_option("--dataset", sel_dataset, "Dataset file");
    select->add_option("--report", sel_report, "Correlation CSV (filter only, no search)");
    select->add_option("--threshold", sel_threshold, "Keep features with |r| above this")->capture_default_str();
    select->add_option("--cv", sel_cv, "loocv | kfold:<k>")->capture_default_str();
    select->add_option("--seed", sel_seed, "Random seed (required for the search)");
    select->add_option("--jobs", sel_jobs, "Worker threads")->capture_default_str();
    select->add_option("--top", sel_top, "Ranking rows to print")->capture_default_str();
    select->add_option("--out", sel_out, "Full subset ranking CSV");
    select->add_option("--summary", sel_summary, "Search summary JSON");
    sel_model.add(select);

    // train
    auto* train = app.add_subcommand("train", "Fit a classifier on the mean-split labels");
    std::string train_dataset, train_features, train_out;
    std::uint64_t train_seed = 0;
    ModelFlags train_model;
    train->add_option("--dataset", train_dataset, "Dataset file")->required();
    train->add_option("--features", train_features, "Comma-separated feature names (default: all 25)");
    train->add_option("--seed", train_seed, "Random seed")->required();
    train->add_option("--out", train_out, "Model JSON")->required();
    train_model.add(train);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Per-label precision/recall/f1 and accuracy");
    std::string eval_dataset, eval_model_file, eval_features, eval_cv, eval_out;
    std::optional<std::uint64_t> eval_seed;
    ModelFlags eval_model;
    evaluate->add_option("--dataset", eval_dataset, "Dataset file")->required();
    evaluate->add_option("--model-file", eval_model_file, "Trained model JSON");
    evaluate->add_option("--features", eval_features, "Comma-separated feature names (cross-validation)");
    evaluate->add_option("--cv", eval_cv, "loocv | kfold:<k>; cross-validates instead of applying --model-file");
    evaluate->add_option("--seed", eval_seed, "Random seed (required with --cv)");
    evaluate->add_option("--out", eval_out, "Report JSON");
    eval_model.add(evaluate);

    // synth
    auto* synth = app.add_subcommand("synth", "Write a synthetic study: sensor logs, meta files and a dataset");
    std::string synth_dir;
    std::size_t synth_rooms = 22, synth_samples = kDefaultMinSamples;
    std::vector<std::string> synth_informative;
    double synth_noise = 0.3, synth_spike = 0.0, synth_ratio = 0.618;
    std::uint64_t synth_seed = 0;
    synth->add_option("--out-dir", synth_dir, "Output directory")->required();
    synth->add_option("--rooms", synth_rooms, "Number of rooms")->capture_default_str();
    synth->add_option("--samples", synth_samples, "Samples per room")->capture_default_str();
    synth->add_option("--informative", synth_informative, "feature:weight (repeatable)");
    synth->add_option("--noise-std", synth_noise, "Score noise")->capture_default_str();
    synth->add_option("--spike-rate", synth_spike, "Per-sample, per-channel spike probability")->capture_default_str();
    synth->add_option("--best-ratio", synth_ratio, "Ratio-score peak")->capture_default_str();
    synth->add_option("--seed", synth_seed, "Random seed")->required();

    // serve
    auto* serve = app.add_subcommand("serve", "Run the session-capture HTTP service");
    std::string serve_host = "0.0.0.0", serve_dir = "fengshui-data", serve_def;
    int serve_port = 8080;
    double serve_ttl_hours = 4.0;
    PipelineFlags serve_flags;
    serve->add_option("--host", serve_host, "Bind address")->envname("FENGSHUI_HOST")->capture_default_str();
    serve->add_option("--port", serve_port, "Port")->envname("FENGSHUI_PORT")->capture_default_str();
    serve->add_option("--data-dir", serve_dir, "Data directory")->envname("FENGSHUI_DATA_DIR")->capture_default_str();
    serve->add_option("--ttl-hours", serve_ttl_hours, "Idle session expiry")->envname("FENGSHUI_TTL_HOURS")->capture_default_str();
    serve->add_option("--survey-definition", serve_def, "Survey definition JSON")->envname("FENGSHUI_SURVEY_DEFINITION");
    serve_flags.add(serve);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (ingest->parsed()) {
            auto s = load_session_inputs("", ingest_log, ingest_meta);
            std::vector<std::string> warnings;
            if (!s.log.is_complete(ingest_min)) warnings.emplace_back("UnderSampled");
            const auto& samples = s.log.samples;
            out << "session " << s.meta.session_id << ": " << samples.size() << " samples over "
                << (samples.back().timestamp_ms - samples.front().timestamp_ms) << " ms\n";
            for (const auto& w : warnings) err << "warning: " << w << " (" << samples.size() << " < " << ingest_min << ")\n";
            if (!ingest_out.empty()) write_output(ingest_out, session_record_json(s.meta, s.log, warnings).dump() + "\n");
            return kExitOk;
        }

        if (survey_cmd->parsed()) {
            const auto def = load_definition(survey_def);
            const auto record = load_record(survey_record);
            const auto violations = validate_record(record, def);
            if (!violations.empty()) {
                for (const auto& v : violations) err << survey_record << ": " << to_string(v.kind) << ": " << v.message << "\n";
                return kExitValidation;
            }
            const auto score = wellbeing_score(record, def);
            out << "wellbeing_score " << fmt("%.6f", score.value) << "\nmean_image_rating "
                << fmt("%.6f", score.mean_image_rating) << "\n";
            if (!survey_out.empty()) {
                ordered_json j{{"session_id", record.session_id},
                               {"score", score.value},
                               {"mean_image_rating", score.mean_image_rating}};
                write_output(survey_out, j.dump(2) + "\n");
            }
            return kExitOk;
        }

        if (features->parsed()) {
            const auto opts = feat_flags.options();
            const auto s = load_session_inputs(feat_session, feat_log, feat_meta);
            const auto computed = compute_session_features(s.meta, s.log, opts);
            for (const auto& w : computed.warnings) err << "warning: " << w << "\n";
            print_features(out, computed.features);

            std::optional<WellbeingScore> score;
            if (!feat_survey.empty()) {
                score = wellbeing_score(load_record(feat_survey), load_definition(feat_def));
                out << "wellbeing_score " << fmt("%.6f", score->value) << "\n";
            }
            if (!feat_out.empty()) {
                ordered_json j;
                j["format"] = "fengshui-features";
                j["format_version"] = 1;
                j["session_id"] = s.meta.session_id;
                j["features"] = to_json(computed.features);
                if (score) j["score"] = score->value;
                j["warnings"] = computed.warnings;
                j["config"] = to_json(opts);
                write_output(feat_out, j.dump(2) + "\n");
            }
            if (!feat_append.empty()) {
                if (!score) throw Error(ErrorCode::MissingField, "--append needs --survey for the score");
                DatasetRow row{s.meta.session_id, utc_timestamp(), computed.features, score->value, {}};
                if (!feat_log.empty()) row.artifacts["sensor_log"] = feat_log;
                if (!feat_meta.empty()) row.artifacts["meta"] = feat_meta;
                if (!feat_session.empty()) row.artifacts["session"] = feat_session;
                row.artifacts["survey"] = feat_survey;
                append_row(feat_append, row);
            }
            return kExitOk;
        }

        if (correlate->parsed()) {
            const auto loaded = load_dataset(corr_dataset);
            for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";
            const auto rows = to_scored_rows(loaded.rows);
            const auto report = correlate_dataset(rows);
            for (const auto& e : report.entries) {
                char buf[128];
                if (e.r) std::snprintf(buf, sizeof buf, "%-28s %+.6f\n", e.feature.c_str(), *e.r);
                else std::snprintf(buf, sizeof buf, "%-28s undefined\n", e.feature.c_str());
                out << buf;
            }
            out << "rows " << report.n_rows << "\n";
            if (!corr_out.empty()) write_output(corr_out, correlation_csv(report));
            return kExitOk;
        }

        if (select->parsed()) {
            if (sel_dataset.empty() == sel_report.empty()) {
                err << "select: exactly one of --dataset or --report is required\n";
                return kExitUsage;
            }
            CorrelationReport report;
            std::optional<LabeledDataset> dataset;
            if (!sel_report.empty()) {
                report = parse_correlation_csv(text::read_file(sel_report));
            } else {
                dataset = load_labeled(sel_dataset, err);
                report = correlate_dataset(dataset->rows);
            }
            const auto candidates = filter_candidates(report, sel_threshold);
            out << "candidates (|r| > " << text::format_double(sel_threshold) << "): " << candidates.size() << "\n";
            for (const auto& c : candidates) out << "  " << c << "\n";
            if (!dataset) return kExitOk;
            if (candidates.empty()) {
                err << "no feature passes the threshold; nothing to search\n";
                return kExitOk;
            }
            if (!sel_seed) {
                err << "select: --seed is required for the subset search\n";
                return kExitUsage;
            }
            const auto model = sel_model.spec(*sel_seed);
            const auto cv = CvSpec::parse(sel_cv);
            const unsigned jobs = sel_jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : sel_jobs;
            const auto result = exhaustive_subset_search(*dataset, candidates, model, cv, *sel_seed, jobs);
            out << "evaluated " << result.ranking.size() << " subsets (model=" << to_string(model.kind)
                << " cv=" << cv.to_string() << " seed=" << *sel_seed << ")\n";
            out << "baseline accuracy " << fmt("%.4f", baseline_accuracy(*dataset)) << "\n";
            for (std::size_t i = 0; i < std::min(sel_top, result.ranking.size()); ++i) {
                const auto& r = result.ranking[i];
                std::string joined;
                for (const auto& f : r.features) joined += (joined.empty() ? "" : ", ") + f;
                out << fmt("%4.0f", static_cast<double>(i + 1)) << "  " << fmt("%.4f", r.score) << "  " << joined << "\n";
            }
            if (!sel_out.empty()) write_output(sel_out, ranking_csv(result));
            if (!sel_summary.empty()) {
                ordered_json j;
                j["format"] = "fengshui-selection";
                j["format_version"] = 1;
                j["threshold"] = sel_threshold;
                j["candidates"] = candidates;
                j["best_subset"] = result.best_subset;
                j["best_score"] = result.best_score;
                j["baseline_accuracy"] = baseline_accuracy(*dataset);
                j["subsets_evaluated"] = result.ranking.size();
                j["model"] = to_json(model);
                j["cv"] = cv.to_string();
                j["seed"] = *sel_seed;
                write_output(sel_summary, j.dump(2) + "\n");
            }
            return kExitOk;
        }

        if (train->parsed()) {
            const auto dataset = load_labeled(train_dataset, err);
            const auto names = train_features.empty() ? all_feature_names() : split_names(train_features);
            const auto spec = train_model.spec(train_seed);
            const auto model = fit(spec, project(dataset.rows, names), dataset.labels);
            write_output(train_out, to_json(model).dump() + "\n");
            out << "trained " << to_string(spec.kind) << " on " << dataset.size() << " rows, " << names.size()
                << " features (split mean " << fmt("%.6f", dataset.split_mean) << ", seed " << train_seed << ")\n";
            return kExitOk;
        }

        if (evaluate->parsed()) {
            const auto dataset = load_labeled(eval_dataset, err);
            EvalReport report;
            if (!eval_cv.empty()) {
                if (!eval_seed) {
                    err << "evaluate: --seed is required with --cv\n";
                    return kExitUsage;
                }
                ModelSpec spec = eval_model.spec(*eval_seed);
                std::vector<std::string> names = all_feature_names();
                if (!eval_model_file.empty()) {
                    const auto trained = model_from_json(nlohmann::json::parse(text::read_file(eval_model_file)));
                    spec = trained.spec;
                    spec.seed = *eval_seed;
                    names = trained.feature_names;
                }
                if (!eval_features.empty()) names = split_names(eval_features);
                report = cross_validate(project(dataset.rows, names), dataset.labels, spec, CvSpec::parse(eval_cv), *eval_seed);
            } else {
                if (eval_model_file.empty()) {
                    err << "evaluate: need --model-file or --cv\n";
                    return kExitUsage;
                }
                const auto trained = model_from_json(nlohmann::json::parse(text::read_file(eval_model_file)));
                const auto x = project(dataset.rows, trained.feature_names);
                report.predictions = predict_all(trained, x);
                report.metrics = metrics(report.predictions, dataset.labels);
                report.model = trained.spec;
                report.seed = trained.spec.seed;
                report.feature_names = trained.feature_names;
            }
            out << render_table(report);
            out << "baseline accuracy " << fmt("%.4f", baseline_accuracy(dataset)) << "\n";
            if (!eval_out.empty()) {
                auto j = to_json(report);
                if (eval_cv.empty()) j["cv"] = "none (trained model applied to dataset)";
                write_output(eval_out, j.dump(2) + "\n");
            }
            return kExitOk;
        }

        if (synth->parsed()) {
            SynthSpec spec;
            spec.n_rooms = synth_rooms;
            spec.samples_per_room = synth_samples;
            spec.noise_std = synth_noise;
            spec.sensor_spike_rate = synth_spike;
            spec.seed = synth_seed;
            spec.ratio.best_ratio = synth_ratio;
            for (const auto& item : synth_informative) {
                const auto pos = item.rfind(':');
                const auto w = pos == std::string::npos ? std::nullopt : text::parse_double(item.substr(pos + 1));
                if (!w) {
                    err << "synth: --informative expects feature:weight, got '" << item << "'\n";
                    return kExitUsage;
                }
                spec.informative_features.emplace_back(item.substr(0, pos), *w);
            }
            const auto sessions = generate(spec);
            fs::create_directories(synth_dir);
            const std::string dataset_path = (fs::path(synth_dir) / "dataset.jsonl").string();
            if (fs::exists(dataset_path)) fs::remove(dataset_path);
            DatasetWriter writer(dataset_path);
            std::string scores = "session_id,score\n";
            for (std::size_t r = 0; r < spec.n_rooms; ++r) {
                const auto& id = sessions.metas[r].session_id;
                const auto log_path = (fs::path(synth_dir) / (id + ".csv")).string();
                const auto meta_path = (fs::path(synth_dir) / (id + ".meta")).string();
                write_output(log_path, serialize_sensor_log(sessions.logs[r]));
                write_output(meta_path, serialize_session_meta(sessions.metas[r]));
                writer.append({id, utc_timestamp(), sessions.features[r], sessions.scores[r],
                               {{"sensor_log", id + ".csv"}, {"meta", id + ".meta"}}});
                scores += id + "," + text::format_double(sessions.scores[r]) + "\n";
            }
            write_output((fs::path(synth_dir) / "scores.csv").string(), scores);
            out << "wrote " << spec.n_rooms << " sessions and " << dataset_path << " (seed " << synth_seed << ")\n";
            return kExitOk;
        }

        if (serve->parsed()) {
            ServiceConfig cfg;
            cfg.data_dir = serve_dir;
            cfg.pipeline = serve_flags.options();
            cfg.session_ttl = std::chrono::seconds(static_cast<long long>(serve_ttl_hours * 3600.0));
            cfg.survey = load_definition(serve_def);
            SessionManager manager(cfg);
            for (const auto& w : manager.recovery_warnings()) err << "warning: " << w << "\n";
            HttpService http(manager);
            out << "listening on " << serve_host << ":" << serve_port << " (data dir " << serve_dir << ")\n";
            out.flush();
            if (!http.listen(serve_host, serve_port)) {
                err << "serve: cannot bind " << serve_host << ":" << serve_port << "\n";
                return kExitValidation;
            }
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitUsage;
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace fengshui
