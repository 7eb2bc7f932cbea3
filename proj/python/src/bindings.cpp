#include <sstream>
#include <thread>

#include <json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fengshui/analysis.hpp"
#include "fengshui/cli.hpp"
#include "fengshui/error.hpp"
#include "fengshui/eval.hpp"
#include "fengshui/features.hpp"
#include "fengshui/ingest.hpp"
#include "fengshui/models.hpp"
#include "fengshui/pipeline.hpp"
#include "fengshui/store.hpp"
#include "fengshui/survey.hpp"
#include "fengshui/synth.hpp"

namespace py = pybind11;
using namespace fengshui;
using json = nlohmann::json;

namespace {

std::vector<ScoredRow> rows_from_json(const std::string& text) {
    const auto doc = json::parse(text);
    std::vector<ScoredRow> rows;
    for (const auto& item : doc) {
        ScoredRow r;
        r.session_id = item.at("session_id").get<std::string>();
        r.features = feature_vector_from_json(item.at("features"));
        r.score = item.at("score").get<double>();
        rows.push_back(std::move(r));
    }
    return rows;
}

json row_to_json(const ScoredRow& r) {
    return {{"session_id", r.session_id}, {"features", json(to_json(r.features))}, {"score", r.score}};
}

ModelSpec model_from_text(const std::string& text) {
    if (text.empty()) return ModelSpec{};
    json merged = json(to_json(ModelSpec{}));
    merged.update(json::parse(text));
    return model_spec_from_json(merged);
}

PipelineOptions options(bool despike_on, double z_threshold, double best_ratio, bool sample_std, std::size_t min_samples) {
    PipelineOptions o;
    o.despike = despike_on;
    o.z_threshold = z_threshold;
    o.ratio.best_ratio = best_ratio;
    o.std_mode = sample_std ? StdMode::sample : StdMode::population;
    o.min_samples = min_samples;
    check_pipeline_options(o);
    return o;
}

}  // namespace

PYBIND11_MODULE(_fengshui, m) {
    m.doc() = "Native core of the fengshui environmental-sensing pipeline";

    static py::exception<Error> error_type(m, "FengshuiError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object code = py::str(std::string(to_string(e.code())));
            PyErr_SetObject(error_type.ptr(), py::make_tuple(py::str(e.what()), code).ptr());
        } catch (const json::exception& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def("feature_names", [] {
        const auto& names = feature_names();
        return std::vector<std::string>(names.begin(), names.end());
    });
    m.def("channel_names", [] {
        const auto& names = channel_names();
        return std::vector<std::string>(names.begin(), names.end());
    });

    m.def("wh_ratio_score", [](double width, double length, double best_ratio) {
        return wh_ratio_score(width, length, RatioConfig{best_ratio});
    }, py::arg("width"), py::arg("length"), py::arg("best_ratio") = RatioConfig{}.best_ratio);

    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
          py::arg("x"), py::arg("y"));

    m.def("session_features",
          [](const std::string& meta_text, const std::string& csv_text, bool despike_on, double z_threshold,
             double best_ratio, bool sample_std, std::size_t min_samples) {
              const auto meta = parse_session_meta(meta_text);
              const auto log = parse_sensor_log(csv_text, meta.session_id);
              const auto result = compute_session_features(
                  meta, log, options(despike_on, z_threshold, best_ratio, sample_std, min_samples));
              json out{{"session_id", meta.session_id},
                       {"features", json(to_json(result.features))},
                       {"warnings", result.warnings}};
              return out.dump();
          },
          py::arg("meta_text"), py::arg("csv_text"), py::arg("despike") = false,
          py::arg("z_threshold") = kDefaultDespikeThreshold, py::arg("best_ratio") = RatioConfig{}.best_ratio,
          py::arg("sample_std") = false, py::arg("min_samples") = kDefaultMinSamples);

    m.def("default_survey_definition", [] { return to_json(default_survey_definition()).dump(); });

    m.def("wellbeing_score", [](const std::string& record_text, const std::string& definition_text) {
        const auto def = definition_text.empty() ? default_survey_definition()
                                                 : survey_definition_from_json(json::parse(definition_text));
        return wellbeing_score(survey_record_from_json(json::parse(record_text)), def).value;
    }, py::arg("record"), py::arg("definition") = "");

    m.def("correlate", [](const std::string& rows_text) {
        const auto report = correlate_dataset(rows_from_json(rows_text));
        std::vector<std::pair<std::string, std::optional<double>>> out;
        for (const auto& e : report.entries) out.emplace_back(e.feature, e.r);
        return out;
    }, py::arg("rows"));

    m.def("filter_candidates", [](const std::vector<std::pair<std::string, std::optional<double>>>& coefficients,
                                  double threshold) {
        CorrelationReport report;
        for (const auto& [name, r] : coefficients) report.entries.push_back({name, r});
        return filter_candidates(report, threshold);
    }, py::arg("coefficients"), py::arg("threshold") = 0.2);

    m.def("label_by_mean", [](const std::string& rows_text) {
        const auto ds = label_by_mean(rows_from_json(rows_text));
        return std::make_pair(ds.labels, ds.split_mean);
    }, py::arg("rows"));

    m.def("loocv", [](const std::string& rows_text, const std::string& model_text,
                      const std::vector<std::string>& features) {
        const auto ds = label_by_mean(rows_from_json(rows_text));
        return to_json(loocv(ds, model_from_text(model_text), features)).dump();
    }, py::arg("rows"), py::arg("model") = "", py::arg("features") = std::vector<std::string>{});

    m.def("subset_search",
          [](const std::string& rows_text, const std::vector<std::string>& candidates, const std::string& model_text,
             const std::string& cv, std::uint64_t seed, unsigned jobs) {
              const auto ds = label_by_mean(rows_from_json(rows_text));
              if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
              SubsetSearchResult result;
              {
                  py::gil_scoped_release release;
                  result = exhaustive_subset_search(ds, candidates, model_from_text(model_text), CvSpec::parse(cv),
                                                    seed, jobs);
              }
              json ranking = json::array();
              for (const auto& s : result.ranking) ranking.push_back({{"features", s.features}, {"score", s.score}});
              json out{{"best_subset", result.best_subset},
                       {"best_score", result.best_score},
                       {"baseline_accuracy", baseline_accuracy(ds)},
                       {"ranking", ranking}};
              return out.dump();
          },
          py::arg("rows"), py::arg("candidates"), py::arg("model") = "", py::arg("cv") = "loocv", py::arg("seed"),
          py::arg("jobs") = 1);

    m.def("synth_dataset",
          [](std::size_t n_rooms, const std::vector<std::pair<std::string, double>>& informative, double noise_std,
             double spike_rate, std::uint64_t seed, std::size_t samples_per_room) {
              SynthSpec spec;
              spec.n_rooms = n_rooms;
              spec.informative_features = informative;
              spec.noise_std = noise_std;
              spec.sensor_spike_rate = spike_rate;
              spec.seed = seed;
              spec.samples_per_room = samples_per_room;
              LabeledDataset ds;
              {
                  py::gil_scoped_release release;
                  ds = generate_dataset(spec);
              }
              json rows = json::array();
              for (const auto& r : ds.rows) rows.push_back(row_to_json(r));
              return rows.dump();
          },
          py::arg("n_rooms"), py::arg("informative") = std::vector<std::pair<std::string, double>>{},
          py::arg("noise_std") = 0.3, py::arg("spike_rate") = 0.0, py::arg("seed"),
          py::arg("samples_per_room") = kDefaultMinSamples);

    m.def("load_dataset", [](const std::string& path) {
        const auto loaded = load_dataset(path);
        json rows = json::array();
        for (const auto& r : to_scored_rows(loaded.rows)) rows.push_back(row_to_json(r));
        return std::make_tuple(rows.dump(), loaded.torn_tail, loaded.warnings);
    }, py::arg("path"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
            py::gil_scoped_release release;
            code = run_cli(args, out, err);
        }
        return std::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
