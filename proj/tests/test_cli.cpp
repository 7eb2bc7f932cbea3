#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "fengshui/analysis.hpp"
#include "fengshui/cli.hpp"
#include "fengshui/eval.hpp"
#include "fengshui/store.hpp"
#include "fengshui/survey.hpp"
#include "fengshui/synth.hpp"
#include "fengshui/text.hpp"
#include "oracles.hpp"
#include "reference_coefficients.hpp"
#include "seeded_dataset.hpp"
#include "support.hpp"

using namespace fengshui;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string synth_dir(const testing::TempDir& dir, std::size_t rooms = 22, const std::string& seed = "4") {
    const auto path = dir.file("synth");
    const auto r = run({"synth", "--out-dir", path, "--rooms", std::to_string(rooms), "--samples", "120", "--seed", seed,
                        "--informative", "Light_Intensity_mean:1.0", "--informative", "noise_db:-0.8"});
    REQUIRE(r.code == 0);
    return path;
}

std::string write_dataset(const testing::TempDir& dir, const std::vector<ScoredRow>& rows) {
    const auto path = dir.file("seeded.jsonl");
    DatasetWriter w(path);
    for (const auto& r : rows) w.append({r.session_id, "2026-01-01T00:00:00Z", r.features, r.score, {}});
    return path;
}

}  // namespace

TEST_CASE("usage errors exit 2 with usage text") {
    auto r = run({"correlate", "--bogus-flag"});
    CHECK(r.code == kExitUsage);
    CHECK_FALSE(r.err.empty());
    r = run({});
    CHECK(r.code == kExitUsage);
    r = run({"frobnicate"});
    CHECK(r.code == kExitUsage);
    r = run({"train", "--dataset", "x.jsonl", "--out", "m.json"});
    CHECK(r.code == kExitUsage);
    r = run({"--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("select") != std::string::npos);
}

TEST_CASE("validation errors exit 1 and name the file and line") {
    testing::TempDir dir("cli");
    const auto log = dir.file("bad.csv");
    text::write_file(log, "timestamp_ms,temperature,humidity,air_pressure,light_intensity,toxic_chemical,tvoc,eco2,h2,ethanol\n"
                          "0,1,2,3,4,5,6,7,8,9\n"
                          "500,1,2,3,4,5,abc,7,8,9\n");
    const auto meta = dir.file("m.meta");
    text::write_file(meta, "session_id = a\nwidth_ft = 10\nheight_ft = 12\nis_rectangle = true\n"
                           "door_direction_deg = 0\ndesk_direction_deg = 0\nnoise_db = 40\n");
    const auto r = run({"ingest", "--log", log, "--meta", meta});
    CHECK(r.code == kExitValidation);
    CHECK(r.err.find("bad.csv") != std::string::npos);
    CHECK(r.err.find("line 3") != std::string::npos);

    const auto missing = run({"correlate", "--dataset", dir.file("nope.jsonl")});
    CHECK(missing.code == kExitValidation);
    CHECK(missing.err.find("nope.jsonl") != std::string::npos);
}

TEST_CASE("correlate output matches the oracle") {
    testing::TempDir dir("cli");
    const auto base = synth_dir(dir);
    const auto csv_path = dir.file("corr.csv");
    const auto r = run({"correlate", "--dataset", base + "/dataset.jsonl", "--out", csv_path});
    REQUIRE(r.code == 0);
    const auto report = parse_correlation_csv(text::read_file(csv_path));
    const auto rows = to_scored_rows(load_dataset(base + "/dataset.jsonl").rows);
    std::vector<double> s;
    for (const auto& row : rows) s.push_back(row.score);
    REQUIRE(report.entries.size() == 25);
    for (std::size_t f = 0; f < 25; ++f) {
        std::vector<double> col;
        for (const auto& row : rows) col.push_back(row.features.values[f]);
        CHECK(std::abs(*report.entries[f].r - testing::pairwise_pearson(col, s)) < 1e-12);
    }
}

TEST_CASE("select on a dataset seeded with the reference coefficients prints the reference set") {
    testing::TempDir dir("cli");
    const auto rows = testing::rows_with_correlations(testing::kReferenceCoefficients, 22, 8);
    const auto path = write_dataset(dir, rows);
    const auto summary = dir.file("summary.json");
    const auto r = run({"select", "--dataset", path, "--threshold", "0.2", "--seed", "1", "--jobs", "4",
                        "--summary", summary, "--out", dir.file("rank.csv")});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(text::read_file(summary));
    std::set<std::string> got;
    for (const auto& c : j.at("candidates")) got.insert(c.get<std::string>());
    std::set<std::string> want;
    for (auto name : testing::kReferenceBestSet) want.insert(std::string(feature_names()[*feature_index(name)]));
    CHECK(got == want);
    for (const auto& name : want) CHECK(r.out.find("  " + name + "\n") != std::string::npos);
    CHECK(j.at("subsets_evaluated") == 1023);
    CHECK(j.at("seed") == 1);
    CHECK(j.at("format_version") == 1);
}

TEST_CASE("select --report filters a coefficient CSV without searching") {
    testing::TempDir dir("cli");
    std::string csv = "feature_name,r\n";
    for (const auto& [name, r] : testing::kReferenceCoefficients) csv += std::string(name) + "," + text::format_double(r) + "\n";
    const auto path = dir.file("coefficients.csv");
    text::write_file(path, csv);
    const auto r = run({"select", "--report", path, "--threshold", "0.2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("candidates (|r| > 0.2): 10") != std::string::npos);
    CHECK(r.out.find("desk_direction") == std::string::npos);
}

TEST_CASE("search needs an explicit seed") {
    testing::TempDir dir("cli");
    const auto base = synth_dir(dir);
    CHECK(run({"select", "--dataset", base + "/dataset.jsonl"}).code == kExitUsage);
    CHECK(run({"evaluate", "--dataset", base + "/dataset.jsonl", "--cv", "loocv"}).code == kExitUsage);
}

TEST_CASE("train then evaluate round-trips and cross-validation matches the library") {
    testing::TempDir dir("cli");
    const auto base = synth_dir(dir, 30);
    const auto dataset = base + "/dataset.jsonl";
    const auto model = dir.file("model.json");
    auto r = run({"train", "--dataset", dataset, "--features", "Light_Intensity_mean,noise_db", "--model", "forest",
                  "--trees", "11", "--seed", "3", "--out", model});
    REQUIRE(r.code == 0);
    const auto report_path = dir.file("report.json");
    r = run({"evaluate", "--dataset", dataset, "--model-file", model, "--out", report_path});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("accuracy") != std::string::npos);

    r = run({"evaluate", "--dataset", dataset, "--features", "Light_Intensity_mean,noise_db", "--cv", "loocv",
             "--seed", "9", "--out", report_path});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(text::read_file(report_path));
    const auto ds = label_by_mean(to_scored_rows(load_dataset(dataset).rows));
    ModelSpec spec;
    spec.seed = 9;
    const std::vector<std::string> names{"Light_Intensity_mean", "noise_db"};
    const auto lib = loocv(ds, spec, names);
    CHECK(j.at("metrics").at("accuracy").get<double>() == lib.metrics.accuracy);
    CHECK(j.at("seed") == 9);
    CHECK(j.at("format_version") == 1);
}

TEST_CASE("ingest and features produce the library feature vector") {
    testing::TempDir dir("cli");
    const auto base = synth_dir(dir, 3);
    const auto record = dir.file("session.json");
    auto r = run({"ingest", "--log", base + "/synth-0001.csv", "--meta", base + "/synth-0001.meta", "--out", record});
    REQUIRE(r.code == 0);
    CHECK(r.err.find("UnderSampled") != std::string::npos);
    const auto feat = dir.file("features.json");
    r = run({"features", "--session", record, "--out", feat});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(text::read_file(feat));
    CHECK(j.at("format") == "fengshui-features");
    CHECK(j.at("warnings") == nlohmann::json::array({"UnderSampled"}));
    const auto stored = load_dataset(base + "/dataset.jsonl").rows;
    CHECK(feature_vector_from_json(j.at("features")) == stored[1].features);
}

TEST_CASE("features --append builds a dataset row with the survey score") {
    testing::TempDir dir("cli");
    const auto base = synth_dir(dir, 2);
    SurveyRecord rec;
    rec.masq_answers.assign(26, 5);
    for (int i = 0; i < 10; ++i) rec.image_responses.push_back({"quiet", 1});
    const auto rec_path = dir.file("survey.json");
    text::write_file(rec_path, to_json(rec).dump());
    const auto out = dir.file("mine.jsonl");
    auto r = run({"features", "--log", base + "/synth-0000.csv", "--meta", base + "/synth-0000.meta", "--survey", rec_path,
                  "--append", out});
    REQUIRE(r.code == 0);
    auto rows = load_dataset(out).rows;
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].score == 70.0 / 26.0);
    r = run({"features", "--log", base + "/synth-0000.csv", "--meta", base + "/synth-0000.meta", "--survey", rec_path,
             "--append", out});
    CHECK(r.code == kExitValidation);
    CHECK(load_dataset(out).rows.size() == 1);

    r = run({"survey-score", "--record", rec_path});
    CHECK(r.code == 0);
    CHECK(r.out.find("2.692308") != std::string::npos);
}

TEST_CASE("synth output is reproducible") {
    testing::TempDir a("cli"), b("cli");
    const auto pa = synth_dir(a, 5, "77");
    const auto pb = synth_dir(b, 5, "77");
    CHECK(text::read_file(pa + "/synth-0003.csv") == text::read_file(pb + "/synth-0003.csv"));
    CHECK(text::read_file(pa + "/scores.csv") == text::read_file(pb + "/scores.csv"));
}
