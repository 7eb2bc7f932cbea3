#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fengshui/error.hpp"
#include "fengshui/eval.hpp"
#include "fengshui/synth.hpp"

using namespace fengshui;

namespace {

std::vector<ScoredRow> rows_with_scores(const std::vector<double>& scores) {
    std::vector<ScoredRow> rows;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        ScoredRow r;
        r.session_id = "r" + std::to_string(i);
        r.score = scores[i];
        rows.push_back(r);
    }
    return rows;
}

LabeledDataset random_dataset(std::mt19937_64& gen, std::size_t n) {
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> score(1.0, 5.0);
    std::vector<ScoredRow> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].session_id = "r" + std::to_string(i);
        for (auto& v : rows[i].features.values) v = nd(gen);
        rows[i].score = score(gen);
        rows[i].features.values[0] += rows[i].score;
    }
    return label_by_mean(rows);
}

}  // namespace

TEST_CASE("mean-split labeling examples") {
    auto ds = label_by_mean(rows_with_scores({2, 4}));
    CHECK(ds.split_mean == 3.0);
    CHECK(ds.labels == std::vector<int>{0, 1});
    ds = label_by_mean(rows_with_scores({3, 3, 3}));
    CHECK(ds.labels == std::vector<int>{0, 0, 0});
    CHECK_THROWS_AS(label_by_mean(rows_with_scores({3})), Error);
}

TEST_CASE("labels match a direct comparison and ignore a constant shift") {
    std::mt19937_64 gen(22);
    std::uniform_real_distribution<double> u(1, 5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> s(22);
        for (auto& v : s) v = u(gen);
        const auto ds = label_by_mean(rows_with_scores(s));
        const double mean = std::accumulate(s.begin(), s.end(), 0.0) / 22.0;
        for (std::size_t i = 0; i < 22; ++i) CHECK(ds.labels[i] == (s[i] > mean ? 1 : 0));

        const double c = std::ldexp(static_cast<double>(gen() % 8), -2);
        std::vector<double> shifted(s);
        for (auto& v : shifted) v += c;
        CHECK(label_by_mean(rows_with_scores(shifted)).labels == ds.labels);
    }
}

TEST_CASE("metrics examples") {
    const std::vector<int> t{0, 1, 1, 0, 1};
    auto m = metrics(t, t);
    CHECK(m.accuracy == 1.0);
    for (const auto& l : m.per_label) {
        CHECK(l.precision == 1.0);
        CHECK(l.recall == 1.0);
        CHECK(l.f1 == 1.0);
    }

    m = metrics(std::vector<int>{1, 1}, std::vector<int>{1, 0});
    CHECK(m.per_label[1].precision == 0.5);
    CHECK(m.per_label[1].recall == 1.0);
    CHECK(m.per_label[1].f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(m.accuracy == 0.5);
    CHECK(m.per_label[0].precision == 0.0);
    CHECK(m.per_label[0].precision_degenerate);
    CHECK(m.per_label[0].recall == 0.0);
    CHECK_FALSE(m.per_label[0].recall_degenerate);

    m = metrics(std::vector<int>{0, 0, 0}, std::vector<int>{1, 0, 1});
    CHECK(m.per_label[1].precision == 0.0);
    CHECK(m.per_label[1].precision_degenerate);
    CHECK(m.per_label[1].f1 == 0.0);

    CHECK_THROWS_AS(metrics(std::vector<int>{0}, std::vector<int>{0, 1}), Error);
    CHECK_THROWS_AS(metrics(std::vector<int>{}, std::vector<int>{}), Error);
}

TEST_CASE("metric identities on random predictions") {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + gen() % 40;
        std::vector<int> p(n), t(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = static_cast<int>(gen() % 2);
            t[i] = static_cast<int>(gen() % 2);
        }
        const auto m = metrics(p, t);
        const auto& c1 = m.per_label[1].counts;
        const auto& c0 = m.per_label[0].counts;
        CHECK(c0.tp == c1.tn);
        CHECK(c0.tn == c1.tp);
        CHECK(c0.fp == c1.fn);
        CHECK(c0.fn == c1.fp);
        CHECK(m.accuracy == static_cast<double>(c1.tp + c1.tn) / static_cast<double>(n));
        CHECK((m.per_label[0].recall + m.per_label[1].recall) / 2 <= 1.0);
        for (const auto& l : m.per_label) {
            CHECK(l.precision >= 0.0);
            CHECK(l.precision <= 1.0);
            CHECK(l.recall <= 1.0);
            CHECK(l.f1 <= 1.0);
            if (l.precision == 0.0 || l.recall == 0.0) CHECK(l.f1 == 0.0);
        }
    }
}

TEST_CASE("baseline accuracy") {
    CHECK(baseline_accuracy(std::vector<int>{1, 1, 1, 0}) == 0.75);
    CHECK(baseline_accuracy(std::vector<int>{1, 0, 0, 1}) == 0.5);
    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> l(1 + gen() % 30);
        for (auto& v : l) v = static_cast<int>(gen() % 2);
        const auto ones = std::count(l.begin(), l.end(), 1);
        const auto majority = std::max<std::ptrdiff_t>(ones, static_cast<std::ptrdiff_t>(l.size()) - ones);
        CHECK(baseline_accuracy(l) == static_cast<double>(majority) / static_cast<double>(l.size()));
    }
}

TEST_CASE("cv spec parsing") {
    CHECK(CvSpec::parse("loocv").kind == CvSpec::Kind::loocv);
    const auto k5 = CvSpec::parse("kfold:5");
    CHECK(k5.kind == CvSpec::Kind::kfold);
    CHECK(k5.folds == 5);
    CHECK(k5.stratified);
    CHECK_FALSE(CvSpec::parse("kfold:3:unstratified").stratified);
    CHECK(CvSpec::parse(k5.to_string()) == k5);
    CHECK_THROWS_AS(CvSpec::parse("kfold:1"), Error);
    CHECK_THROWS_AS(CvSpec::parse("holdout"), Error);
}

TEST_CASE("a feature equal to the label gives perfect tree LOOCV") {
    std::mt19937_64 gen(3);
    auto ds = random_dataset(gen, 22);
    for (std::size_t i = 0; i < ds.size(); ++i) ds.rows[i].features.at("noise_db") = ds.labels[i];
    ModelSpec tree;
    tree.kind = ModelKind::decision_tree;
    const std::vector<std::string> names{"noise_db"};
    CHECK(loocv(ds, tree, names).metrics.accuracy == 1.0);
}

TEST_CASE("LOOCV equals an independent leave-one-out loop") {
    std::mt19937_64 gen(10);
    for (auto kind : {ModelKind::knn, ModelKind::decision_tree, ModelKind::random_forest}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto ds = random_dataset(gen, 10);
            if (std::count(ds.labels.begin(), ds.labels.end(), 1) == 0) continue;
            ModelSpec spec;
            spec.kind = kind;
            spec.forest_n_trees = 9;
            spec.seed = gen();
            const std::vector<std::string> names{"width", "height", "noise_db"};
            const auto report = loocv(ds, spec, names);

            const auto x = project(ds.rows, names);
            std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
            for (std::size_t hold = 0; hold < ds.size(); ++hold) {
                std::vector<std::size_t> keep;
                std::vector<int> y;
                for (std::size_t i = 0; i < ds.size(); ++i)
                    if (i != hold) {
                        keep.push_back(i);
                        y.push_back(ds.labels[i]);
                    }
                const auto model = fit(spec, x.select_rows(keep), y);
                const int p = model.predict(x.row(hold));
                CHECK(report.predictions[hold] == p);
                const int t = ds.labels[hold];
                (p == 1 ? (t == 1 ? tp : fp) : (t == 0 ? tn : fn)) += 1;
            }
            const auto& c = report.metrics.confusion;
            CHECK(c.tp == tp);
            CHECK(c.tn == tn);
            CHECK(c.fp == fp);
            CHECK(c.fn == fn);
            CHECK(report.metrics.accuracy == static_cast<double>(tp + tn) / 10.0);
        }
    }
}

TEST_CASE("LOOCV metrics do not depend on row order for knn and tree") {
    std::mt19937_64 gen(14);
    for (auto kind : {ModelKind::knn, ModelKind::decision_tree}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto ds = random_dataset(gen, 20);
            ModelSpec spec;
            spec.kind = kind;
            const auto a = loocv(ds, spec);
            auto rows = ds.rows;
            std::shuffle(rows.begin(), rows.end(), gen);
            const auto b = loocv(label_by_mean(rows), spec);
            CHECK(a.metrics.confusion == b.metrics.confusion);
            CHECK(a.metrics.accuracy == b.metrics.accuracy);
        }
    }
}

TEST_CASE("cross-validation preconditions") {
    const auto one_class = label_by_mean(rows_with_scores({3, 3, 3, 3}));
    CHECK_THROWS_AS(loocv(one_class, ModelSpec{}), Error);
    const auto tiny = label_by_mean(rows_with_scores({1, 5}));
    CHECK_THROWS_AS(loocv(tiny, ModelSpec{}), Error);
    std::mt19937_64 gen(2);
    const auto ds = random_dataset(gen, 6);
    const auto x = project(ds.rows, all_feature_names());
    CHECK_THROWS_AS(cross_validate(x, ds.labels, ModelSpec{}, CvSpec::parse("kfold:7"), 0), Error);
}

TEST_CASE("k-fold is stratified, reproducible and covers every row once") {
    std::mt19937_64 gen(15);
    const auto ds = random_dataset(gen, 37);
    const auto x = project(ds.rows, all_feature_names());
    const auto a = cross_validate(x, ds.labels, ModelSpec{}, CvSpec::parse("kfold:5"), 77);
    const auto b = cross_validate(x, ds.labels, ModelSpec{}, CvSpec::parse("kfold:5"), 77);
    CHECK(a.predictions == b.predictions);
    CHECK(a.predictions.size() == 37);
    CHECK(a.metrics.n == 37);
    CHECK(a.seed == 77);
}

TEST_CASE("independent labels hover around chance") {
    double total = 0;
    int runs = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SynthSpec spec;
        spec.n_rooms = 200;
        spec.samples_per_room = 20;
        spec.seed = seed;
        const auto ds = generate_dataset(spec);
        ModelSpec knn;
        const auto acc = loocv(ds, knn).metrics.accuracy;
        CHECK(acc > 0.35);
        CHECK(acc < 0.65);
        total += acc;
        ++runs;
    }
    CHECK(std::abs(total / runs - 0.5) < 0.1);
}

TEST_CASE("report serialization embeds config and seed") {
    std::mt19937_64 gen(1);
    const auto ds = random_dataset(gen, 12);
    ModelSpec spec;
    spec.seed = 5;
    const auto r = loocv(ds, spec);
    const auto j = to_json(r);
    CHECK(j.at("format") == "fengshui-eval-report");
    CHECK(j.at("seed") == 5);
    CHECK(j.at("cv") == "loocv");
    const auto table = render_table(r);
    CHECK(table.find("precision") != std::string::npos);
    CHECK(table.find("accuracy") != std::string::npos);
}
