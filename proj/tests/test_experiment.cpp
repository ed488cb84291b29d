#include <doctest.h>

#include <nilmeval/errors.hpp>
#include <nilmeval/experiment.hpp>
#include <nilmeval/io.hpp>
#include <nilmeval/synth.hpp>

#include "helpers.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

using namespace nilmeval;

namespace {

ExperimentConfig base_config() {
    ExperimentConfig cfg;
    cfg.experiment_id = "exp1";
    cfg.algorithms.push_back(AlgorithmSpec{"co", Json::object(), ""});
    cfg.algorithms.push_back(AlgorithmSpec{"always_off", Json::object(), ""});
    cfg.appliances = {"fridge"};
    cfg.training_houses = {"h1"};
    cfg.seen_tests = {"h1"};
    cfg.unseen_tests = {"h2"};
    cfg.interval_s = 10;
    cfg.train_window_s = 1200;
    cfg.test_window_s = 1200;
    cfg.metrics = {MetricId::F1, MetricId::Mae};
    cfg.seed = 7;
    return cfg;
}

HouseSpec demo_house(const std::string& house_id, std::uint64_t seed) {
    HouseSpec h;
    h.house_id = house_id;
    h.base_load_w = 30.0;
    h.noise_sigma_w = 5.0;
    h.seed = seed;
    ApplianceSpec fridge;
    fridge.appliance_id = "fridge";
    fridge.pattern = PatternKind::Cycling;
    fridge.period_s = 600;
    fridge.duty = 0.5;
    fridge.on_power_w = 120.0;
    fridge.jitter = 0.02;
    h.appliances.push_back(fridge);
    return h;
}

void write_demo_bundle(const std::filesystem::path& data_dir, const std::string& house_id,
                       std::uint64_t seed, std::int64_t duration_s = 4800) {
    const HouseholdRecord rec = generate(demo_house(house_id, seed), 0, duration_s, 10);
    write_bundle(data_dir / house_id, rec);
}

const std::vector<double> kUnseenAcc = {0.74, 0.60, 0.77, 0.37, 0.86, 0.17, 0.06, 0.88};

} // namespace

TEST_SUITE("experiment") {

TEST_CASE("role names round-trip") {
    CHECK(to_string(Role::Seen) == "seen");
    CHECK(to_string(Role::Unseen) == "unseen");
    CHECK(role_from_string("seen") == Role::Seen);
    CHECK(role_from_string("unseen") == Role::Unseen);
    CHECK_THROWS_AS(role_from_string("holdout"), ParseError);
}

TEST_CASE("config validation rejects inconsistent setups") {
    CHECK_NOTHROW(base_config().validate());

    auto cfg = base_config();
    cfg.experiment_id.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = base_config();
    cfg.interval_s = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.train_window_s = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.test_window_s = -5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = base_config();
    cfg.algorithms.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.algorithms.push_back(AlgorithmSpec{"co", Json::object(), ""});
    CHECK_THROWS_AS(cfg.validate(), ConfigError); // duplicate label
    cfg = base_config();
    cfg.algorithms[0].id = "svm";
    CHECK_THROWS_AS(cfg.validate(), ConfigError); // unknown algorithm
    cfg = base_config();
    cfg.algorithms[0].params = Json{{"num_states", 1}};
    CHECK_THROWS_AS(cfg.validate(), ConfigError); // bad parameter

    cfg = base_config();
    cfg.appliances.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.appliances = {"fridge", "fridge"};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = base_config();
    cfg.training_houses.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.seen_tests.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.seen_tests = {"h2"};
    CHECK_THROWS_AS(cfg.validate(), ConfigError); // seen house never trained on
    cfg = base_config();
    cfg.unseen_tests = {"h1"};
    CHECK_THROWS_AS(cfg.validate(), ConfigError); // unseen house was trained on

    cfg = base_config();
    cfg.metrics.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.metrics = {MetricId::F1, MetricId::F1};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = base_config();
    cfg.thresholds["toaster"] = 10.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError); // threshold without appliance
    cfg = base_config();
    cfg.thresholds["fridge"] = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    // Empty unseen list stays legal: a run can score seen houses alone.
    cfg = base_config();
    cfg.unseen_tests.clear();
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config json round-trips") {
    ExperimentConfig cfg = base_config();
    cfg.algorithms[0].params = Json{{"num_states", 3}};
    cfg.algorithms[0].label = "co3";
    cfg.thresholds["fridge"] = 20.0;

    const Json j = cfg.to_json();
    const ExperimentConfig back = ExperimentConfig::from_json(j);
    CHECK(back.to_json() == j);
    CHECK(back.algorithms[0].label == "co3");
    CHECK(back.thresholds.at("fridge") == 20.0);
    CHECK(back.seed == 7);

    Json defaults = j;
    defaults.erase("interval_s");
    defaults.erase("seed");
    defaults.erase("unseen_tests");
    defaults.erase("thresholds");
    const ExperimentConfig d = ExperimentConfig::from_json(defaults);
    CHECK(d.interval_s == 10);
    CHECK(d.seed == 0);
    CHECK(d.unseen_tests.empty());
    CHECK(d.thresholds.empty());

    Json bad = j;
    bad.erase("experiment_id");
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ParseError);
    bad = j;
    bad["algorithms"] = "co";
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ParseError);
    bad = j;
    bad["metrics"] = Json::array({"f-score"});
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);
    bad = j;
    bad["train_window_s"] = 0;
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);
}

TEST_CASE("score csv round-trips and rejects malformed input") {
    testutil::TempDir dir("scores");
    const auto path = dir.path() / "scores.csv";

    std::vector<ScoreRow> rows;
    rows.push_back(ScoreRow{"co", "fridge", "ACCURACY", "h1", "seen", 0.98});
    for (std::size_t i = 0; i < kUnseenAcc.size(); ++i) {
        rows.push_back(ScoreRow{"co", "fridge", "ACCURACY", "h" + std::to_string(i + 2), "unseen",
                                kUnseenAcc[i]});
    }
    write_score_csv(path, rows);

    const auto back = load_score_csv(path);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].algorithm == rows[i].algorithm);
        CHECK(back[i].appliance == rows[i].appliance);
        CHECK(back[i].metric == rows[i].metric);
        CHECK(back[i].house_id == rows[i].house_id);
        CHECK(back[i].role == rows[i].role);
        CHECK(back[i].value == rows[i].value);
    }

    CHECK_THROWS_AS(load_score_csv(dir.path() / "absent.csv"), IoError);

    const auto bad = dir.path() / "bad.csv";
    testutil::write_text(bad, "alg,app,metric,house,role,value\n");
    CHECK_THROWS_AS(load_score_csv(bad), ParseError); // wrong header

    testutil::write_text(bad, "algorithm,appliance,metric,house_id,role,value\n");
    CHECK_THROWS_AS(load_score_csv(bad), EmptyInputError); // header only

    testutil::write_text(bad, "algorithm,appliance,metric,house_id,role,value\nco,fridge,F1,h1,seen\n");
    CHECK_THROWS_AS(load_score_csv(bad), ParseError); // five columns

    testutil::write_text(bad,
                         "algorithm,appliance,metric,house_id,role,value\nco,fridge,F9,h1,seen,0.5\n");
    CHECK_THROWS_AS(load_score_csv(bad), ParseError); // unknown metric

    testutil::write_text(bad,
                         "algorithm,appliance,metric,house_id,role,value\nco,fridge,F1,h1,holdout,0.5\n");
    CHECK_THROWS_AS(load_score_csv(bad), ParseError); // unknown role

    testutil::write_text(bad,
                         "algorithm,appliance,metric,house_id,role,value\nco,fridge,F1,h1,seen,nan\n");
    CHECK_THROWS_AS(load_score_csv(bad), ParseError); // non-finite value
}

TEST_CASE("reports built from score rows match direct construction") {
    std::vector<ScoreRow> rows;
    rows.push_back(ScoreRow{"co", "fridge", "ACCURACY", "h1", "seen", 0.98});
    std::vector<UnseenScore> unseen;
    for (std::size_t i = 0; i < kUnseenAcc.size(); ++i) {
        const std::string house = "h" + std::to_string(i + 2);
        rows.push_back(ScoreRow{"co", "fridge", "ACCURACY", house, "unseen", kUnseenAcc[i]});
        unseen.push_back(UnseenScore{house, kUnseenAcc[i], std::nullopt, false});
    }

    const auto reports = reports_from_scores(rows);
    REQUIRE(reports.size() == 1);
    const TransferReport& r = reports[0];
    const TransferReport direct = make_transfer_report(
        "co", "fridge", MetricId::Accuracy, SeenScore{"h1", 0.98, false}, unseen,
        GeneralisationRatio{1, 8});
    CHECK(r.to_json() == direct.to_json());
    CHECK(r.gr.to_string() == "1:8");
    CHECK(*r.auh_or_euh == doctest::Approx(0.55625).epsilon(1e-12));
    CHECK(format_fixed2(*r.mgl_from_rounded_pct) == "42.86");
}

TEST_CASE("score grouping is keyed by algorithm, appliance and metric") {
    // Metric spellings are normalised, so f1 and F1 land in one group.
    std::vector<ScoreRow> rows = {
        {"b_alg", "fridge", "MAE", "h1", "seen", 20.0},
        {"b_alg", "fridge", "MAE", "h2", "unseen", 30.0},
        {"a_alg", "fridge", "f1", "h1", "seen", 0.9},
        {"a_alg", "fridge", "F1", "h2", "unseen", 0.6},
    };
    const auto reports = reports_from_scores(rows);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].algorithm_id == "a_alg");
    CHECK(reports[0].metric == MetricId::F1);
    CHECK(reports[1].algorithm_id == "b_alg");
    CHECK(reports[1].metric == MetricId::Mae);

    // Several seen baselines yield one report each, ordered by house id.
    std::vector<ScoreRow> multi = {
        {"co", "fridge", "F1", "h2", "seen", 0.8},
        {"co", "fridge", "F1", "h1", "seen", 0.9},
        {"co", "fridge", "F1", "h3", "unseen", 0.6},
    };
    const auto per_seen = reports_from_scores(multi);
    REQUIRE(per_seen.size() == 2);
    CHECK(per_seen[0].seen.house_id == "h1");
    CHECK(per_seen[1].seen.house_id == "h2");
    CHECK(per_seen[0].gr.to_string() == "2:1");
    CHECK(per_seen[1].gr.to_string() == "2:1");

    std::vector<ScoreRow> dup = {
        {"co", "fridge", "F1", "h1", "seen", 0.9},
        {"co", "fridge", "F1", "h1", "seen", 0.8},
    };
    CHECK_THROWS_AS(reports_from_scores(dup), DomainError);

    std::vector<ScoreRow> orphan = {
        {"co", "fridge", "F1", "h2", "unseen", 0.6},
    };
    CHECK_THROWS_AS(reports_from_scores(orphan), DomainError);

    CHECK_THROWS_AS(reports_from_scores(std::vector<ScoreRow>{}), EmptyInputError);
}

TEST_CASE("an experiment runs end to end over bundled houses") {
    testutil::TempDir dir("exp");
    const auto data = dir.path() / "data";
    write_demo_bundle(data, "h1", 41);
    write_demo_bundle(data, "h2", 42);

    const ExperimentConfig cfg = base_config();
    const ExperimentRun run = run_experiment(cfg, data);

    // algorithm-major, seen before unseen.
    REQUIRE(run.evaluations.size() == 4);
    CHECK(run.evaluations[0].algorithm_label == "co");
    CHECK(run.evaluations[0].house_id == "h1");
    CHECK(run.evaluations[0].role == Role::Seen);
    CHECK(run.evaluations[1].algorithm_label == "co");
    CHECK(run.evaluations[1].house_id == "h2");
    CHECK(run.evaluations[1].role == Role::Unseen);
    CHECK(run.evaluations[2].algorithm_label == "always_off");
    CHECK(run.evaluations[3].algorithm_label == "always_off");
    for (const auto& e : run.evaluations) {
        REQUIRE(e.metrics.size() == 2);
        CHECK(e.metrics[0].id == MetricId::F1);
        CHECK(e.metrics[1].id == MetricId::Mae);
        const auto total = e.confusion.tp + e.confusion.fp + e.confusion.tn + e.confusion.fn;
        CHECK(total == 120); // 1200 s test window at 10 s
    }

    // One report per algorithm, appliance, metric and seen house.
    REQUIRE(run.reports.size() == 4);
    CHECK(run.reports[0].algorithm_id == "co");
    CHECK(run.reports[0].metric == MetricId::F1);
    CHECK(run.reports[1].algorithm_id == "co");
    CHECK(run.reports[1].metric == MetricId::Mae);
    CHECK(run.reports[2].algorithm_id == "always_off");
    for (const auto& r : run.reports) {
        CHECK(r.gr.to_string() == "1:1");
        CHECK(r.seen.house_id == "h1");
        REQUIRE(r.unseen.size() == 1);
        CHECK(r.unseen[0].house_id == "h2");
    }

    // The fridge cycles all day, so a trained model beats the trivial one.
    CHECK(run.reports[0].seen.value > run.reports[2].seen.value);

    // Windows land in provenance; seen tests start right after training.
    const Json& windows = run.provenance.at("windows");
    REQUIRE(windows.size() == 3);
    CHECK(windows[0].at("role") == "training");
    CHECK(windows[0].at("from") == 0);
    CHECK(windows[0].at("to") == 1200);
    CHECK(windows[1].at("role") == "seen_test");
    CHECK(windows[1].at("from") == 1200);
    CHECK(windows[1].at("to") == 2400);
    CHECK(windows[2].at("role") == "unseen_test");
    CHECK(windows[2].at("from") == 0);
    CHECK(windows[2].at("to") == 1200);

    // Re-running the same config over the same data is byte-identical.
    const ExperimentRun rerun = run_experiment(cfg, data);
    CHECK(run.to_json().dump() == rerun.to_json().dump());

    // Whole-run serialisation round-trips.
    const Json j = run.to_json();
    CHECK(ExperimentRun::from_json(j).to_json() == j);

    // Flat rows rebuild the same report values.
    const auto rows = score_rows_from_run(run);
    CHECK(rows.size() == 8);
    const auto rebuilt = reports_from_scores(rows);
    REQUIRE(rebuilt.size() == run.reports.size());
    for (const auto& original : run.reports) {
        const auto match = std::find_if(rebuilt.begin(), rebuilt.end(), [&](const TransferReport& r) {
            return r.algorithm_id == original.algorithm_id && r.metric == original.metric;
        });
        REQUIRE(match != rebuilt.end());
        CHECK(match->seen.value == original.seen.value);
        CHECK(match->unseen[0].value == original.unseen[0].value);
        if (original.mgl_pct) {
            CHECK(*match->mgl_pct == doctest::Approx(*original.mgl_pct).epsilon(1e-12));
        }
    }

    const std::string table = render_run_table(run);
    CHECK(table.find("experiment exp1") != std::string::npos);
    CHECK(table.find("seen:unseen 1:1") != std::string::npos);
    CHECK(table.find("appliance fridge") != std::string::npos);
    CHECK(table.find("F1_seen") != std::string::npos);
    CHECK(table.find("AUH(F1)") != std::string::npos);
    CHECK(table.find("EUH(MAE)") != std::string::npos);
    CHECK(table.find("MGL%(MAE)") != std::string::npos);
    CHECK(table.find("always_off") != std::string::npos);
}

TEST_CASE("experiments with several seen houses report each baseline") {
    testutil::TempDir dir("exp-multi");
    const auto data = dir.path() / "data";
    write_demo_bundle(data, "h1", 41);
    write_demo_bundle(data, "h2", 42);
    write_demo_bundle(data, "h3", 43);

    ExperimentConfig cfg = base_config();
    cfg.algorithms.pop_back(); // keep co only
    cfg.training_houses = {"h1", "h2"};
    cfg.seen_tests = {"h1", "h2"};
    cfg.unseen_tests = {"h3"};
    const ExperimentRun run = run_experiment(cfg, data);

    REQUIRE(run.reports.size() == 4); // 2 metrics x 2 seen baselines
    CHECK(run.reports[0].seen.house_id == "h1");
    CHECK(run.reports[1].seen.house_id == "h2");
    CHECK(run.reports[0].metric == MetricId::F1);
    for (const auto& r : run.reports) {
        CHECK(r.gr.to_string() == "2:1");
    }
    const std::string table = render_run_table(run);
    CHECK(table.find("co [h1]") != std::string::npos);
    CHECK(table.find("co [h2]") != std::string::npos);
}

TEST_CASE("experiments without unseen houses score baselines only") {
    testutil::TempDir dir("exp-seen-only");
    const auto data = dir.path() / "data";
    write_demo_bundle(data, "h1", 41);

    ExperimentConfig cfg = base_config();
    cfg.unseen_tests.clear();
    const ExperimentRun run = run_experiment(cfg, data);

    CHECK(run.evaluations.size() == 2);
    REQUIRE(run.reports.size() == 4);
    for (const auto& r : run.reports) {
        CHECK(r.gr.to_string() == "1:0");
        CHECK(r.unseen.empty());
        CHECK_FALSE(r.auh_or_euh.has_value());
        CHECK_FALSE(r.mgl_pct.has_value());
        CHECK_FALSE(r.mgl_from_rounded_pct.has_value());
    }
}

TEST_CASE("experiment data errors carry their cause") {
    testutil::TempDir dir("exp-errors");
    const auto data = dir.path() / "data";
    write_demo_bundle(data, "h1", 41);
    write_demo_bundle(data, "h2", 42);

    // Windows longer than the recorded data.
    ExperimentConfig cfg = base_config();
    cfg.test_window_s = 4000;
    CHECK_THROWS_AS(run_experiment(cfg, data), DomainError);
    cfg = base_config();
    cfg.train_window_s = 6000;
    CHECK_THROWS_AS(run_experiment(cfg, data), DomainError);

    // House directory that does not exist.
    cfg = base_config();
    cfg.unseen_tests = {"h9"};
    CHECK_THROWS_AS(run_experiment(cfg, data), IoError);

    // Directory name disagreeing with the manifest inside it.
    const HouseholdRecord rec = generate(demo_house("h1", 5), 0, 4800, 10);
    write_bundle(data / "alias", rec);
    cfg = base_config();
    cfg.training_houses = {"alias"};
    cfg.seen_tests = {"alias"};
    cfg.unseen_tests.clear();
    CHECK_THROWS_AS(run_experiment(cfg, data), DomainError);

    // Appliance missing from a referenced house.
    cfg = base_config();
    cfg.appliances = {"kettle"};
    CHECK_THROWS_AS(run_experiment(cfg, data), ConfigError);
}

} // TEST_SUITE
