#include "nilmeval/experiment.hpp"

#include "nilmeval/disagg.hpp"
#include "nilmeval/errors.hpp"
#include "nilmeval/io.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <tuple>
#include <utility>

namespace nilmeval {

namespace {

std::string effective_label(const AlgorithmSpec& spec) {
    return spec.label.empty() ? spec.id : spec.label;
}

void check_unique(std::span<const std::string> values, const char* what) {
    std::set<std::string> seen;
    for (const auto& v : values) {
        if (v.empty()) {
            throw ConfigError(std::string(what) + " entries must be non-empty");
        }
        if (!seen.insert(v).second) {
            throw ConfigError(std::string("duplicate ") + what + " '" + v + "'");
        }
    }
}

std::vector<std::string> parse_string_array(const Json& j, const char* key, const std::string& ctx,
                                            bool required) {
    if (!j.contains(key)) {
        if (required) throw ParseError(ctx + ": missing field '" + key + "'");
        return {};
    }
    const Json& v = j.at(key);
    if (!v.is_array()) {
        throw ParseError(ctx + ": field '" + key + "' must be an array");
    }
    std::vector<std::string> out;
    for (const Json& e : v) {
        if (!e.is_string()) {
            throw ParseError(ctx + ": field '" + key + "' must hold strings");
        }
        out.push_back(e.get<std::string>());
    }
    return out;
}

const char* kScoreHeader = "algorithm,appliance,metric,house_id,role,value";

} // namespace

std::string_view to_string(Role role) {
    return role == Role::Seen ? "seen" : "unseen";
}

Role role_from_string(std::string_view name) {
    if (name == "seen") return Role::Seen;
    if (name == "unseen") return Role::Unseen;
    throw ParseError("unknown role '" + std::string(name) + "' (expected seen or unseen)");
}

void ExperimentConfig::validate() const {
    if (experiment_id.empty()) {
        throw ConfigError("experiment_id must be non-empty");
    }
    if (interval_s <= 0) throw ConfigError("interval_s must be positive");
    if (train_window_s <= 0) throw ConfigError("train_window_s must be positive");
    if (test_window_s <= 0) throw ConfigError("test_window_s must be positive");

    if (algorithms.empty()) {
        throw ConfigError("at least one algorithm required");
    }
    std::set<std::string> labels;
    for (const auto& a : algorithms) {
        if (a.id.empty()) throw ConfigError("algorithm id must be non-empty");
        if (!labels.insert(effective_label(a)).second) {
            throw ConfigError("duplicate algorithm label '" + effective_label(a) + "'");
        }
        make_disaggregator(a.id, a.params); // validates the id and its params
    }

    if (appliances.empty()) throw ConfigError("at least one appliance required");
    check_unique(appliances, "appliance");
    if (training_houses.empty()) throw ConfigError("at least one training house required");
    check_unique(training_houses, "training house");
    if (seen_tests.empty()) throw ConfigError("at least one seen test house required");
    check_unique(seen_tests, "seen test house");
    check_unique(unseen_tests, "unseen test house");
    if (metrics.empty()) throw ConfigError("at least one metric required");
    std::set<MetricId> metric_set(metrics.begin(), metrics.end());
    if (metric_set.size() != metrics.size()) throw ConfigError("duplicate metric");

    const std::set<std::string> training(training_houses.begin(), training_houses.end());
    for (const auto& h : seen_tests) {
        if (!training.contains(h)) {
            throw ConfigError("seen test house '" + h + "' is not a training house");
        }
    }
    for (const auto& h : unseen_tests) {
        if (training.contains(h)) {
            throw ConfigError("unseen test house '" + h + "' is also a training house");
        }
    }

    const std::set<std::string> appliance_set(appliances.begin(), appliances.end());
    for (const auto& [appliance, threshold] : thresholds) {
        if (!appliance_set.contains(appliance)) {
            throw ConfigError("threshold for unknown appliance '" + appliance + "'");
        }
        if (!(threshold > 0.0) || !std::isfinite(threshold)) {
            throw ConfigError("threshold for '" + appliance + "' must be positive");
        }
    }
}

Json ExperimentConfig::to_json() const {
    Json j;
    j["experiment_id"] = experiment_id;
    j["interval_s"] = interval_s;
    j["train_window_s"] = train_window_s;
    j["test_window_s"] = test_window_s;
    j["seed"] = seed;
    j["algorithms"] = Json::array();
    for (const auto& a : algorithms) {
        Json e;
        e["id"] = a.id;
        e["label"] = effective_label(a);
        e["params"] = a.params.is_null() ? Json::object() : a.params;
        j["algorithms"].push_back(std::move(e));
    }
    j["appliances"] = appliances;
    j["training_houses"] = training_houses;
    j["seen_tests"] = seen_tests;
    j["unseen_tests"] = unseen_tests;
    j["metrics"] = Json::array();
    for (MetricId m : metrics) j["metrics"].push_back(std::string(to_string(m)));
    j["thresholds"] = Json::object();
    for (const auto& [appliance, threshold] : thresholds) j["thresholds"][appliance] = threshold;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
    const std::string ctx = "experiment config";
    ExperimentConfig cfg;
    cfg.experiment_id = jsonutil::require_string(j, "experiment_id", ctx);
    cfg.interval_s = j.contains("interval_s") ? jsonutil::require_int(j, "interval_s", ctx) : 10;
    cfg.train_window_s = jsonutil::require_int(j, "train_window_s", ctx);
    cfg.test_window_s = jsonutil::require_int(j, "test_window_s", ctx);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) throw ParseError(ctx + ": field 'seed' must be an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }

    const Json& algorithms = jsonutil::require(j, "algorithms", ctx);
    if (!algorithms.is_array()) throw ParseError(ctx + ": field 'algorithms' must be an array");
    for (const Json& e : algorithms) {
        AlgorithmSpec spec;
        spec.id = jsonutil::require_string(e, "id", ctx);
        spec.label = jsonutil::string_or(e, "label", spec.id, ctx);
        if (e.contains("params")) {
            if (!e["params"].is_object()) throw ParseError(ctx + ": algorithm 'params' must be an object");
            spec.params = e["params"];
        }
        cfg.algorithms.push_back(std::move(spec));
    }

    cfg.appliances = parse_string_array(j, "appliances", ctx, true);
    cfg.training_houses = parse_string_array(j, "training_houses", ctx, true);
    cfg.seen_tests = parse_string_array(j, "seen_tests", ctx, true);
    cfg.unseen_tests = parse_string_array(j, "unseen_tests", ctx, false);
    for (const auto& name : parse_string_array(j, "metrics", ctx, true)) {
        cfg.metrics.push_back(metric_from_string(name));
    }
    if (j.contains("thresholds")) {
        const Json& t = j.at("thresholds");
        if (!t.is_object()) throw ParseError(ctx + ": field 'thresholds' must be an object");
        for (const auto& item : t.items()) {
            if (!item.value().is_number()) {
                throw ParseError(ctx + ": threshold for '" + item.key() + "' must be a number");
            }
            cfg.thresholds[item.key()] = item.value().get<double>();
        }
    }
    cfg.validate();
    return cfg;
}

namespace {

HouseholdRecord slice_window(const HouseholdRecord& record, std::int64_t from, std::int64_t to,
                             const char* purpose) {
    if (record.aggregate.start() > from || record.aggregate.end_time() < to) {
        throw DomainError("house '" + record.house_id + "' covers [" +
                          std::to_string(record.aggregate.start()) + ", " +
                          std::to_string(record.aggregate.end_time()) + ") but its " + purpose +
                          " window needs [" + std::to_string(from) + ", " + std::to_string(to) + ")");
    }
    return record.slice(from, to);
}

struct EvaluationKey {
    std::size_t algorithm;
    std::size_t appliance;
    Role role;
    std::string house_id;

    bool operator<(const EvaluationKey& other) const {
        return std::tie(algorithm, appliance, role, house_id) <
               std::tie(other.algorithm, other.appliance, other.role, other.house_id);
    }
};

} // namespace

ExperimentRun run_experiment(const ExperimentConfig& config, const std::filesystem::path& data_dir) {
    config.validate();

    std::map<std::string, HouseholdRecord> bundles;
    const auto load = [&](const std::string& house_id) {
        if (bundles.find(house_id) != bundles.end()) return;
        HouseholdRecord record = load_bundle(data_dir / house_id, config.interval_s, config.thresholds);
        if (record.house_id != house_id) {
            throw DomainError("bundle " + (data_dir / house_id).string() + " declares house_id '" +
                              record.house_id + "'; expected '" + house_id + "'");
        }
        for (const auto& appliance : config.appliances) {
            if (record.find_appliance(appliance) == nullptr) {
                throw ConfigError("house '" + house_id + "' has no appliance '" + appliance + "'");
            }
        }
        bundles.emplace(house_id, std::move(record));
    };
    for (const auto& h : config.training_houses) load(h);
    for (const auto& h : config.unseen_tests) load(h);

    // Window carving. Seen houses are tested right after their training
    // window; unseen houses are tested from the start of their data.
    Json windows = Json::array();
    std::vector<HouseholdRecord> training;
    training.reserve(config.training_houses.size());
    for (const auto& h : config.training_houses) {
        const auto& record = bundles.at(h);
        const std::int64_t s0 = record.aggregate.start();
        training.push_back(slice_window(record, s0, s0 + config.train_window_s, "training"));
        windows.push_back(Json{{"house_id", h},
                               {"role", "training"},
                               {"from", s0},
                               {"to", s0 + config.train_window_s}});
    }
    std::map<std::string, HouseholdRecord> tests;
    for (const auto& h : config.seen_tests) {
        const auto& record = bundles.at(h);
        const std::int64_t from = record.aggregate.start() + config.train_window_s;
        tests.emplace(h, slice_window(record, from, from + config.test_window_s, "seen test"));
        windows.push_back(Json{{"house_id", h},
                               {"role", "seen_test"},
                               {"from", from},
                               {"to", from + config.test_window_s}});
    }
    for (const auto& h : config.unseen_tests) {
        const auto& record = bundles.at(h);
        const std::int64_t s0 = record.aggregate.start();
        tests.emplace(h, slice_window(record, s0, s0 + config.test_window_s, "unseen test"));
        windows.push_back(Json{{"house_id", h},
                               {"role", "unseen_test"},
                               {"from", s0},
                               {"to", s0 + config.test_window_s}});
    }

    std::vector<std::unique_ptr<Disaggregator>> models;
    for (const auto& spec : config.algorithms) {
        auto model = make_disaggregator(spec.id, spec.params);
        model->train(training, config.appliances);
        models.push_back(std::move(model));
    }

    std::map<std::string, std::size_t> appliance_index;
    for (std::size_t i = 0; i < config.appliances.size(); ++i) appliance_index[config.appliances[i]] = i;

    std::vector<std::pair<EvaluationKey, EvaluationResult>> keyed;
    for (std::size_t ai = 0; ai < config.algorithms.size(); ++ai) {
        const std::string label = effective_label(config.algorithms[ai]);
        const auto evaluate_house = [&](const std::string& house_id, Role role) {
            const HouseholdRecord& record = tests.at(house_id);
            const DisaggregationOutput output = models[ai]->disaggregate(record.aggregate);
            for (const auto& appliance : config.appliances) {
                const ApplianceTrace* trace = record.find_appliance(appliance);
                const PowerSeries* estimate = output.find(appliance);
                EvaluationResult result;
                result.algorithm_label = label;
                result.appliance_id = appliance;
                result.house_id = house_id;
                result.role = role;
                const auto predicted = derive_states(*estimate, trace->on_threshold);
                const auto actual = derive_states(*trace);
                result.confusion = confusion(predicted, actual);
                for (MetricId m : config.metrics) {
                    result.metrics.push_back(kind_of(m) == MetricKind::Classification
                                                 ? classification_metric(m, result.confusion)
                                                 : regression_metric(m, *estimate, trace->series));
                }
                keyed.emplace_back(EvaluationKey{ai, appliance_index.at(appliance), role, house_id},
                                   std::move(result));
            }
        };
        for (const auto& h : config.seen_tests) evaluate_house(h, Role::Seen);
        for (const auto& h : config.unseen_tests) evaluate_house(h, Role::Unseen);
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    ExperimentRun run;
    run.config = config;
    for (auto& [key, result] : keyed) run.evaluations.push_back(std::move(result));

    // One transfer report per (algorithm, appliance, metric, seen house):
    // losses are only ever formed against a single seen baseline.
    const auto find_metric = [&](const EvaluationResult& r, MetricId m) -> const MetricValue& {
        for (const auto& v : r.metrics) {
            if (v.id == m) return v;
        }
        throw StateError("metric missing from evaluation row");
    };
    const GeneralisationRatio gr{config.seen_tests.size(), config.unseen_tests.size()};
    for (const auto& spec : config.algorithms) {
        const std::string label = effective_label(spec);
        for (const auto& appliance : config.appliances) {
            for (MetricId m : config.metrics) {
                std::vector<const EvaluationResult*> seen_rows;
                std::vector<UnseenScore> unseen_scores;
                for (const auto& r : run.evaluations) {
                    if (r.algorithm_label != label || r.appliance_id != appliance) continue;
                    if (r.role == Role::Seen) {
                        seen_rows.push_back(&r);
                    } else {
                        const MetricValue& v = find_metric(r, m);
                        unseen_scores.push_back(UnseenScore{r.house_id, v.value, std::nullopt, v.degenerate});
                    }
                }
                for (const EvaluationResult* row : seen_rows) {
                    const MetricValue& v = find_metric(*row, m);
                    run.reports.push_back(make_transfer_report(
                        label, appliance, m, SeenScore{row->house_id, v.value, v.degenerate},
                        unseen_scores, gr));
                }
            }
        }
    }

    Json provenance;
    provenance["tool"] = std::string(kToolName);
    provenance["version"] = std::string(kToolVersion);
    provenance["seed"] = config.seed;
    provenance["interval_s"] = config.interval_s;
    provenance["windows"] = std::move(windows);
    provenance["note"] = "deterministic single-threaded evaluation; output depends only on inputs";
    run.provenance = std::move(provenance);
    return run;
}

Json ExperimentRun::to_json() const {
    Json j;
    j["config"] = config.to_json();
    j["provenance"] = provenance;
    j["evaluations"] = Json::array();
    for (const auto& r : evaluations) {
        Json e;
        e["algorithm"] = r.algorithm_label;
        e["appliance"] = r.appliance_id;
        e["house_id"] = r.house_id;
        e["role"] = std::string(to_string(r.role));
        e["confusion"] = Json{{"tp", r.confusion.tp}, {"fp", r.confusion.fp},
                              {"tn", r.confusion.tn}, {"fn", r.confusion.fn}};
        e["metrics"] = Json::array();
        for (const auto& v : r.metrics) {
            e["metrics"].push_back(Json{{"metric", std::string(to_string(v.id))},
                                        {"value", v.value},
                                        {"degenerate", v.degenerate}});
        }
        j["evaluations"].push_back(std::move(e));
    }
    j["reports"] = Json::array();
    for (const auto& report : reports) j["reports"].push_back(report.to_json());
    return j;
}

ExperimentRun ExperimentRun::from_json(const Json& j) {
    const std::string ctx = "experiment run";
    ExperimentRun run;
    run.config = ExperimentConfig::from_json(jsonutil::require(j, "config", ctx));
    run.provenance = j.contains("provenance") ? j.at("provenance") : Json::object();
    if (!jsonutil::require(j, "evaluations", ctx).is_array() ||
        !jsonutil::require(j, "reports", ctx).is_array()) {
        throw ParseError(ctx + ": 'evaluations' and 'reports' must be arrays");
    }
    for (const Json& e : j.at("evaluations")) {
        EvaluationResult r;
        r.algorithm_label = jsonutil::require_string(e, "algorithm", ctx);
        r.appliance_id = jsonutil::require_string(e, "appliance", ctx);
        r.house_id = jsonutil::require_string(e, "house_id", ctx);
        r.role = role_from_string(jsonutil::require_string(e, "role", ctx));
        const Json& c = jsonutil::require(e, "confusion", ctx);
        r.confusion.tp = static_cast<std::uint64_t>(jsonutil::require_int(c, "tp", ctx));
        r.confusion.fp = static_cast<std::uint64_t>(jsonutil::require_int(c, "fp", ctx));
        r.confusion.tn = static_cast<std::uint64_t>(jsonutil::require_int(c, "tn", ctx));
        r.confusion.fn = static_cast<std::uint64_t>(jsonutil::require_int(c, "fn", ctx));
        for (const Json& v : jsonutil::require(e, "metrics", ctx)) {
            MetricValue m;
            m.id = metric_from_string(jsonutil::require_string(v, "metric", ctx));
            m.value = jsonutil::require_number(v, "value", ctx);
            m.degenerate = v.value("degenerate", false);
            r.metrics.push_back(m);
        }
        run.evaluations.push_back(std::move(r));
    }
    for (const Json& e : j.at("reports")) {
        run.reports.push_back(TransferReport::from_json(e));
    }
    return run;
}

namespace {

std::string align_rows(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += "  ";
            out += row[c];
            if (c + 1 < row.size()) out.append(widths[c] - row[c].size(), ' ');
        }
        out += '\n';
    }
    return out;
}

std::string mgl_cell(const TransferReport& r) {
    if (!r.mgl_from_rounded_pct) return "-";
    std::string cell = format_fixed2(*r.mgl_from_rounded_pct);
    if (*r.mgl_from_rounded_pct < 0.0 && cell != "0.00") cell += " (gain)";
    return cell;
}

} // namespace

std::string render_run_table(const ExperimentRun& run) {
    const ExperimentConfig& config = run.config;
    std::map<std::tuple<std::string, std::string, MetricId, std::string>, const TransferReport*> index;
    for (const auto& r : run.reports) {
        index[{r.algorithm_id, r.appliance_id, r.metric, r.seen.house_id}] = &r;
    }

    std::string out = "experiment " + config.experiment_id + "  (" + std::string(kToolName) + " " +
                      std::string(kToolVersion) + ")\n";
    const GeneralisationRatio gr{config.seen_tests.size(), config.unseen_tests.size()};
    out += "seen:unseen " + gr.to_string() + "\n";

    for (const auto& appliance : config.appliances) {
        out += "\nappliance " + appliance + "\n";
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> header{"algorithm"};
        for (MetricId m : config.metrics) {
            const std::string name(to_string(m));
            header.push_back(name + "_seen");
            header.push_back(kind_of(m) == MetricKind::Classification ? "AUH(" + name + ")"
                                                                      : "EUH(" + name + ")");
            header.push_back("MGL%(" + name + ")");
        }
        rows.push_back(std::move(header));
        for (const auto& spec : config.algorithms) {
            const std::string label = effective_label(spec);
            for (const auto& seen_house : config.seen_tests) {
                std::vector<std::string> row;
                row.push_back(config.seen_tests.size() > 1 ? label + " [" + seen_house + "]" : label);
                for (MetricId m : config.metrics) {
                    const auto it = index.find({label, appliance, m, seen_house});
                    if (it == index.end()) {
                        row.insert(row.end(), {"-", "-", "-"});
                        continue;
                    }
                    const TransferReport& r = *it->second;
                    row.push_back(format_fixed2(r.seen.value));
                    row.push_back(r.auh_or_euh ? format_fixed2(*r.auh_or_euh) : "-");
                    row.push_back(mgl_cell(r));
                }
                rows.push_back(std::move(row));
            }
        }
        out += align_rows(rows);
    }
    return out;
}

std::vector<ScoreRow> load_score_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<ScoreRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() == 1 && fields[0].empty()) continue; // blank line
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (!header_seen) {
            std::string joined;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (i > 0) joined += ',';
                joined += fields[i];
            }
            if (joined != kScoreHeader) {
                throw ParseError(where + ": expected header '" + kScoreHeader + "'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 6) {
            throw ParseError(where + ": expected 6 columns, got " + std::to_string(fields.size()));
        }
        ScoreRow row;
        row.algorithm = fields[0];
        row.appliance = fields[1];
        row.metric = fields[2];
        row.house_id = fields[3];
        row.role = fields[4];
        row.value = detail::parse_double(fields[5], where);
        if (!std::isfinite(row.value)) {
            throw ParseError(where + ": value must be finite");
        }
        if (row.algorithm.empty() || row.appliance.empty() || row.metric.empty() || row.house_id.empty()) {
            throw ParseError(where + ": empty field");
        }
        try {
            metric_from_string(row.metric);
        } catch (const ConfigError& e) {
            throw ParseError(where + ": " + e.what());
        }
        role_from_string(row.role);
        rows.push_back(std::move(row));
    }
    if (!header_seen) {
        throw ParseError(path.string() + ": missing header '" + std::string(kScoreHeader) + "'");
    }
    if (rows.empty()) {
        throw EmptyInputError(path.string() + ": no score rows");
    }
    return rows;
}

void write_score_csv(const std::filesystem::path& path, std::span<const ScoreRow> rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << kScoreHeader << '\n';
    for (const auto& r : rows) {
        out << r.algorithm << ',' << r.appliance << ',' << r.metric << ',' << r.house_id << ','
            << r.role << ',' << detail::format_double(r.value) << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::vector<ScoreRow> score_rows_from_run(const ExperimentRun& run) {
    std::vector<ScoreRow> rows;
    for (const auto& r : run.evaluations) {
        for (const auto& v : r.metrics) {
            rows.push_back(ScoreRow{r.algorithm_label, r.appliance_id, std::string(to_string(v.id)),
                                    r.house_id, std::string(to_string(r.role)), v.value});
        }
    }
    return rows;
}

std::vector<TransferReport> reports_from_scores(std::span<const ScoreRow> rows) {
    if (rows.empty()) {
        throw EmptyInputError("no score rows");
    }
    struct Group {
        std::vector<SeenScore> seen;
        std::vector<UnseenScore> unseen;
    };
    std::map<std::tuple<std::string, std::string, std::string>, Group> groups;
    for (const auto& row : rows) {
        auto& group = groups[{row.algorithm, row.appliance, std::string(to_string(metric_from_string(row.metric)))}];
        if (role_from_string(row.role) == Role::Seen) {
            for (const auto& s : group.seen) {
                if (s.house_id == row.house_id) {
                    throw DomainError("duplicate seen row for house '" + row.house_id + "'");
                }
            }
            group.seen.push_back(SeenScore{row.house_id, row.value, false});
        } else {
            group.unseen.push_back(UnseenScore{row.house_id, row.value, std::nullopt, false});
        }
    }

    std::vector<TransferReport> reports;
    for (auto& [key, group] : groups) {
        const auto& [algorithm, appliance, metric_name] = key;
        if (group.seen.empty()) {
            throw DomainError("scores for " + algorithm + "/" + appliance + "/" + metric_name +
                              " have no seen row");
        }
        const MetricId metric = metric_from_string(metric_name);
        const GeneralisationRatio gr{group.seen.size(), group.unseen.size()};
        std::sort(group.seen.begin(), group.seen.end(),
                  [](const SeenScore& a, const SeenScore& b) { return a.house_id < b.house_id; });
        for (const auto& seen : group.seen) {
            reports.push_back(make_transfer_report(algorithm, appliance, metric, seen, group.unseen, gr));
        }
    }
    return reports;
}

} // namespace nilmeval
