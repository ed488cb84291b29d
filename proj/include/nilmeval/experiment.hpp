#pragma once

#include "nilmeval/household.hpp"
#include "nilmeval/json.hpp"
#include "nilmeval/metrics.hpp"
#include "nilmeval/transfer.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace nilmeval {

inline constexpr std::string_view kToolName = "nilmeval";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// One algorithm entry in an experiment. `label` names the algorithm in
/// results (defaults to `id`) so the same algorithm can appear twice with
/// different parameters.
struct AlgorithmSpec {
    std::string id;
    Json params = Json::object();
    std::string label;
};

enum class Role { Seen, Unseen };

std::string_view to_string(Role role);
Role role_from_string(std::string_view name);

/**
 * @brief Declarative description of a transferability experiment.
 *
 * Training houses are trained on their first train_window_s seconds. Seen
 * test houses (a subset of the training houses) are tested on the
 * test_window_s seconds right after their training window, so seen scores
 * never reuse training samples. Unseen test houses (disjoint from training)
 * are tested on their first test_window_s seconds.
 */
struct ExperimentConfig {
    std::string experiment_id;
    std::vector<AlgorithmSpec> algorithms;
    std::vector<std::string> appliances;
    std::vector<std::string> training_houses;
    std::vector<std::string> seen_tests;
    std::vector<std::string> unseen_tests;
    std::int64_t interval_s = 10;
    std::int64_t train_window_s = 0;
    std::int64_t test_window_s = 0;
    std::vector<MetricId> metrics;
    std::map<std::string, double> thresholds;
    std::uint64_t seed = 0;

    /// Structural consistency; throws ConfigError.
    void validate() const;

    Json to_json() const;
    static ExperimentConfig from_json(const Json& j);
};

/// Scores of one (algorithm, appliance, test house): every configured metric
/// plus the underlying ON/OFF confusion counts.
struct EvaluationResult {
    std::string algorithm_label;
    std::string appliance_id;
    std::string house_id;
    Role role = Role::Seen;
    ConfusionCounts confusion;
    std::vector<MetricValue> metrics;
};

/// A completed experiment: inputs, per-house scores and transfer reports.
/// Serialization is canonical, so equal runs emit byte-identical JSON.
struct ExperimentRun {
    ExperimentConfig config;
    std::vector<EvaluationResult> evaluations;
    std::vector<TransferReport> reports;
    Json provenance;

    Json to_json() const;
    static ExperimentRun from_json(const Json& j);
};

/**
 * Loads each referenced house from `data_dir/<house_id>/`, trains every
 * algorithm on the training windows and scores every (algorithm, appliance,
 * metric, test house) cell. With one seen test house each cell yields one
 * transfer report; with several, one report per seen house (losses are only
 * ever formed against a single seen baseline). Throws DomainError when a
 * house's data does not cover its windows.
 */
ExperimentRun run_experiment(const ExperimentConfig& config, const std::filesystem::path& data_dir);

/// Per-appliance text table of an experiment's reports.
std::string render_run_table(const ExperimentRun& run);

/// One row of a flat results CSV (header:
/// algorithm,appliance,metric,house_id,role,value).
struct ScoreRow {
    std::string algorithm;
    std::string appliance;
    std::string metric;
    std::string house_id;
    std::string role;
    double value = 0.0;
};

std::vector<ScoreRow> load_score_csv(const std::filesystem::path& path);
void write_score_csv(const std::filesystem::path& path, std::span<const ScoreRow> rows);
std::vector<ScoreRow> score_rows_from_run(const ExperimentRun& run);

/// Builds transfer reports from flat score rows, grouped by
/// (algorithm, appliance, metric) and ordered lexicographically.
std::vector<TransferReport> reports_from_scores(std::span<const ScoreRow> rows);

} // namespace nilmeval
