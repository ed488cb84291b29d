#pragma once

#include "nilmeval/json.hpp"
#include "nilmeval/metrics.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nilmeval {

/// Count of seen vs unseen test houses, reported verbatim ("3:2" stays 3:2,
/// never reduced, and 0 on either side is legal).
struct GeneralisationRatio {
    std::size_t seen = 0;
    std::size_t unseen = 0;

    std::string to_string() const;
    static GeneralisationRatio from_string(const std::string& text);

    bool operator==(const GeneralisationRatio&) const = default;
};

/// Metric value on a seen house (one the model was trained on).
struct SeenScore {
    std::string house_id;
    double value = 0.0;
    bool degenerate = false;
};

/// Metric value on an unseen house. g_loss_pct is the generalisation loss
/// against the seen score, in percent; it is absent when the seen score is
/// non-positive and the ratio would be meaningless.
struct UnseenScore {
    std::string house_id;
    double value = 0.0;
    std::optional<double> g_loss_pct;
    bool degenerate = false;
};

/**
 * Generalisation loss of a classification score, in percent:
 * 100 * (1 - unseen / seen). Positive means the model got worse on the
 * unseen house. Requires 0 < seen <= 1 and 0 <= unseen <= 1.
 */
double g_loss_classification(double seen, double unseen);

/**
 * Generalisation loss of an error score, in percent: 100 * (unseen / seen - 1).
 * Positive means the error grew on the unseen house. Requires seen > 0 and
 * unseen >= 0.
 */
double g_loss_regression(double seen, double unseen);

/// Mean generalisation loss over unseen houses, percent.
double mgl(std::span<const double> g_losses_pct);

/// Mean classification score over unseen houses. Values must lie in [0, 1].
double auh(std::span<const double> unseen_scores);

/// Mean error over unseen houses. Values must be finite and non-negative.
double euh(std::span<const double> unseen_errors);

/// Rounds to 2 decimals, halves away from zero (1.005 -> 1.01, -1.005 -> -1.01).
double round2(double value);

/// Fixed 2-decimal rendering of a value already at full precision; "-0.00"
/// normalises to "0.00".
std::string format_fixed2(double value);

/**
 * @brief Transfer result of one (algorithm, appliance, metric) cell.
 *
 * `unseen` is sorted by house id so the report is independent of evaluation
 * order. `auh_or_euh` is the mean unseen score (field name depends on the
 * metric kind). `mgl_pct` averages full-precision per-house losses;
 * `mgl_from_rounded_pct` applies the loss formula to the 2-decimal rounded
 * seen score and mean, which is how summary tables quote it.
 */
struct TransferReport {
    std::string algorithm_id;
    std::string appliance_id;
    MetricId metric = MetricId::F1;
    MetricKind kind = MetricKind::Classification;
    GeneralisationRatio gr;
    SeenScore seen;
    std::vector<UnseenScore> unseen;
    std::optional<double> auh_or_euh;
    std::optional<double> mgl_pct;
    std::optional<double> mgl_from_rounded_pct;

    /// Full report with per-house losses. Throws DomainError when the seen
    /// score is not positive and EmptyInputError when `unseen` is empty;
    /// callers fall back to the factories below for those shapes.
    static TransferReport build(std::string algorithm_id, std::string appliance_id, MetricId metric,
                                SeenScore seen, std::vector<UnseenScore> unseen,
                                GeneralisationRatio gr);

    /// Report with no unseen houses: the seen score stands alone.
    static TransferReport seen_only(std::string algorithm_id, std::string appliance_id, MetricId metric,
                                    SeenScore seen, GeneralisationRatio gr);

    /// Report for a non-positive seen score: unseen scores and their mean are
    /// kept but no loss ratio is formed.
    static TransferReport without_g_loss(std::string algorithm_id, std::string appliance_id,
                                         MetricId metric, SeenScore seen,
                                         std::vector<UnseenScore> unseen, GeneralisationRatio gr);

    Json to_json() const;
    static TransferReport from_json(const Json& j);
};

/// Picks the report shape the inputs allow: full when the seen score is
/// positive and unseen houses exist, otherwise one of the factories.
TransferReport make_transfer_report(std::string algorithm_id, std::string appliance_id, MetricId metric,
                                    SeenScore seen, std::vector<UnseenScore> unseen,
                                    GeneralisationRatio gr);

/// Flat text table over reports, one row per (algorithm, appliance, metric).
/// Values print at 2 decimals; a negative loss is tagged "(gain)"; absent
/// cells print "-".
std::string render_transfer_table(std::span<const TransferReport> reports);

} // namespace nilmeval
