#pragma once

#include "nilmeval/household.hpp"
#include "nilmeval/series.hpp"

#include <cstdint>
#include <span>
#include <string_view>

namespace nilmeval {

enum class MetricId { F1, Precision, Recall, Accuracy, Mae, Rmse, Nep, Nde };

/// Classification metrics score ON/OFF state sequences; regression metrics
/// score power estimates. Higher is better for the former, lower for the latter.
enum class MetricKind { Classification, Regression };

MetricKind kind_of(MetricId id);
std::string_view to_string(MetricId id);

/// Parses a metric name ("F1", "mae", ...), case-insensitively.
/// Throws ConfigError for an unknown name.
MetricId metric_from_string(std::string_view name);

/// A computed metric. `degenerate` marks values that are 0 by convention
/// because the defining ratio had an empty denominator (e.g. F1 with no true
/// positives), rather than by measurement.
struct MetricValue {
    MetricId id;
    double value = 0.0;
    bool degenerate = false;
};

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
};

/// Tallies predicted against actual states. Pairs with a missing side are
/// skipped. Throws AlignmentError when the spans differ in length.
ConfusionCounts confusion(std::span<const State> predicted, std::span<const State> actual);

/// (tp + tn) / total. Throws EmptyInputError when no pair was counted.
MetricValue accuracy(const ConfusionCounts& counts);
/// tp / (tp + fp); degenerate 0 when nothing was predicted ON.
MetricValue precision(const ConfusionCounts& counts);
/// tp / (tp + fn); degenerate 0 when nothing was actually ON.
MetricValue recall(const ConfusionCounts& counts);
/// Harmonic mean of precision and recall; degenerate 0 when tp == 0.
MetricValue f1(const ConfusionCounts& counts);

// Regression metrics pair estimate[t] with truth[t]; a pair with a missing
// side is deleted and does not count toward the averaging denominator.
// All throw EmptyInputError when no valid pair remains and AlignmentError on
// length mismatch. Values are in watts except NEP/NDE, which are unitless.

/// Mean absolute error.
MetricValue mae(std::span<const double> estimate, std::span<const double> truth);
/// Root mean squared error.
MetricValue rmse(std::span<const double> estimate, std::span<const double> truth);
/// Total absolute error normalised by total actual energy: sum|e-x| / sum x.
/// Throws DomainError when the truth sums to zero.
MetricValue nep(std::span<const double> estimate, std::span<const double> truth);
/// sqrt(sum (e-x)^2 / sum x^2). Throws DomainError when the truth is all zero.
MetricValue nde(std::span<const double> estimate, std::span<const double> truth);

// PowerSeries forms require both series on the same grid (use align first).
MetricValue mae(const PowerSeries& estimate, const PowerSeries& truth);
MetricValue rmse(const PowerSeries& estimate, const PowerSeries& truth);
MetricValue nep(const PowerSeries& estimate, const PowerSeries& truth);
MetricValue nde(const PowerSeries& estimate, const PowerSeries& truth);

/// Dispatches a classification metric on precomputed counts.
/// Throws DomainError when `id` is a regression metric.
MetricValue classification_metric(MetricId id, const ConfusionCounts& counts);

/// Dispatches a regression metric. Throws DomainError when `id` is a
/// classification metric.
MetricValue regression_metric(MetricId id, const PowerSeries& estimate, const PowerSeries& truth);

} // namespace nilmeval
