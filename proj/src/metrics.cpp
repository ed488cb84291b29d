#include "nilmeval/metrics.hpp"

#include "nilmeval/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace nilmeval {

MetricKind kind_of(MetricId id) {
    switch (id) {
    case MetricId::F1:
    case MetricId::Precision:
    case MetricId::Recall:
    case MetricId::Accuracy:
        return MetricKind::Classification;
    case MetricId::Mae:
    case MetricId::Rmse:
    case MetricId::Nep:
    case MetricId::Nde:
        return MetricKind::Regression;
    }
    throw DomainError("unknown metric id");
}

std::string_view to_string(MetricId id) {
    switch (id) {
    case MetricId::F1: return "F1";
    case MetricId::Precision: return "PRECISION";
    case MetricId::Recall: return "RECALL";
    case MetricId::Accuracy: return "ACCURACY";
    case MetricId::Mae: return "MAE";
    case MetricId::Rmse: return "RMSE";
    case MetricId::Nep: return "NEP";
    case MetricId::Nde: return "NDE";
    }
    throw DomainError("unknown metric id");
}

MetricId metric_from_string(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "F1") return MetricId::F1;
    if (upper == "PRECISION") return MetricId::Precision;
    if (upper == "RECALL") return MetricId::Recall;
    if (upper == "ACCURACY") return MetricId::Accuracy;
    if (upper == "MAE") return MetricId::Mae;
    if (upper == "RMSE") return MetricId::Rmse;
    if (upper == "NEP") return MetricId::Nep;
    if (upper == "NDE") return MetricId::Nde;
    throw ConfigError("unknown metric '" + std::string(name) + "'");
}

ConfusionCounts confusion(std::span<const State> predicted, std::span<const State> actual) {
    if (predicted.size() != actual.size()) {
        throw AlignmentError("confusion: state sequences differ in length (" +
                             std::to_string(predicted.size()) + " vs " + std::to_string(actual.size()) + ")");
    }
    ConfusionCounts c;
    for (std::size_t t = 0; t < predicted.size(); ++t) {
        const State p = predicted[t];
        const State a = actual[t];
        if (p == State::Missing || a == State::Missing) continue;
        if (p == State::On) {
            (a == State::On ? c.tp : c.fp) += 1;
        } else {
            (a == State::On ? c.fn : c.tn) += 1;
        }
    }
    return c;
}

MetricValue accuracy(const ConfusionCounts& counts) {
    const auto total = counts.total();
    if (total == 0) {
        throw EmptyInputError("accuracy: no jointly present samples");
    }
    return {MetricId::Accuracy, static_cast<double>(counts.tp + counts.tn) / static_cast<double>(total), false};
}

MetricValue precision(const ConfusionCounts& counts) {
    if (counts.total() == 0) {
        throw EmptyInputError("precision: no jointly present samples");
    }
    if (counts.tp + counts.fp == 0) {
        return {MetricId::Precision, 0.0, true};
    }
    return {MetricId::Precision,
            static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fp), false};
}

MetricValue recall(const ConfusionCounts& counts) {
    if (counts.total() == 0) {
        throw EmptyInputError("recall: no jointly present samples");
    }
    if (counts.tp + counts.fn == 0) {
        return {MetricId::Recall, 0.0, true};
    }
    return {MetricId::Recall,
            static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn), false};
}

MetricValue f1(const ConfusionCounts& counts) {
    if (counts.total() == 0) {
        throw EmptyInputError("f1: no jointly present samples");
    }
    // With tp == 0 either precision + recall is 0 or one of them is undefined;
    // both cases fall back to 0 by convention.
    if (counts.tp == 0) {
        return {MetricId::F1, 0.0, true};
    }
    const double p = precision(counts).value;
    const double r = recall(counts).value;
    return {MetricId::F1, 2.0 * p * r / (p + r), false};
}

namespace {

struct PairSums {
    double abs_err = 0.0;
    double sq_err = 0.0;
    double truth_sum = 0.0;
    double truth_sq_sum = 0.0;
    std::size_t count = 0;
};

PairSums accumulate_pairs(std::span<const double> estimate, std::span<const double> truth,
                          const char* caller) {
    if (estimate.size() != truth.size()) {
        throw AlignmentError(std::string(caller) + ": series differ in length (" +
                             std::to_string(estimate.size()) + " vs " + std::to_string(truth.size()) + ")");
    }
    PairSums s;
    for (std::size_t t = 0; t < truth.size(); ++t) {
        const double e = estimate[t];
        const double x = truth[t];
        if (is_missing(e) || is_missing(x)) continue;
        const double d = e - x;
        s.abs_err += std::abs(d);
        s.sq_err += d * d;
        s.truth_sum += x;
        s.truth_sq_sum += x * x;
        s.count += 1;
    }
    if (s.count == 0) {
        throw EmptyInputError(std::string(caller) + ": no jointly present samples");
    }
    return s;
}

void require_same_grid(const PowerSeries& estimate, const PowerSeries& truth, const char* caller) {
    if (!estimate.same_grid(truth)) {
        throw AlignmentError(std::string(caller) + ": series are not on the same sample grid");
    }
}

} // namespace

MetricValue mae(std::span<const double> estimate, std::span<const double> truth) {
    const auto s = accumulate_pairs(estimate, truth, "mae");
    return {MetricId::Mae, s.abs_err / static_cast<double>(s.count), false};
}

MetricValue rmse(std::span<const double> estimate, std::span<const double> truth) {
    const auto s = accumulate_pairs(estimate, truth, "rmse");
    return {MetricId::Rmse, std::sqrt(s.sq_err / static_cast<double>(s.count)), false};
}

MetricValue nep(std::span<const double> estimate, std::span<const double> truth) {
    const auto s = accumulate_pairs(estimate, truth, "nep");
    if (s.truth_sum == 0.0) {
        throw DomainError("nep: actual consumption sums to zero over the valid samples");
    }
    return {MetricId::Nep, s.abs_err / s.truth_sum, false};
}

MetricValue nde(std::span<const double> estimate, std::span<const double> truth) {
    const auto s = accumulate_pairs(estimate, truth, "nde");
    if (s.truth_sq_sum == 0.0) {
        throw DomainError("nde: actual consumption is zero at every valid sample");
    }
    return {MetricId::Nde, std::sqrt(s.sq_err / s.truth_sq_sum), false};
}

MetricValue mae(const PowerSeries& estimate, const PowerSeries& truth) {
    require_same_grid(estimate, truth, "mae");
    return mae(estimate.values(), truth.values());
}

MetricValue rmse(const PowerSeries& estimate, const PowerSeries& truth) {
    require_same_grid(estimate, truth, "rmse");
    return rmse(estimate.values(), truth.values());
}

MetricValue nep(const PowerSeries& estimate, const PowerSeries& truth) {
    require_same_grid(estimate, truth, "nep");
    return nep(estimate.values(), truth.values());
}

MetricValue nde(const PowerSeries& estimate, const PowerSeries& truth) {
    require_same_grid(estimate, truth, "nde");
    return nde(estimate.values(), truth.values());
}

MetricValue classification_metric(MetricId id, const ConfusionCounts& counts) {
    switch (id) {
    case MetricId::F1: return f1(counts);
    case MetricId::Precision: return precision(counts);
    case MetricId::Recall: return recall(counts);
    case MetricId::Accuracy: return accuracy(counts);
    default:
        throw DomainError(std::string(to_string(id)) + " is not a classification metric");
    }
}

MetricValue regression_metric(MetricId id, const PowerSeries& estimate, const PowerSeries& truth) {
    switch (id) {
    case MetricId::Mae: return mae(estimate, truth);
    case MetricId::Rmse: return rmse(estimate, truth);
    case MetricId::Nep: return nep(estimate, truth);
    case MetricId::Nde: return nde(estimate, truth);
    default:
        throw DomainError(std::string(to_string(id)) + " is not a regression metric");
    }
}

} // namespace nilmeval
