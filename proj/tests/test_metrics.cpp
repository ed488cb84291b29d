#include <doctest.h>

#include <nilmeval/errors.hpp>
#include <nilmeval/metrics.hpp>

#include "helpers.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace nilmeval;

namespace {

std::vector<State> to_states(const std::vector<int>& raw) {
    std::vector<State> out;
    out.reserve(raw.size());
    for (int v : raw) out.push_back(static_cast<State>(v));
    return out;
}

// Random aligned state pair with some missing positions on both sides.
std::pair<std::vector<int>, std::vector<int>> random_state_pair(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> len(1, 100);
    std::uniform_int_distribution<int> tri(0, 9);
    const std::size_t n = len(rng);
    std::vector<int> pred(n), truth(n);
    bool counted = false;
    for (std::size_t i = 0; i < n; ++i) {
        const int p = tri(rng);
        const int t = tri(rng);
        pred[i] = p < 4 ? 0 : (p < 8 ? 1 : 2);
        truth[i] = t < 4 ? 0 : (t < 8 ? 1 : 2);
        counted = counted || (pred[i] != 2 && truth[i] != 2);
    }
    if (!counted) {
        pred[0] = 1;
        truth[0] = 1;
    }
    return {pred, truth};
}

// Random regression pair; the truth always keeps at least one positive sample
// so the normalised metrics stay defined.
std::pair<std::vector<double>, std::vector<double>> random_regression_pair(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> len(1, 100);
    const std::size_t n = len(rng);
    auto est = testutil::random_values(rng, n, 0.15);
    auto truth = testutil::random_values(rng, n, 0.15);
    bool ok = false;
    for (std::size_t i = 0; i < n; ++i) {
        ok = ok || (!std::isnan(est[i]) && !std::isnan(truth[i]) && truth[i] > 0.0);
    }
    if (!ok) {
        est[0] = 10.0;
        truth[0] = 50.0;
    }
    return {est, truth};
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("confusion tallies aligned state pairs") {
    const auto perfect = confusion(to_states({1, 0}), to_states({1, 0}));
    CHECK(perfect.tp == 1);
    CHECK(perfect.tn == 1);
    CHECK(perfect.fp == 0);
    CHECK(perfect.fn == 0);

    const auto mixed = confusion(to_states({1, 1, 0, 0}), to_states({1, 0, 1, 0}));
    CHECK(mixed.tp == 1);
    CHECK(mixed.fp == 1);
    CHECK(mixed.fn == 1);
    CHECK(mixed.tn == 1);

    const auto gone = confusion(to_states({2, 2}), to_states({2, 2}));
    CHECK(gone.total() == 0);

    // A missing sample on either side removes the pair.
    const auto half = confusion(to_states({1, 2, 1}), to_states({2, 1, 1}));
    CHECK(half.total() == 1);
    CHECK(half.tp == 1);

    CHECK_THROWS_AS(confusion(to_states({1}), to_states({1, 0})), AlignmentError);
}

TEST_CASE("accuracy from counts") {
    CHECK(accuracy({1, 0, 1, 0}).value == 1.0);
    CHECK(accuracy({0, 1, 0, 1}).value == 0.0);
    CHECK(accuracy({3, 1, 5, 1}).value == 0.8);
    CHECK_FALSE(accuracy({3, 1, 5, 1}).degenerate);
    CHECK_THROWS_AS(accuracy({0, 0, 0, 0}), EmptyInputError);
}

TEST_CASE("f1 and its degenerate conventions") {
    CHECK(f1({1, 0, 0, 0}).value == 1.0);

    const auto none_predicted = f1({0, 0, 5, 5});
    CHECK(none_predicted.value == 0.0);
    CHECK(none_predicted.degenerate);

    const auto mixed = f1({2, 1, 0, 2});
    CHECK(testutil::close(mixed.value, 4.0 / 7.0, 1e-15));
    CHECK_FALSE(mixed.degenerate);
}

TEST_CASE("precision and recall flag empty denominators") {
    const auto p = precision({0, 0, 3, 2});
    CHECK(p.value == 0.0);
    CHECK(p.degenerate);
    const auto r = recall({0, 2, 3, 0});
    CHECK(r.value == 0.0);
    CHECK(r.degenerate);

    CHECK(precision({3, 1, 0, 0}).value == 0.75);
    CHECK(recall({3, 0, 0, 1}).value == 0.75);
}

TEST_CASE("mae on known pairs") {
    const std::vector<double> same = {10.0, 20.0, 30.0};
    CHECK(mae(same, same).value == 0.0);

    CHECK(mae(std::vector<double>{10.0, 10.0}, std::vector<double>{0.0, 20.0}).value == 10.0);

    const auto v = mae(std::vector<double>{100.0, 0.0, 50.0}, std::vector<double>{90.0, 30.0, 50.0});
    CHECK(testutil::close(v.value, 40.0 / 3.0, 1e-15));
}

TEST_CASE("rmse nep and nde on known pairs") {
    const std::vector<double> truth = {10.0, 10.0};

    CHECK(rmse(truth, truth).value == 0.0);
    CHECK(nep(truth, truth).value == 0.0);
    CHECK(nde(truth, truth).value == 0.0);

    const std::vector<double> flat = {0.0, 0.0};
    CHECK(rmse(flat, truth).value == 10.0);
    CHECK(nep(flat, truth).value == 1.0);
    CHECK(nde(flat, truth).value == 1.0);

    const std::vector<double> shifted = {20.0, 0.0};
    CHECK(rmse(shifted, truth).value == 10.0);
    CHECK(nep(shifted, truth).value == 1.0);
    CHECK(nde(shifted, truth).value == 1.0);
}

TEST_CASE("regression metrics drop pairs with a missing side") {
    const std::vector<double> est = {10.0, kMissing, 30.0, 40.0};
    const std::vector<double> truth = {0.0, 20.0, kMissing, 40.0};
    // Only the first and last pairs survive.
    CHECK(mae(est, truth).value == 5.0);

    const std::vector<double> all_gone = {kMissing, 10.0};
    const std::vector<double> other_gone = {10.0, kMissing};
    CHECK_THROWS_AS(mae(all_gone, other_gone), EmptyInputError);
    CHECK_THROWS_AS(rmse(all_gone, other_gone), EmptyInputError);

    CHECK_THROWS_AS(mae(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), AlignmentError);
}

TEST_CASE("normalised errors reject an all-zero truth") {
    const std::vector<double> est = {5.0, 5.0};
    const std::vector<double> zeros = {0.0, 0.0};
    CHECK_THROWS_AS(nep(est, zeros), DomainError);
    CHECK_THROWS_AS(nde(est, zeros), DomainError);
}

TEST_CASE("metrics match naive reference loops on random instances") {
    std::mt19937_64 rng(20240818);

    for (int iter = 0; iter < 1200; ++iter) {
        const auto [pred, truth] = random_state_pair(rng);
        const auto counts = confusion(to_states(pred), to_states(truth));
        const auto ref = testutil::ref_count(pred, truth);
        REQUIRE(counts.tp == static_cast<std::uint64_t>(ref.tp));
        REQUIRE(counts.fp == static_cast<std::uint64_t>(ref.fp));
        REQUIRE(counts.tn == static_cast<std::uint64_t>(ref.tn));
        REQUIRE(counts.fn == static_cast<std::uint64_t>(ref.fn));

        REQUIRE(testutil::close(accuracy(counts).value, testutil::ref_accuracy(ref), 1e-12));
        REQUIRE(testutil::close(precision(counts).value, testutil::ref_precision(ref), 1e-12));
        REQUIRE(testutil::close(recall(counts).value, testutil::ref_recall(ref), 1e-12));
        REQUIRE(testutil::close(f1(counts).value, testutil::ref_f1(ref), 1e-12));

        const double acc = accuracy(counts).value;
        const double f = f1(counts).value;
        REQUIRE(acc >= 0.0);
        REQUIRE(acc <= 1.0);
        REQUIRE(f >= 0.0);
        REQUIRE(f <= 1.0);
    }

    for (int iter = 0; iter < 1200; ++iter) {
        const auto [est, truth] = random_regression_pair(rng);
        const double m = mae(est, truth).value;
        const double r = rmse(est, truth).value;
        REQUIRE(testutil::close(m, testutil::ref_mae(est, truth), 1e-12));
        REQUIRE(testutil::close(r, testutil::ref_rmse(est, truth), 1e-12));
        REQUIRE(testutil::close(nep(est, truth).value, testutil::ref_nep(est, truth), 1e-12));
        REQUIRE(testutil::close(nde(est, truth).value, testutil::ref_nde(est, truth), 1e-12));
        // Power-mean inequality, with headroom for accumulation order.
        REQUIRE(r >= m - 1e-9 * std::max(1.0, m));
    }
}

TEST_CASE("mae is symmetric and errors scale linearly") {
    std::mt19937_64 rng(21);
    for (int iter = 0; iter < 200; ++iter) {
        const auto [est, truth] = random_regression_pair(rng);
        CHECK(testutil::close(mae(est, truth).value, mae(truth, est).value, 1e-15));

        const double c = 3.5;
        std::vector<double> est_c = est;
        std::vector<double> truth_c = truth;
        for (auto& v : est_c) v *= c;
        for (auto& v : truth_c) v *= c;
        CHECK(testutil::close(mae(est_c, truth_c).value, c * mae(est, truth).value, 1e-12));
        CHECK(testutil::close(rmse(est_c, truth_c).value, c * rmse(est, truth).value, 1e-12));
        CHECK(testutil::close(nep(est_c, truth_c).value, nep(est, truth).value, 1e-12));
        CHECK(testutil::close(nde(est_c, truth_c).value, nde(est, truth).value, 1e-12));
    }
}

TEST_CASE("regression error is zero exactly on identical present samples") {
    std::mt19937_64 rng(22);
    for (int iter = 0; iter < 100; ++iter) {
        auto [est, truth] = random_regression_pair(rng);
        std::vector<double> copy = truth;
        CHECK(mae(copy, truth).value == 0.0);
        CHECK(rmse(copy, truth).value == 0.0);

        // Any single differing present pair makes every error positive.
        std::size_t present = copy.size();
        for (std::size_t i = 0; i < copy.size(); ++i) {
            if (!std::isnan(copy[i])) {
                present = i;
                break;
            }
        }
        if (present < copy.size()) {
            copy[present] += 1.0;
            CHECK(mae(copy, truth).value > 0.0);
            CHECK(rmse(copy, truth).value > 0.0);
        }
    }
}

TEST_CASE("series overloads agree with the span forms") {
    const PowerSeries est(0, 10, {10.0, kMissing, 30.0});
    const PowerSeries truth(0, 10, {0.0, 20.0, 60.0});
    CHECK(mae(est, truth).value == 20.0);
    CHECK(testutil::close(rmse(est, truth).value, std::sqrt((100.0 + 900.0) / 2.0), 1e-12));

    const PowerSeries shifted(10, 10, {1.0, 2.0, 3.0});
    CHECK_THROWS_AS(mae(est, shifted), AlignmentError);
    const PowerSeries coarser(0, 20, {1.0, 2.0, 3.0});
    CHECK_THROWS_AS(mae(est, coarser), AlignmentError);
}

TEST_CASE("metric names parse case-insensitively") {
    CHECK(metric_from_string("f1") == MetricId::F1);
    CHECK(metric_from_string("F1") == MetricId::F1);
    CHECK(metric_from_string("Mae") == MetricId::Mae);
    CHECK(metric_from_string("NDE") == MetricId::Nde);
    CHECK_THROWS_AS(metric_from_string("f2"), ConfigError);
    CHECK_THROWS_AS(metric_from_string(""), ConfigError);

    for (MetricId id : {MetricId::F1, MetricId::Precision, MetricId::Recall, MetricId::Accuracy,
                        MetricId::Mae, MetricId::Rmse, MetricId::Nep, MetricId::Nde}) {
        CHECK(metric_from_string(to_string(id)) == id);
    }

    CHECK(kind_of(MetricId::F1) == MetricKind::Classification);
    CHECK(kind_of(MetricId::Accuracy) == MetricKind::Classification);
    CHECK(kind_of(MetricId::Mae) == MetricKind::Regression);
    CHECK(kind_of(MetricId::Nde) == MetricKind::Regression);
}

TEST_CASE("metric dispatchers reject the wrong kind") {
    const ConfusionCounts c{1, 1, 1, 1};
    CHECK(classification_metric(MetricId::Accuracy, c).value == 0.5);
    CHECK_THROWS_AS(classification_metric(MetricId::Mae, c), DomainError);

    const PowerSeries a(0, 10, {1.0, 2.0});
    CHECK(regression_metric(MetricId::Mae, a, a).value == 0.0);
    CHECK_THROWS_AS(regression_metric(MetricId::F1, a, a), DomainError);
}

} // TEST_SUITE
