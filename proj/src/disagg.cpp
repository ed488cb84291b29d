#include "nilmeval/disagg.hpp"

#include "nilmeval/errors.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <set>
#include <string>
#include <utility>

namespace nilmeval {

namespace {

constexpr std::size_t kDefaultNumStates = 3;
constexpr std::size_t kDefaultMaxCombinations = std::size_t{1} << 20;
constexpr double kDefaultEdgeThreshold = 30.0;
constexpr double kDefaultEdgeTolerance = 20.0;
// Cluster centers closer than this collapse; separate states this similar
// carry no signal at household noise levels.
constexpr double kCenterMergeDistance = 0.5;

void check_param_keys(const Json& params, std::initializer_list<const char*> allowed,
                      const char* algorithm) {
    if (params.is_null()) return;
    if (!params.is_object()) {
        throw ConfigError(std::string(algorithm) + ": params must be a JSON object");
    }
    for (const auto& item : params.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known) {
            throw ConfigError(std::string(algorithm) + ": unknown parameter '" + item.key() + "'");
        }
    }
}

struct Pooled {
    std::vector<double> all; // every present sample, training-house order
    std::vector<double> on;  // the subset at or above each trace's threshold
    double on_threshold = kDefaultOnThreshold;
};

Pooled pool_samples(std::span<const HouseholdRecord> houses, const std::string& appliance_id) {
    Pooled pooled;
    bool first = true;
    for (const auto& house : houses) {
        const ApplianceTrace* trace = house.find_appliance(appliance_id);
        if (trace == nullptr) {
            throw ConfigError("training house '" + house.house_id + "' has no appliance '" +
                              appliance_id + "'");
        }
        if (first) {
            pooled.on_threshold = trace->on_threshold;
            first = false;
        }
        for (double v : trace->series.values()) {
            if (is_missing(v)) continue;
            pooled.all.push_back(v);
            if (v >= trace->on_threshold) pooled.on.push_back(v);
        }
    }
    return pooled;
}

double mean_of(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

} // namespace

const PowerSeries* DisaggregationOutput::find(const std::string& appliance_id) const {
    for (const auto& e : estimates) {
        if (e.appliance_id == appliance_id) return &e.series;
    }
    return nullptr;
}

void Disaggregator::mark_trained(std::vector<std::string> appliance_ids) {
    appliance_ids_ = std::move(appliance_ids);
    trained_ = true;
}

void Disaggregator::train(std::span<const HouseholdRecord> houses,
                          std::span<const std::string> appliance_ids) {
    if (houses.empty()) {
        throw EmptyInputError("train: at least one training house required");
    }
    if (appliance_ids.empty()) {
        throw EmptyInputError("train: at least one appliance required");
    }
    std::set<std::string> unique(appliance_ids.begin(), appliance_ids.end());
    if (unique.size() != appliance_ids.size()) {
        throw ConfigError("train: duplicate appliance in request");
    }
    fit(houses, appliance_ids);
    mark_trained(std::vector<std::string>(appliance_ids.begin(), appliance_ids.end()));
}

DisaggregationOutput Disaggregator::disaggregate(const PowerSeries& aggregate) const {
    if (!trained_) {
        throw StateError(std::string(algorithm_id()) + ": disaggregate called before train");
    }
    auto columns = predict(aggregate);

    DisaggregationOutput out;
    out.estimates.reserve(columns.size());
    for (std::size_t k = 0; k < columns.size(); ++k) {
        auto& column = columns[k];
        for (std::size_t t = 0; t < column.size(); ++t) {
            if (is_missing(aggregate.value_at(t))) column[t] = kMissing;
        }
        out.estimates.push_back(ApplianceEstimate{
            appliance_ids_[k], PowerSeries(aggregate.start(), aggregate.interval(), std::move(column))});
    }
    return out;
}

std::vector<std::size_t> co_solve(std::span<const std::vector<double>> state_levels, double target,
                                  std::size_t max_combinations) {
    if (state_levels.empty()) {
        throw DomainError("co_solve: at least one appliance required");
    }
    if (!std::isfinite(target)) {
        throw DomainError("co_solve: target must be finite");
    }
    if (max_combinations == 0) {
        throw DomainError("co_solve: max_combinations must be positive");
    }
    std::size_t combinations = 1;
    for (const auto& levels : state_levels) {
        if (levels.size() < 2) {
            throw DomainError("co_solve: every appliance needs at least two state levels");
        }
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (!std::isfinite(levels[i]) || levels[i] < 0.0) {
                throw DomainError("co_solve: state levels must be finite and non-negative");
            }
            if (i > 0 && levels[i] <= levels[i - 1]) {
                throw DomainError("co_solve: state levels must be strictly increasing");
            }
        }
        if (combinations > max_combinations / levels.size()) {
            throw CapacityError("co_solve: combination count exceeds " + std::to_string(max_combinations));
        }
        combinations *= levels.size();
    }

    const std::size_t m = state_levels.size();
    std::vector<std::size_t> indices(m, 0);
    std::vector<std::size_t> best(m, 0);
    double best_diff = std::numeric_limits<double>::infinity();
    double best_sum = std::numeric_limits<double>::infinity();
    while (true) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) sum += state_levels[i][indices[i]];
        const double diff = std::abs(target - sum);
        // Iteration is ascending lexicographic, so replacing on a full tie
        // leaves the lexicographically greatest combination: earlier
        // appliances take the higher state.
        if (diff < best_diff || (diff == best_diff && sum <= best_sum)) {
            best_diff = diff;
            best_sum = sum;
            best = indices;
        }
        std::size_t pos = m;
        while (pos > 0) {
            --pos;
            if (++indices[pos] < state_levels[pos].size()) break;
            indices[pos] = 0;
            if (pos == 0) return best;
        }
    }
}

std::vector<double> cluster_on_levels(std::span<const double> on_samples, std::size_t clusters) {
    if (clusters == 0) {
        throw DomainError("cluster_on_levels: at least one cluster required");
    }
    if (on_samples.empty()) {
        throw EmptyInputError("cluster_on_levels: no samples");
    }
    std::vector<double> sorted(on_samples.begin(), on_samples.end());
    std::sort(sorted.begin(), sorted.end());

    const std::size_t k = std::min(clusters, sorted.size());
    std::vector<double> centers(k);
    for (std::size_t j = 0; j < k; ++j) {
        auto pick = static_cast<std::size_t>((static_cast<double>(j) + 0.5) /
                                             static_cast<double>(k) * static_cast<double>(sorted.size()));
        centers[j] = sorted[std::min(pick, sorted.size() - 1)];
    }

    std::vector<double> sums(k);
    std::vector<std::size_t> counts(k);
    for (int iter = 0; iter < 50; ++iter) {
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), std::size_t{0});
        for (double v : sorted) {
            std::size_t nearest = 0;
            double nearest_dist = std::abs(v - centers[0]);
            for (std::size_t j = 1; j < k; ++j) {
                const double d = std::abs(v - centers[j]);
                if (d < nearest_dist) {
                    nearest = j;
                    nearest_dist = d;
                }
            }
            sums[nearest] += v;
            counts[nearest] += 1;
        }
        bool moved = false;
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] == 0) continue; // empty cluster keeps its center
            const double updated = sums[j] / static_cast<double>(counts[j]);
            if (updated != centers[j]) {
                centers[j] = updated;
                moved = true;
            }
        }
        if (!moved) break;
    }

    std::sort(centers.begin(), centers.end());
    std::vector<double> merged;
    for (double c : centers) {
        if (merged.empty() || c - merged.back() >= kCenterMergeDistance) {
            merged.push_back(c);
        }
    }
    return merged;
}

namespace {

// ---- combinatorial optimisation ----

class CoDisaggregator final : public Disaggregator {
public:
    CoDisaggregator(std::size_t num_states, std::size_t max_combinations)
        : num_states_(num_states), max_combinations_(max_combinations) {
        if (num_states_ < 2) {
            throw ConfigError("co: num_states must be at least 2 (OFF plus one ON level)");
        }
        if (max_combinations_ == 0) {
            throw ConfigError("co: max_combinations must be positive");
        }
    }

    std::string_view algorithm_id() const override { return "co"; }

    Json to_json() const override {
        if (!trained()) throw StateError("co: cannot serialize an untrained model");
        Json j;
        j["algorithm"] = "co";
        j["params"] = Json{{"num_states", num_states_}, {"max_combinations", max_combinations_}};
        j["appliances"] = Json::array();
        for (const auto& e : entries_) {
            j["appliances"].push_back(
                Json{{"appliance_id", e.id}, {"on_threshold", e.on_threshold}, {"states", e.states}});
        }
        return j;
    }

    void restore(const Json& model) {
        std::vector<std::string> ids;
        for (const Json& a : jsonutil::require(model, "appliances", "co model")) {
            Entry e;
            e.id = jsonutil::require_string(a, "appliance_id", "co model");
            e.on_threshold = jsonutil::require_number(a, "on_threshold", "co model");
            const Json& states = jsonutil::require(a, "states", "co model");
            if (!states.is_array() || states.size() < 2) {
                throw ParseError("co model: 'states' must be an array of at least two levels");
            }
            for (const Json& s : states) e.states.push_back(s.get<double>());
            ids.push_back(e.id);
            entries_.push_back(std::move(e));
        }
        mark_trained(std::move(ids));
    }

protected:
    void fit(std::span<const HouseholdRecord> houses,
             std::span<const std::string> appliance_ids) override {
        entries_.clear();
        for (const auto& id : appliance_ids) {
            const Pooled pooled = pool_samples(houses, id);
            if (pooled.on.empty()) {
                throw DomainError("co: appliance '" + id + "' is never ON in the training data");
            }
            Entry e;
            e.id = id;
            e.on_threshold = pooled.on_threshold;
            e.states.push_back(0.0); // OFF level is pinned, not fit
            for (double c : cluster_on_levels(pooled.on, num_states_ - 1)) {
                e.states.push_back(c);
            }
            entries_.push_back(std::move(e));
        }
    }

    std::vector<std::vector<double>> predict(const PowerSeries& aggregate) const override {
        std::vector<std::vector<double>> levels;
        levels.reserve(entries_.size());
        for (const auto& e : entries_) levels.push_back(e.states);

        std::vector<std::vector<double>> columns(entries_.size(),
                                                 std::vector<double>(aggregate.size(), 0.0));
        for (std::size_t t = 0; t < aggregate.size(); ++t) {
            const double y = aggregate.value_at(t);
            if (is_missing(y)) continue;
            const auto combo = co_solve(levels, y, max_combinations_);
            for (std::size_t k = 0; k < entries_.size(); ++k) {
                columns[k][t] = entries_[k].states[combo[k]];
            }
        }
        return columns;
    }

private:
    struct Entry {
        std::string id;
        double on_threshold = kDefaultOnThreshold;
        std::vector<double> states;
    };

    std::size_t num_states_;
    std::size_t max_combinations_;
    std::vector<Entry> entries_;
};

// ---- edge matching ----

class EdgeMatchDisaggregator final : public Disaggregator {
public:
    EdgeMatchDisaggregator(double edge_threshold, double tolerance)
        : edge_threshold_(edge_threshold), tolerance_(tolerance) {
        if (!std::isfinite(edge_threshold_) || edge_threshold_ <= 0.0) {
            throw ConfigError("edge_match: edge_threshold_w must be positive");
        }
        if (!std::isfinite(tolerance_) || tolerance_ < 0.0) {
            throw ConfigError("edge_match: tolerance_w must be non-negative");
        }
    }

    std::string_view algorithm_id() const override { return "edge_match"; }

    Json to_json() const override {
        if (!trained()) throw StateError("edge_match: cannot serialize an untrained model");
        Json j;
        j["algorithm"] = "edge_match";
        j["params"] = Json{{"edge_threshold_w", edge_threshold_}, {"tolerance_w", tolerance_}};
        j["appliances"] = Json::array();
        for (const auto& e : entries_) {
            j["appliances"].push_back(Json{
                {"appliance_id", e.id}, {"on_threshold", e.on_threshold}, {"on_power_w", e.on_power}});
        }
        return j;
    }

    void restore(const Json& model) {
        std::vector<std::string> ids;
        for (const Json& a : jsonutil::require(model, "appliances", "edge_match model")) {
            Entry e;
            e.id = jsonutil::require_string(a, "appliance_id", "edge_match model");
            e.on_threshold = jsonutil::require_number(a, "on_threshold", "edge_match model");
            e.on_power = jsonutil::require_number(a, "on_power_w", "edge_match model");
            ids.push_back(e.id);
            entries_.push_back(std::move(e));
        }
        mark_trained(std::move(ids));
    }

protected:
    void fit(std::span<const HouseholdRecord> houses,
             std::span<const std::string> appliance_ids) override {
        entries_.clear();
        for (const auto& id : appliance_ids) {
            const Pooled pooled = pool_samples(houses, id);
            if (pooled.on.empty()) {
                throw DomainError("edge_match: appliance '" + id + "' is never ON in the training data");
            }
            entries_.push_back(Entry{id, pooled.on_threshold, mean_of(pooled.on)});
        }
    }

    std::vector<std::vector<double>> predict(const PowerSeries& aggregate) const override {
        std::vector<std::vector<double>> columns(entries_.size(),
                                                 std::vector<double>(aggregate.size(), 0.0));
        std::vector<bool> on(entries_.size(), false);
        bool have_previous = false;
        double previous = 0.0;
        for (std::size_t t = 0; t < aggregate.size(); ++t) {
            const double y = aggregate.value_at(t);
            if (is_missing(y)) continue; // state persists across the gap
            if (have_previous) {
                const double delta = y - previous;
                if (delta >= edge_threshold_) {
                    switch_best_match(on, delta, /*to_on=*/true);
                } else if (delta <= -edge_threshold_) {
                    switch_best_match(on, -delta, /*to_on=*/false);
                }
            }
            previous = y;
            have_previous = true;
            for (std::size_t k = 0; k < entries_.size(); ++k) {
                if (on[k]) columns[k][t] = entries_[k].on_power;
            }
        }
        return columns;
    }

private:
    struct Entry {
        std::string id;
        double on_threshold = kDefaultOnThreshold;
        double on_power = 0.0;
    };

    // Flips the candidate whose ON power lies nearest to the step size, within
    // tolerance; ties go to the earlier appliance.
    void switch_best_match(std::vector<bool>& on, double step, bool to_on) const {
        std::size_t best = entries_.size();
        double best_dist = tolerance_;
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            if (on[k] == to_on) continue;
            const double dist = std::abs(step - entries_[k].on_power);
            if (dist < best_dist || (best == entries_.size() && dist <= best_dist)) {
                best = k;
                best_dist = dist;
            }
        }
        if (best < entries_.size()) on[best] = to_on;
    }

    double edge_threshold_;
    double tolerance_;
    std::vector<Entry> entries_;
};

// ---- trivial baselines ----

class AlwaysOffDisaggregator final : public Disaggregator {
public:
    std::string_view algorithm_id() const override { return "always_off"; }

    Json to_json() const override {
        if (!trained()) throw StateError("always_off: cannot serialize an untrained model");
        Json j;
        j["algorithm"] = "always_off";
        j["params"] = Json::object();
        j["appliances"] = Json::array();
        for (const auto& id : appliance_ids()) {
            j["appliances"].push_back(Json{{"appliance_id", id}});
        }
        return j;
    }

    void restore(const Json& model) {
        std::vector<std::string> ids;
        for (const Json& a : jsonutil::require(model, "appliances", "always_off model")) {
            ids.push_back(jsonutil::require_string(a, "appliance_id", "always_off model"));
        }
        mark_trained(std::move(ids));
    }

protected:
    void fit(std::span<const HouseholdRecord>, std::span<const std::string>) override {}

    std::vector<std::vector<double>> predict(const PowerSeries& aggregate) const override {
        return std::vector<std::vector<double>>(appliance_ids().size(),
                                                std::vector<double>(aggregate.size(), 0.0));
    }
};

class MeanPredictorDisaggregator final : public Disaggregator {
public:
    std::string_view algorithm_id() const override { return "mean_predictor"; }

    Json to_json() const override {
        if (!trained()) throw StateError("mean_predictor: cannot serialize an untrained model");
        Json j;
        j["algorithm"] = "mean_predictor";
        j["params"] = Json::object();
        j["appliances"] = Json::array();
        for (const auto& e : entries_) {
            j["appliances"].push_back(Json{{"appliance_id", e.id}, {"mean_w", e.mean}});
        }
        return j;
    }

    void restore(const Json& model) {
        std::vector<std::string> ids;
        for (const Json& a : jsonutil::require(model, "appliances", "mean_predictor model")) {
            Entry e;
            e.id = jsonutil::require_string(a, "appliance_id", "mean_predictor model");
            e.mean = jsonutil::require_number(a, "mean_w", "mean_predictor model");
            ids.push_back(e.id);
            entries_.push_back(std::move(e));
        }
        mark_trained(std::move(ids));
    }

protected:
    void fit(std::span<const HouseholdRecord> houses,
             std::span<const std::string> appliance_ids) override {
        entries_.clear();
        for (const auto& id : appliance_ids) {
            const Pooled pooled = pool_samples(houses, id);
            if (pooled.all.empty()) {
                throw EmptyInputError("mean_predictor: appliance '" + id +
                                      "' has no present training samples");
            }
            entries_.push_back(Entry{id, mean_of(pooled.all)});
        }
    }

    std::vector<std::vector<double>> predict(const PowerSeries& aggregate) const override {
        std::vector<std::vector<double>> columns;
        columns.reserve(entries_.size());
        for (const auto& e : entries_) {
            columns.emplace_back(aggregate.size(), e.mean);
        }
        return columns;
    }

private:
    struct Entry {
        std::string id;
        double mean = 0.0;
    };

    std::vector<Entry> entries_;
};

} // namespace

std::unique_ptr<Disaggregator> make_co(const Json& params) {
    check_param_keys(params, {"num_states", "max_combinations"}, "co");
    std::size_t num_states = kDefaultNumStates;
    std::size_t max_combinations = kDefaultMaxCombinations;
    if (params.is_object() && params.contains("num_states")) {
        if (!params["num_states"].is_number_integer() || params["num_states"].get<std::int64_t>() < 0) {
            throw ConfigError("co: num_states must be a non-negative integer");
        }
        num_states = params["num_states"].get<std::size_t>();
    }
    if (params.is_object() && params.contains("max_combinations")) {
        if (!params["max_combinations"].is_number_integer() ||
            params["max_combinations"].get<std::int64_t>() < 0) {
            throw ConfigError("co: max_combinations must be a non-negative integer");
        }
        max_combinations = params["max_combinations"].get<std::size_t>();
    }
    return std::make_unique<CoDisaggregator>(num_states, max_combinations);
}

std::unique_ptr<Disaggregator> make_edge_match(const Json& params) {
    check_param_keys(params, {"edge_threshold_w", "tolerance_w"}, "edge_match");
    double edge_threshold = kDefaultEdgeThreshold;
    double tolerance = kDefaultEdgeTolerance;
    if (params.is_object() && params.contains("edge_threshold_w")) {
        if (!params["edge_threshold_w"].is_number()) {
            throw ConfigError("edge_match: edge_threshold_w must be a number");
        }
        edge_threshold = params["edge_threshold_w"].get<double>();
    }
    if (params.is_object() && params.contains("tolerance_w")) {
        if (!params["tolerance_w"].is_number()) {
            throw ConfigError("edge_match: tolerance_w must be a number");
        }
        tolerance = params["tolerance_w"].get<double>();
    }
    return std::make_unique<EdgeMatchDisaggregator>(edge_threshold, tolerance);
}

std::unique_ptr<Disaggregator> make_always_off(const Json& params) {
    check_param_keys(params, {}, "always_off");
    return std::make_unique<AlwaysOffDisaggregator>();
}

std::unique_ptr<Disaggregator> make_mean_predictor(const Json& params) {
    check_param_keys(params, {}, "mean_predictor");
    return std::make_unique<MeanPredictorDisaggregator>();
}

std::unique_ptr<Disaggregator> make_disaggregator(const std::string& algorithm_id, const Json& params) {
    if (algorithm_id == "co") return make_co(params);
    if (algorithm_id == "edge_match") return make_edge_match(params);
    if (algorithm_id == "always_off") return make_always_off(params);
    if (algorithm_id == "mean_predictor") return make_mean_predictor(params);
    throw ConfigError("unknown algorithm '" + algorithm_id + "'");
}

std::unique_ptr<Disaggregator> disaggregator_from_json(const Json& model) {
    const auto algorithm = jsonutil::require_string(model, "algorithm", "stored model");
    const Json params = model.contains("params") ? model["params"] : Json::object();
    auto instance = make_disaggregator(algorithm, params);
    if (auto* co = dynamic_cast<CoDisaggregator*>(instance.get())) {
        co->restore(model);
    } else if (auto* edge = dynamic_cast<EdgeMatchDisaggregator*>(instance.get())) {
        edge->restore(model);
    } else if (auto* off = dynamic_cast<AlwaysOffDisaggregator*>(instance.get())) {
        off->restore(model);
    } else if (auto* mp = dynamic_cast<MeanPredictorDisaggregator*>(instance.get())) {
        mp->restore(model);
    }
    return instance;
}

} // namespace nilmeval
