#pragma once

#include "nilmeval/household.hpp"
#include "nilmeval/json.hpp"
#include "nilmeval/series.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nilmeval {

struct ApplianceEstimate {
    std::string appliance_id;
    PowerSeries series;
};

/// Per-appliance power estimates on the aggregate's sample grid. Samples where
/// the aggregate was missing are missing in every estimate.
struct DisaggregationOutput {
    std::vector<ApplianceEstimate> estimates;

    const PowerSeries* find(const std::string& appliance_id) const;
};

/**
 * @brief Base class for aggregate-to-appliance disaggregators.
 *
 * train() pools the requested appliances across the training houses;
 * requesting an appliance a house lacks is a ConfigError. disaggregate()
 * before train() is a StateError. Trained models serialize to JSON and are
 * restored by disaggregator_from_json().
 */
class Disaggregator {
public:
    virtual ~Disaggregator() = default;

    virtual std::string_view algorithm_id() const = 0;

    void train(std::span<const HouseholdRecord> houses, std::span<const std::string> appliance_ids);

    DisaggregationOutput disaggregate(const PowerSeries& aggregate) const;

    bool trained() const { return trained_; }
    std::span<const std::string> appliance_ids() const { return appliance_ids_; }

    virtual Json to_json() const = 0;

protected:
    /// Model fitting after common validation; appliance order follows the request.
    virtual void fit(std::span<const HouseholdRecord> houses,
                     std::span<const std::string> appliance_ids) = 0;

    /// One value column per trained appliance, each aggregate.size() long.
    /// Missing-aggregate masking happens in the caller.
    virtual std::vector<std::vector<double>> predict(const PowerSeries& aggregate) const = 0;

    void mark_trained(std::vector<std::string> appliance_ids);

private:
    std::vector<std::string> appliance_ids_;
    bool trained_ = false;
};

/**
 * Exhaustive combinatorial search: the state combination whose power sum is
 * closest to `target`. `state_levels` holds each appliance's admissible power
 * levels (at least 2 each, sorted ascending from 0). Ties prefer the lower
 * total power, then the combination that puts earlier appliances in higher
 * states. Throws CapacityError when the combination count exceeds
 * `max_combinations`.
 */
std::vector<std::size_t> co_solve(std::span<const std::vector<double>> state_levels, double target,
                                  std::size_t max_combinations = std::size_t{1} << 20);

/**
 * 1-d k-means (quantile-initialised Lloyd) over ON samples. Returns at most
 * `clusters` strictly increasing positive levels; near-duplicate centers
 * (within half a watt) collapse into one.
 */
std::vector<double> cluster_on_levels(std::span<const double> on_samples, std::size_t clusters);

/// params: {"num_states": 3, "max_combinations": 1048576}. num_states counts
/// the OFF level, so 3 means OFF plus two ON levels fit from training data.
std::unique_ptr<Disaggregator> make_co(const Json& params = Json::object());

/// params: {"edge_threshold_w": 30.0, "tolerance_w": 20.0}. Steps in the
/// aggregate of at least edge_threshold_w match the nearest appliance ON
/// power within tolerance_w.
std::unique_ptr<Disaggregator> make_edge_match(const Json& params = Json::object());

/// Predicts 0 W everywhere; the natural floor for transfer comparisons.
std::unique_ptr<Disaggregator> make_always_off(const Json& params = Json::object());

/// Predicts each appliance's training mean (over all samples, ON and OFF).
std::unique_ptr<Disaggregator> make_mean_predictor(const Json& params = Json::object());

/// Factory over algorithm ids "co", "edge_match", "always_off",
/// "mean_predictor". Unknown ids and unknown param keys are ConfigErrors.
std::unique_ptr<Disaggregator> make_disaggregator(const std::string& algorithm_id,
                                                  const Json& params = Json::object());

/// Restores a trained model from Disaggregator::to_json() output.
std::unique_ptr<Disaggregator> disaggregator_from_json(const Json& model);

} // namespace nilmeval
