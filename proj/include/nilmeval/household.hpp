#pragma once

#include "nilmeval/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nilmeval {

/// ON/OFF state of an appliance at one sample. Missing mirrors a missing power sample.
enum class State : unsigned char { Off = 0, On = 1, Missing = 2 };

/// Default ON/OFF threshold in watts, overridable per appliance.
inline constexpr double kDefaultOnThreshold = 15.0;

/**
 * @brief Ground-truth power trace of one appliance.
 *
 * The ON/OFF state at sample t is ON iff value(t) >= on_threshold; a missing
 * power sample has a missing state.
 */
struct ApplianceTrace {
    std::string appliance_id;
    PowerSeries series;
    double on_threshold = kDefaultOnThreshold;

    ApplianceTrace(std::string id, PowerSeries s, double threshold = kDefaultOnThreshold);
};

/// Threshold a power series into states. The boundary maps to ON (>=).
std::vector<State> derive_states(const PowerSeries& series, double on_threshold);
std::vector<State> derive_states(const ApplianceTrace& trace);

/**
 * @brief One household: aggregate meter series plus per-appliance ground truth.
 *
 * All appliance series share the aggregate's start, interval and length;
 * appliance ids are unique. noise_floor is set for generated houses only
 * (standard deviation of the synthetic error term, in watts).
 */
struct HouseholdRecord {
    std::string house_id;
    std::string dataset_id;
    PowerSeries aggregate;
    std::vector<ApplianceTrace> appliances;
    std::optional<double> noise_floor;

    HouseholdRecord(std::string house, std::string dataset, PowerSeries agg,
                    std::vector<ApplianceTrace> traces, std::optional<double> noise = std::nullopt);

    const ApplianceTrace* find_appliance(const std::string& appliance_id) const;

    /// Record restricted to timestamps in [from, to); every series is sliced identically.
    HouseholdRecord slice(std::int64_t from, std::int64_t to) const;
};

} // namespace nilmeval
