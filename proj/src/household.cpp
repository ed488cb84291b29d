#include "nilmeval/household.hpp"

#include "nilmeval/errors.hpp"

#include <unordered_set>
#include <utility>

namespace nilmeval {

ApplianceTrace::ApplianceTrace(std::string id, PowerSeries s, double threshold)
    : appliance_id(std::move(id)), series(std::move(s)), on_threshold(threshold) {
    if (appliance_id.empty()) {
        throw DomainError("appliance id must be non-empty");
    }
    if (!(on_threshold > 0.0)) {
        throw DomainError("on_threshold must be positive for appliance '" + appliance_id + "'");
    }
}

std::vector<State> derive_states(const PowerSeries& series, double on_threshold) {
    if (!(on_threshold > 0.0)) {
        throw DomainError("on_threshold must be positive");
    }
    std::vector<State> states;
    states.reserve(series.size());
    for (double v : series.values()) {
        if (is_missing(v)) {
            states.push_back(State::Missing);
        } else {
            states.push_back(v >= on_threshold ? State::On : State::Off);
        }
    }
    return states;
}

std::vector<State> derive_states(const ApplianceTrace& trace) {
    return derive_states(trace.series, trace.on_threshold);
}

HouseholdRecord::HouseholdRecord(std::string house, std::string dataset, PowerSeries agg,
                                 std::vector<ApplianceTrace> traces, std::optional<double> noise)
    : house_id(std::move(house)),
      dataset_id(std::move(dataset)),
      aggregate(std::move(agg)),
      appliances(std::move(traces)),
      noise_floor(noise) {
    if (house_id.empty()) {
        throw DomainError("house id must be non-empty");
    }
    if (appliances.empty()) {
        throw EmptyInputError("household '" + house_id + "' needs at least one appliance trace");
    }
    std::unordered_set<std::string> seen_ids;
    for (const auto& trace : appliances) {
        if (!seen_ids.insert(trace.appliance_id).second) {
            throw DomainError("duplicate appliance id '" + trace.appliance_id + "' in household '" +
                              house_id + "'");
        }
        if (!trace.series.same_grid(aggregate)) {
            throw AlignmentError("appliance '" + trace.appliance_id + "' in household '" + house_id +
                                 "' is not on the aggregate's sample grid");
        }
    }
    if (noise_floor && !(*noise_floor >= 0.0)) {
        throw DomainError("noise_floor must be non-negative");
    }
}

const ApplianceTrace* HouseholdRecord::find_appliance(const std::string& appliance_id) const {
    for (const auto& trace : appliances) {
        if (trace.appliance_id == appliance_id) {
            return &trace;
        }
    }
    return nullptr;
}

HouseholdRecord HouseholdRecord::slice(std::int64_t from, std::int64_t to) const {
    std::vector<ApplianceTrace> traces;
    traces.reserve(appliances.size());
    for (const auto& trace : appliances) {
        traces.emplace_back(trace.appliance_id, trace.series.slice(from, to), trace.on_threshold);
    }
    return HouseholdRecord(house_id, dataset_id, aggregate.slice(from, to), std::move(traces),
                           noise_floor);
}

} // namespace nilmeval
