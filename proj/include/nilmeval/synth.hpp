#pragma once

#include "nilmeval/household.hpp"
#include "nilmeval/json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nilmeval {

/// Shape of a synthetic appliance's consumption over time.
enum class PatternKind {
    Cycling, // periodic ON/OFF duty cycle (fridge-like)
    Program, // occasional multi-segment runs (washer-like)
    Spike,   // occasional single-segment bursts (kettle-like)
};

std::string_view to_string(PatternKind kind);
PatternKind pattern_from_string(std::string_view name);

/// One stretch of constant power inside a program run.
struct Segment {
    std::int64_t duration_s = 0;
    double power_w = 0.0;
};

/**
 * @brief Parameters of one synthetic appliance.
 *
 * Cycling uses period_s / duty / on_power_w. Program and Spike use segments
 * (Spike exactly one) fired daily_rate times per day on average. jitter is the
 * relative half-width of the per-cycle (or per-run) scaling of power and
 * duration: each gets an independent factor uniform in [1-jitter, 1+jitter].
 */
struct ApplianceSpec {
    std::string appliance_id;
    PatternKind pattern = PatternKind::Cycling;
    std::int64_t period_s = 0;
    double duty = 0.0;
    double on_power_w = 0.0;
    std::vector<Segment> segments;
    double daily_rate = 0.0;
    double jitter = 0.0;
    double on_threshold_w = kDefaultOnThreshold;
};

/// Parameters of one synthetic household.
struct HouseSpec {
    std::string house_id;
    std::string dataset_id = "synthetic";
    std::vector<ApplianceSpec> appliances;
    double base_load_w = 0.0;
    double noise_sigma_w = 0.0;
    std::uint64_t seed = 0;
};

/// Throws DomainError when a parameter is outside its documented range.
void validate(const ApplianceSpec& spec);
void validate(const HouseSpec& spec);

/**
 * Generates a household record covering floor(duration_s / interval_s) samples
 * from `start`. The aggregate is base load plus every appliance plus Gaussian
 * noise (sigma = noise_sigma_w), clamped at zero; appliance traces carry the
 * exact noise-free ground truth. Deterministic in (spec, start, duration,
 * interval): per-appliance randomness comes from independent streams keyed by
 * the appliance's position, so houses differing in one appliance still agree
 * on the others.
 */
HouseholdRecord generate(const HouseSpec& spec, std::int64_t start, std::int64_t duration_s,
                         std::int64_t interval_s);

/**
 * A copy of `spec` reseeded with `new_seed` whose continuous parameters
 * (base load, noise sigma, powers, periods, segment durations) are each
 * multiplied by an independent factor uniform in [1-scale, 1+scale]. Duty
 * cycles, daily rates, jitter and ON thresholds are kept, so the perturbed
 * house is the same kind of house with different hardware. scale must lie in
 * [0, 1).
 */
HouseSpec perturb(const HouseSpec& spec, double scale, std::uint64_t new_seed);

Json house_spec_to_json(const HouseSpec& spec);
HouseSpec house_spec_from_json(const Json& j);

/// A generation request: one base house plus `unseen_count` perturbed
/// variants (house ids suffixed -u1..-uN, seeds base+1..base+N).
struct SynthJob {
    HouseSpec house;
    std::int64_t start = 0;
    std::int64_t duration_s = 0;
    std::int64_t interval_s = 10;
    std::size_t unseen_count = 0;
    double perturbation_scale = 0.0;
};

Json synth_job_to_json(const SynthJob& job);
SynthJob synth_job_from_json(const Json& j);

/// Generates the base house followed by its perturbed variants.
std::vector<HouseholdRecord> run_synth_job(const SynthJob& job);

} // namespace nilmeval
