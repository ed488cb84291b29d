#include "nilmeval/synth.hpp"

#include "nilmeval/errors.hpp"
#include "nilmeval/rng.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

namespace nilmeval {

namespace {

// Stream purposes. Keyed per appliance index so one appliance's draws never
// shift another's.
constexpr std::uint64_t kPurposeNoise = 0;
constexpr std::uint64_t kPurposeCycle = 1;
constexpr std::uint64_t kPurposeRunCount = 2;
constexpr std::uint64_t kPurposeRun = 3;
constexpr std::uint64_t kPurposePerturb = 4;

constexpr std::int64_t kMaxSamples = 100'000'000;
constexpr double kSecondsPerDay = 86400.0;

double jitter_factor(Rng& rng, double jitter) {
    return 1.0 + jitter * (2.0 * rng.uniform01() - 1.0);
}

void fill_interval(std::vector<double>& values, double from_s, double to_s, double power,
                   std::int64_t interval) {
    if (to_s <= from_s || power == 0.0) return;
    const double first = std::ceil(from_s / static_cast<double>(interval));
    auto t = first <= 0.0 ? std::size_t{0} : static_cast<std::size_t>(first);
    for (; t < values.size(); ++t) {
        const double at = static_cast<double>(t) * static_cast<double>(interval);
        if (at >= to_s) break;
        if (at >= from_s) values[t] += power;
    }
}

std::vector<double> synth_cycling(const ApplianceSpec& a, std::size_t index, std::uint64_t seed,
                                  std::size_t n, std::int64_t interval, std::int64_t duration) {
    std::vector<double> values(n, 0.0);
    Rng rng(seed, rng_stream(kPurposeCycle, index));
    const std::int64_t cycles = (duration + a.period_s - 1) / a.period_s;
    for (std::int64_t c = 0; c < cycles; ++c) {
        const double power = a.on_power_w * jitter_factor(rng, a.jitter);
        const double on_dur = std::min(a.duty * static_cast<double>(a.period_s) * jitter_factor(rng, a.jitter),
                                       static_cast<double>(a.period_s));
        const double cycle_start = static_cast<double>(c * a.period_s);
        fill_interval(values, cycle_start, cycle_start + on_dur, power, interval);
    }
    return values;
}

std::vector<double> synth_runs(const ApplianceSpec& a, std::size_t index, std::uint64_t seed,
                               std::size_t n, std::int64_t interval, std::int64_t duration) {
    std::vector<double> values(n, 0.0);
    Rng count_rng(seed, rng_stream(kPurposeRunCount, index));
    const double expected = a.daily_rate * (static_cast<double>(duration) / kSecondsPerDay);
    const std::uint64_t count = count_rng.poisson(expected);

    struct Run {
        double start;
        double power_factor;
        double duration_factor;
    };
    Rng run_rng(seed, rng_stream(kPurposeRun, index));
    std::vector<Run> runs;
    runs.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Run r;
        r.start = run_rng.uniform01() * static_cast<double>(duration);
        r.power_factor = jitter_factor(run_rng, a.jitter);
        r.duration_factor = jitter_factor(run_rng, a.jitter);
        runs.push_back(r);
    }
    std::sort(runs.begin(), runs.end(), [](const Run& x, const Run& y) { return x.start < y.start; });

    for (const Run& r : runs) {
        double at = r.start;
        for (const Segment& seg : a.segments) {
            const double seg_dur = static_cast<double>(seg.duration_s) * r.duration_factor;
            fill_interval(values, at, at + seg_dur, seg.power_w * r.power_factor, interval);
            at += seg_dur;
        }
    }
    return values;
}

} // namespace

std::string_view to_string(PatternKind kind) {
    switch (kind) {
    case PatternKind::Cycling: return "cycling";
    case PatternKind::Program: return "program";
    case PatternKind::Spike: return "spike";
    }
    throw DomainError("unknown pattern kind");
}

PatternKind pattern_from_string(std::string_view name) {
    if (name == "cycling") return PatternKind::Cycling;
    if (name == "program") return PatternKind::Program;
    if (name == "spike") return PatternKind::Spike;
    throw ParseError("unknown pattern '" + std::string(name) + "'");
}

void validate(const ApplianceSpec& spec) {
    const std::string tag = "appliance '" + spec.appliance_id + "'";
    if (spec.appliance_id.empty()) {
        throw DomainError("appliance id must be non-empty");
    }
    if (!(spec.jitter >= 0.0) || spec.jitter >= 1.0) {
        throw DomainError(tag + ": jitter must lie in [0, 1)");
    }
    if (!(spec.on_threshold_w > 0.0)) {
        throw DomainError(tag + ": on_threshold must be positive");
    }
    switch (spec.pattern) {
    case PatternKind::Cycling:
        if (spec.period_s <= 0) throw DomainError(tag + ": period_s must be positive");
        if (!(spec.duty > 0.0) || spec.duty >= 1.0) throw DomainError(tag + ": duty must lie in (0, 1)");
        if (!(spec.on_power_w > 0.0)) throw DomainError(tag + ": on_power_w must be positive");
        break;
    case PatternKind::Spike:
        if (spec.segments.size() != 1) {
            throw DomainError(tag + ": a spike appliance takes exactly one segment");
        }
        [[fallthrough]];
    case PatternKind::Program:
        if (spec.segments.empty()) throw DomainError(tag + ": segments must be non-empty");
        for (const Segment& seg : spec.segments) {
            if (seg.duration_s <= 0) throw DomainError(tag + ": segment durations must be positive");
            if (!(seg.power_w >= 0.0) || !std::isfinite(seg.power_w)) {
                throw DomainError(tag + ": segment power must be finite and non-negative");
            }
        }
        if (!(spec.daily_rate > 0.0) || !std::isfinite(spec.daily_rate)) {
            throw DomainError(tag + ": daily_rate must be positive");
        }
        break;
    }
}

void validate(const HouseSpec& spec) {
    if (spec.house_id.empty()) {
        throw DomainError("house id must be non-empty");
    }
    if (spec.appliances.empty()) {
        throw EmptyInputError("house '" + spec.house_id + "' needs at least one appliance");
    }
    if (!(spec.base_load_w >= 0.0) || !std::isfinite(spec.base_load_w)) {
        throw DomainError("base_load_w must be finite and non-negative");
    }
    if (!(spec.noise_sigma_w >= 0.0) || !std::isfinite(spec.noise_sigma_w)) {
        throw DomainError("noise_sigma_w must be finite and non-negative");
    }
    std::unordered_set<std::string> ids;
    for (const auto& a : spec.appliances) {
        validate(a);
        if (!ids.insert(a.appliance_id).second) {
            throw DomainError("duplicate appliance id '" + a.appliance_id + "'");
        }
    }
}

HouseholdRecord generate(const HouseSpec& spec, std::int64_t start, std::int64_t duration_s,
                         std::int64_t interval_s) {
    validate(spec);
    if (interval_s <= 0) {
        throw DomainError("generate: interval must be > 0, got " + std::to_string(interval_s));
    }
    const std::int64_t n64 = duration_s / interval_s;
    if (n64 < 1) {
        throw DomainError("generate: duration shorter than one sample interval");
    }
    if (n64 > kMaxSamples) {
        throw CapacityError("generate: would produce " + std::to_string(n64) + " samples");
    }
    const auto n = static_cast<std::size_t>(n64);

    std::vector<double> aggregate(n, spec.base_load_w);
    std::vector<ApplianceTrace> traces;
    traces.reserve(spec.appliances.size());
    for (std::size_t i = 0; i < spec.appliances.size(); ++i) {
        const ApplianceSpec& a = spec.appliances[i];
        std::vector<double> values = a.pattern == PatternKind::Cycling
                                         ? synth_cycling(a, i, spec.seed, n, interval_s, duration_s)
                                         : synth_runs(a, i, spec.seed, n, interval_s, duration_s);
        for (std::size_t t = 0; t < n; ++t) aggregate[t] += values[t];
        traces.emplace_back(a.appliance_id, PowerSeries(start, interval_s, std::move(values)),
                            a.on_threshold_w);
    }

    Rng noise(spec.seed, rng_stream(kPurposeNoise, 0));
    for (std::size_t t = 0; t < n; ++t) {
        aggregate[t] = std::max(0.0, aggregate[t] + spec.noise_sigma_w * noise.normal());
    }

    return HouseholdRecord(spec.house_id, spec.dataset_id,
                           PowerSeries(start, interval_s, std::move(aggregate)), std::move(traces),
                           spec.noise_sigma_w);
}

HouseSpec perturb(const HouseSpec& spec, double scale, std::uint64_t new_seed) {
    validate(spec);
    if (!(scale >= 0.0) || scale >= 1.0) {
        throw DomainError("perturb: scale must lie in [0, 1)");
    }
    HouseSpec out = spec;
    out.seed = new_seed;

    const auto factor = [scale](Rng& rng) { return 1.0 + scale * (2.0 * rng.uniform01() - 1.0); };
    const auto scaled_duration = [](std::int64_t d, double f) {
        return std::max<std::int64_t>(1, std::llround(static_cast<double>(d) * f));
    };

    Rng house_rng(new_seed, rng_stream(kPurposePerturb, 0));
    out.base_load_w = spec.base_load_w * factor(house_rng);
    out.noise_sigma_w = spec.noise_sigma_w * factor(house_rng);

    for (std::size_t i = 0; i < out.appliances.size(); ++i) {
        ApplianceSpec& a = out.appliances[i];
        Rng rng(new_seed, rng_stream(kPurposePerturb, i + 1));
        a.on_power_w = a.on_power_w * factor(rng);
        a.period_s = scaled_duration(a.period_s, factor(rng));
        for (Segment& seg : a.segments) {
            seg.power_w = seg.power_w * factor(rng);
            seg.duration_s = scaled_duration(seg.duration_s, factor(rng));
        }
    }
    return out;
}

Json house_spec_to_json(const HouseSpec& spec) {
    Json j;
    j["house_id"] = spec.house_id;
    j["dataset_id"] = spec.dataset_id;
    j["seed"] = spec.seed;
    j["base_load_w"] = spec.base_load_w;
    j["noise_sigma_w"] = spec.noise_sigma_w;
    j["appliances"] = Json::array();
    for (const auto& a : spec.appliances) {
        Json e;
        e["appliance_id"] = a.appliance_id;
        e["pattern"] = std::string(to_string(a.pattern));
        switch (a.pattern) {
        case PatternKind::Cycling:
            e["period_s"] = a.period_s;
            e["duty"] = a.duty;
            e["on_power_w"] = a.on_power_w;
            break;
        case PatternKind::Program:
        case PatternKind::Spike:
            e["segments"] = Json::array();
            for (const Segment& seg : a.segments) {
                e["segments"].push_back(Json{{"duration_s", seg.duration_s}, {"power_w", seg.power_w}});
            }
            e["daily_rate"] = a.daily_rate;
            break;
        }
        e["jitter"] = a.jitter;
        e["on_threshold"] = a.on_threshold_w;
        j["appliances"].push_back(std::move(e));
    }
    return j;
}

HouseSpec house_spec_from_json(const Json& j) {
    const std::string ctx = "house spec";
    HouseSpec spec;
    spec.house_id = jsonutil::require_string(j, "house_id", ctx);
    spec.dataset_id = jsonutil::string_or(j, "dataset_id", "synthetic", ctx);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) throw ParseError(ctx + ": field 'seed' must be an integer");
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    spec.base_load_w = jsonutil::number_or(j, "base_load_w", 0.0, ctx);
    spec.noise_sigma_w = jsonutil::number_or(j, "noise_sigma_w", 0.0, ctx);

    const Json& apps = jsonutil::require(j, "appliances", ctx);
    if (!apps.is_array()) {
        throw ParseError(ctx + ": field 'appliances' must be an array");
    }
    for (const Json& e : apps) {
        ApplianceSpec a;
        a.appliance_id = jsonutil::require_string(e, "appliance_id", ctx);
        const std::string actx = ctx + " appliance '" + a.appliance_id + "'";
        a.pattern = pattern_from_string(jsonutil::require_string(e, "pattern", actx));
        switch (a.pattern) {
        case PatternKind::Cycling:
            a.period_s = jsonutil::require_int(e, "period_s", actx);
            a.duty = jsonutil::require_number(e, "duty", actx);
            a.on_power_w = jsonutil::require_number(e, "on_power_w", actx);
            break;
        case PatternKind::Program:
        case PatternKind::Spike: {
            const Json& segs = jsonutil::require(e, "segments", actx);
            if (!segs.is_array()) throw ParseError(actx + ": field 'segments' must be an array");
            for (const Json& s : segs) {
                Segment seg;
                seg.duration_s = jsonutil::require_int(s, "duration_s", actx);
                seg.power_w = jsonutil::require_number(s, "power_w", actx);
                a.segments.push_back(seg);
            }
            a.daily_rate = jsonutil::require_number(e, "daily_rate", actx);
            break;
        }
        }
        a.jitter = jsonutil::number_or(e, "jitter", 0.0, actx);
        a.on_threshold_w = jsonutil::number_or(e, "on_threshold", kDefaultOnThreshold, actx);
        spec.appliances.push_back(std::move(a));
    }
    validate(spec);
    return spec;
}

Json synth_job_to_json(const SynthJob& job) {
    Json j;
    j["house"] = house_spec_to_json(job.house);
    j["start"] = job.start;
    j["duration_s"] = job.duration_s;
    j["interval_s"] = job.interval_s;
    j["unseen_count"] = job.unseen_count;
    j["perturbation_scale"] = job.perturbation_scale;
    return j;
}

SynthJob synth_job_from_json(const Json& j) {
    const std::string ctx = "synth job";
    SynthJob job;
    job.house = house_spec_from_json(jsonutil::require(j, "house", ctx));
    job.start = j.contains("start") ? jsonutil::require_int(j, "start", ctx) : 0;
    job.duration_s = jsonutil::require_int(j, "duration_s", ctx);
    job.interval_s = j.contains("interval_s") ? jsonutil::require_int(j, "interval_s", ctx) : 10;
    const std::int64_t unseen = j.contains("unseen_count") ? jsonutil::require_int(j, "unseen_count", ctx) : 0;
    if (unseen < 0) {
        throw ParseError(ctx + ": unseen_count must be non-negative");
    }
    job.unseen_count = static_cast<std::size_t>(unseen);
    job.perturbation_scale = jsonutil::number_or(j, "perturbation_scale", 0.0, ctx);
    return job;
}

std::vector<HouseholdRecord> run_synth_job(const SynthJob& job) {
    std::vector<HouseholdRecord> records;
    records.reserve(1 + job.unseen_count);
    records.push_back(generate(job.house, job.start, job.duration_s, job.interval_s));
    for (std::size_t i = 1; i <= job.unseen_count; ++i) {
        HouseSpec variant = perturb(job.house, job.perturbation_scale, job.house.seed + i);
        variant.house_id = job.house.house_id + "-u" + std::to_string(i);
        records.push_back(generate(variant, job.start, job.duration_s, job.interval_s));
    }
    return records;
}

} // namespace nilmeval
