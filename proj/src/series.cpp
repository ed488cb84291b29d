#include "nilmeval/series.hpp"

#include "nilmeval/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace nilmeval {

namespace {

// Upper bound on resample output length; guards against a gcd-inferred
// interval of 1 s applied to a multi-year file.
constexpr std::int64_t kMaxResampleSamples = 100'000'000;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    const std::int64_t q = a / b;
    const std::int64_t r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

} // namespace

PowerSeries::PowerSeries(std::int64_t start, std::int64_t interval, std::vector<double> values)
    : start_(start), interval_(interval), values_(std::move(values)) {
    if (interval_ <= 0) {
        throw DomainError("PowerSeries: interval must be > 0, got " + std::to_string(interval_));
    }
    if (values_.empty()) {
        throw DomainError("PowerSeries: at least one sample required");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (is_missing(v)) continue;
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError("PowerSeries: sample " + std::to_string(i) + " is " + std::to_string(v) +
                              "; power must be finite and non-negative");
        }
    }
}

std::size_t PowerSeries::missing_count() const {
    return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), is_missing));
}

PowerSeries PowerSeries::slice(std::int64_t from, std::int64_t to) const {
    if (from >= to) {
        throw DomainError("PowerSeries::slice: empty window [" + std::to_string(from) + ", " + std::to_string(to) + ")");
    }
    const std::int64_t lo = std::max(from, start_);
    const std::int64_t hi = std::min(to, end_time());
    if (lo >= hi) {
        throw DomainError("PowerSeries::slice: window [" + std::to_string(from) + ", " + std::to_string(to) +
                          ") does not intersect series range [" + std::to_string(start_) + ", " +
                          std::to_string(end_time()) + ")");
    }
    // First sample index whose timestamp is >= lo.
    const std::int64_t first = (lo - start_ + interval_ - 1) / interval_;
    const std::int64_t last = (hi - start_ - 1) / interval_; // inclusive
    if (first > last) {
        throw DomainError("PowerSeries::slice: window contains no sample timestamps");
    }
    std::vector<double> out(values_.begin() + first, values_.begin() + last + 1);
    return PowerSeries(start_ + first * interval_, interval_, std::move(out));
}

PowerSeries resample(std::span<const Reading> readings, std::int64_t interval) {
    if (readings.empty()) {
        throw EmptyInputError("resample: at least one reading required");
    }
    return resample(readings, interval, readings.front().timestamp);
}

PowerSeries resample(std::span<const Reading> readings, std::int64_t interval, std::int64_t anchor) {
    if (interval <= 0) {
        throw DomainError("resample: interval must be > 0, got " + std::to_string(interval));
    }
    if (readings.empty()) {
        throw EmptyInputError("resample: at least one reading required");
    }
    for (std::size_t i = 0; i < readings.size(); ++i) {
        const Reading& r = readings[i];
        if (!std::isfinite(r.watts) || r.watts < 0.0) {
            throw DomainError("resample: reading " + std::to_string(i) + " has power " + std::to_string(r.watts) +
                              "; must be finite and non-negative");
        }
        if (i > 0 && readings[i].timestamp <= readings[i - 1].timestamp) {
            throw OrderingError("resample: timestamps not strictly increasing at reading " + std::to_string(i));
        }
    }

    const std::int64_t first = readings.front().timestamp;
    const std::int64_t last = readings.back().timestamp;
    const std::int64_t start = anchor + floor_div(first - anchor, interval) * interval;
    const std::int64_t buckets = (last - start) / interval + 1;
    if (buckets > kMaxResampleSamples) {
        throw CapacityError("resample: would produce " + std::to_string(buckets) +
                            " samples; pass a coarser interval");
    }

    std::vector<double> sums(static_cast<std::size_t>(buckets), 0.0);
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(buckets), 0);
    for (const Reading& r : readings) {
        const auto b = static_cast<std::size_t>((r.timestamp - start) / interval);
        sums[b] += r.watts;
        counts[b] += 1;
    }
    std::vector<double> values(static_cast<std::size_t>(buckets), kMissing);
    for (std::size_t b = 0; b < values.size(); ++b) {
        if (counts[b] > 0) values[b] = sums[b] / counts[b];
    }
    return PowerSeries(start, interval, std::move(values));
}

PowerSeries resample(const PowerSeries& series, std::int64_t interval) {
    std::vector<Reading> readings;
    readings.reserve(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        const double v = series.value_at(t);
        if (!is_missing(v)) {
            readings.push_back(Reading{series.timestamp_at(t), v});
        }
    }
    if (readings.empty()) {
        throw EmptyInputError("resample: series has no present samples");
    }
    return resample(readings, interval);
}

std::pair<PowerSeries, PowerSeries> align(const PowerSeries& a, const PowerSeries& b) {
    if (a.interval() != b.interval()) {
        throw AlignmentError("align: intervals differ (" + std::to_string(a.interval()) + " s vs " +
                             std::to_string(b.interval()) + " s)");
    }
    const std::int64_t step = a.interval();
    const std::int64_t phase = (a.start() - b.start()) % step;
    if (phase != 0) {
        throw EmptyOverlapError("align: sample grids never coincide (offset " + std::to_string(phase) + " s)");
    }
    const std::int64_t lo = std::max(a.start(), b.start());
    const std::int64_t hi = std::min(a.end_time(), b.end_time());
    if (lo >= hi) {
        throw EmptyOverlapError("align: series ranges do not overlap");
    }
    const auto n = static_cast<std::size_t>((hi - lo) / step);
    const auto ia = static_cast<std::size_t>((lo - a.start()) / step);
    const auto ib = static_cast<std::size_t>((lo - b.start()) / step);

    std::vector<double> va(n), vb(n);
    for (std::size_t k = 0; k < n; ++k) {
        double x = a.value_at(ia + k);
        double y = b.value_at(ib + k);
        if (is_missing(x) || is_missing(y)) {
            x = kMissing;
            y = kMissing;
        }
        va[k] = x;
        vb[k] = y;
    }
    return {PowerSeries(lo, step, std::move(va)), PowerSeries(lo, step, std::move(vb))};
}

} // namespace nilmeval
