#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace nilmeval {

/// Sentinel for a missing sample. Stored as quiet NaN inside PowerSeries.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

/// One irregular meter reading: (unix timestamp in seconds, power in watts).
struct Reading {
    std::int64_t timestamp = 0;
    double watts = 0.0;
};

/**
 * @brief Uniformly sampled power series.
 *
 * Sample t carries the mean power over [start + t*interval, start + (t+1)*interval)
 * in watts. Timestamps are UTC integer seconds. A sample may be missing
 * (kMissing); every present sample is finite and non-negative. Immutable after
 * construction and safe to share across threads.
 */
class PowerSeries {
public:
    /// Validates interval > 0, length >= 1 and all present values finite and >= 0.
    PowerSeries(std::int64_t start, std::int64_t interval, std::vector<double> values);

    std::int64_t start() const { return start_; }
    std::int64_t interval() const { return interval_; }
    std::size_t size() const { return values_.size(); }
    /// One past the last covered timestamp: start + size * interval.
    std::int64_t end_time() const { return start_ + static_cast<std::int64_t>(values_.size()) * interval_; }

    std::int64_t timestamp_at(std::size_t index) const { return start_ + static_cast<std::int64_t>(index) * interval_; }
    double value_at(std::size_t index) const { return values_[index]; }
    std::span<const double> values() const { return values_; }

    bool same_grid(const PowerSeries& other) const {
        return start_ == other.start_ && interval_ == other.interval_ && values_.size() == other.values_.size();
    }

    std::size_t missing_count() const;

    /// Sub-series covering timestamps in [from, to). Throws DomainError when the
    /// intersection with this series is empty.
    PowerSeries slice(std::int64_t from, std::int64_t to) const;

private:
    std::int64_t start_;
    std::int64_t interval_;
    std::vector<double> values_;
};

/**
 * Bucket-mean resampling of irregular readings onto a uniform grid.
 *
 * Buckets are anchored at the first reading's timestamp and span
 * [first + k*interval, first + (k+1)*interval). Each output sample is the mean
 * of the readings in its bucket; empty buckets are missing. The output covers
 * the closed reading range, so the first and last samples are always present.
 *
 * Readings must be strictly increasing in time with non-negative finite power.
 */
PowerSeries resample(std::span<const Reading> readings, std::int64_t interval);

/// As above but with bucket boundaries at anchor + k*interval, so several files
/// resampled with one anchor land on a common grid phase. The output still
/// starts at the bucket containing the first reading.
PowerSeries resample(std::span<const Reading> readings, std::int64_t interval, std::int64_t anchor);

/// Resamples a uniform series by treating its present samples as readings.
/// At the native interval of a gap-free series this is the identity.
PowerSeries resample(const PowerSeries& series, std::int64_t interval);

/**
 * Restricts two equally-sampled series to their common timestamps.
 *
 * Outputs share start, interval and length; a sample missing in either input
 * is missing in both outputs. Throws AlignmentError on unequal intervals and
 * EmptyOverlapError when the series share no timestamps (disjoint ranges or
 * grids offset by a non-multiple of the interval).
 */
std::pair<PowerSeries, PowerSeries> align(const PowerSeries& a, const PowerSeries& b);

} // namespace nilmeval
