#pragma once

#include "nilmeval/household.hpp"
#include "nilmeval/json.hpp"
#include "nilmeval/series.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nilmeval {

/// Column layout of a readings CSV. Columns are zero-based.
struct CsvSpec {
    std::size_t timestamp_column = 0;
    std::size_t power_column = 1;
    bool expect_header = true;
};

/**
 * Reads (timestamp, watts) rows from a CSV file.
 *
 * Numbers are parsed locale-independently. Throws IoError when the file cannot
 * be opened, ParseError on a malformed row, OrderingError when timestamps are
 * not strictly increasing and DomainError on negative or non-finite power.
 * Error messages carry the 1-based line number.
 */
std::vector<Reading> load_readings_csv(const std::filesystem::path& path, const CsvSpec& spec = {});

/**
 * Loads a readings CSV onto a uniform grid.
 *
 * When interval is absent it is inferred as the gcd of the gaps between
 * consecutive timestamps; a single-reading file has no gaps, so inference
 * fails with DomainError.
 */
PowerSeries load_series_csv(const std::filesystem::path& path,
                            std::optional<std::int64_t> interval = std::nullopt,
                            const CsvSpec& spec = {});

/// Writes `timestamp,power_w` rows, one per present sample. Missing samples
/// are omitted, so a load at the same interval reproduces the series exactly.
void write_series_csv(const std::filesystem::path& path, const PowerSeries& series);

/**
 * @brief Loads a household bundle directory.
 *
 * Layout: house.json (manifest) beside aggregate.csv and one <appliance_id>.csv
 * per manifest appliance. All files are resampled to `interval` on a common
 * grid phase and trimmed to the range covered by every series.
 *
 * The ON threshold per appliance comes from `threshold_overrides` when present,
 * else from the manifest, else the 15 W default.
 */
HouseholdRecord load_bundle(const std::filesystem::path& dir, std::int64_t interval,
                            const std::map<std::string, double>& threshold_overrides = {});

/// Writes a household record as a bundle directory (manifest plus CSV files).
void write_bundle(const std::filesystem::path& dir, const HouseholdRecord& record);

/// Parses a JSON document from a file. Throws IoError when the file cannot be
/// opened and ParseError on malformed JSON.
Json load_json_file(const std::filesystem::path& path);

namespace detail {

/// Comma-split with whitespace trimming; quoting is not interpreted.
std::vector<std::string> split_csv_line(std::string_view line);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

/// Throw ParseError unless the whole string is one finite number / integer.
double parse_double(std::string_view text, const std::string& context);
std::int64_t parse_int64(std::string_view text, const std::string& context);

} // namespace detail

} // namespace nilmeval
