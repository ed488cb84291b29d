#include "nilmeval/io.hpp"

#include "nilmeval/errors.hpp"
#include "nilmeval/json.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <system_error>
#include <utility>

namespace nilmeval {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

namespace detail {

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.emplace_back(trim(line.substr(pos)));
            break;
        }
        fields.emplace_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return fields;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& context) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end || text.empty()) {
        throw ParseError(context + ": '" + std::string(text) + "' is not a number");
    }
    return value;
}

std::int64_t parse_int64(std::string_view text, const std::string& context) {
    std::int64_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end || text.empty()) {
        throw ParseError(context + ": '" + std::string(text) + "' is not an integer");
    }
    return value;
}

} // namespace detail

namespace {

// File-stem safety: manifest appliance ids double as CSV file names.
bool is_safe_file_stem(const std::string& id) {
    if (id.empty() || id == "." || id == "..") return false;
    return std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

} // namespace

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<Reading> load_readings_csv(const std::filesystem::path& path, const CsvSpec& spec) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    const std::size_t need = std::max(spec.timestamp_column, spec.power_column) + 1;

    std::vector<Reading> readings;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = spec.expect_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        const std::string where = path.string() + ":" + std::to_string(line_no);
        const auto fields = detail::split_csv_line(line);
        if (fields.size() < need) {
            throw ParseError(where + ": expected at least " + std::to_string(need) + " columns, got " +
                             std::to_string(fields.size()));
        }
        Reading r;
        r.timestamp = detail::parse_int64(fields[spec.timestamp_column], where);
        r.watts = detail::parse_double(fields[spec.power_column], where);
        if (!std::isfinite(r.watts) || r.watts < 0.0) {
            throw DomainError(where + ": power must be finite and non-negative, got " +
                              std::string(fields[spec.power_column]));
        }
        if (!readings.empty() && r.timestamp <= readings.back().timestamp) {
            throw OrderingError(where + ": timestamp " + std::to_string(r.timestamp) +
                                " does not increase over previous " + std::to_string(readings.back().timestamp));
        }
        readings.push_back(r);
    }
    if (readings.empty()) {
        throw ParseError(path.string() + ": no data rows");
    }
    return readings;
}

PowerSeries load_series_csv(const std::filesystem::path& path, std::optional<std::int64_t> interval,
                            const CsvSpec& spec) {
    const auto readings = load_readings_csv(path, spec);
    std::int64_t step;
    if (interval) {
        step = *interval;
    } else {
        if (readings.size() < 2) {
            throw DomainError(path.string() + ": cannot infer a sample interval from a single reading");
        }
        std::int64_t g = 0;
        for (std::size_t i = 1; i < readings.size(); ++i) {
            g = std::gcd(g, readings[i].timestamp - readings[i - 1].timestamp);
        }
        step = g;
    }
    return resample(readings, step);
}

void write_series_csv(const std::filesystem::path& path, const PowerSeries& series) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "timestamp,power_w\n";
    for (std::size_t t = 0; t < series.size(); ++t) {
        const double v = series.value_at(t);
        if (is_missing(v)) continue;
        out << series.timestamp_at(t) << ',' << detail::format_double(v) << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

HouseholdRecord load_bundle(const std::filesystem::path& dir, std::int64_t interval,
                            const std::map<std::string, double>& threshold_overrides) {
    if (interval <= 0) {
        throw DomainError("load_bundle: interval must be > 0, got " + std::to_string(interval));
    }
    const auto manifest_path = dir / "house.json";
    const Json manifest = load_json_file(manifest_path);
    if (!manifest.is_object()) {
        throw ParseError(manifest_path.string() + ": manifest must be a JSON object");
    }
    if (!manifest.contains("house_id") || !manifest["house_id"].is_string() ||
        manifest["house_id"].get<std::string>().empty()) {
        throw ParseError(manifest_path.string() + ": 'house_id' must be a non-empty string");
    }
    const auto house_id = manifest["house_id"].get<std::string>();
    const auto dataset_id = manifest.value("dataset_id", std::string{});
    std::optional<double> noise_floor;
    if (manifest.contains("noise_floor")) {
        if (!manifest["noise_floor"].is_number()) {
            throw ParseError(manifest_path.string() + ": 'noise_floor' must be a number");
        }
        noise_floor = manifest["noise_floor"].get<double>();
    }
    if (!manifest.contains("appliances") || !manifest["appliances"].is_array() ||
        manifest["appliances"].empty()) {
        throw ParseError(manifest_path.string() + ": 'appliances' must be a non-empty array");
    }

    struct ManifestEntry {
        std::string id;
        double threshold;
    };
    std::vector<ManifestEntry> entries;
    for (const auto& item : manifest["appliances"]) {
        if (!item.is_object() || !item.contains("appliance_id") || !item["appliance_id"].is_string()) {
            throw ParseError(manifest_path.string() + ": each appliance needs a string 'appliance_id'");
        }
        ManifestEntry e;
        e.id = item["appliance_id"].get<std::string>();
        if (!is_safe_file_stem(e.id)) {
            throw ParseError(manifest_path.string() + ": appliance id '" + e.id +
                             "' is not usable as a file name");
        }
        e.threshold = kDefaultOnThreshold;
        if (item.contains("on_threshold")) {
            if (!item["on_threshold"].is_number()) {
                throw ParseError(manifest_path.string() + ": 'on_threshold' must be a number");
            }
            e.threshold = item["on_threshold"].get<double>();
        }
        if (const auto it = threshold_overrides.find(e.id); it != threshold_overrides.end()) {
            e.threshold = it->second;
        }
        entries.push_back(std::move(e));
    }

    const auto aggregate_readings = load_readings_csv(dir / "aggregate.csv");
    const std::int64_t anchor = aggregate_readings.front().timestamp;
    PowerSeries aggregate = resample(aggregate_readings, interval, anchor);

    std::vector<ApplianceTrace> traces;
    traces.reserve(entries.size());
    std::int64_t lo = aggregate.start();
    std::int64_t hi = aggregate.end_time();
    for (const auto& e : entries) {
        const auto readings = load_readings_csv(dir / (e.id + ".csv"));
        PowerSeries series = resample(readings, interval, anchor);
        lo = std::max(lo, series.start());
        hi = std::min(hi, series.end_time());
        traces.emplace_back(e.id, std::move(series), e.threshold);
    }
    if (lo >= hi) {
        throw EmptyOverlapError(dir.string() + ": appliance and aggregate files cover disjoint time ranges");
    }
    aggregate = aggregate.slice(lo, hi);
    for (auto& trace : traces) {
        trace.series = trace.series.slice(lo, hi);
    }
    return HouseholdRecord(house_id, dataset_id, std::move(aggregate), std::move(traces), noise_floor);
}

void write_bundle(const std::filesystem::path& dir, const HouseholdRecord& record) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    }

    Json manifest;
    manifest["house_id"] = record.house_id;
    manifest["dataset_id"] = record.dataset_id;
    if (record.noise_floor) {
        manifest["noise_floor"] = *record.noise_floor;
    }
    manifest["appliances"] = Json::array();
    for (const auto& trace : record.appliances) {
        if (!is_safe_file_stem(trace.appliance_id)) {
            throw DomainError("appliance id '" + trace.appliance_id + "' is not usable as a file name");
        }
        Json item;
        item["appliance_id"] = trace.appliance_id;
        item["on_threshold"] = trace.on_threshold;
        manifest["appliances"].push_back(std::move(item));
    }

    const auto manifest_path = dir / "house.json";
    std::ofstream out(manifest_path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + manifest_path.string() + " for writing");
    }
    out << manifest.dump(2) << '\n';
    if (!out) {
        throw IoError("write failed for " + manifest_path.string());
    }

    write_series_csv(dir / "aggregate.csv", record.aggregate);
    for (const auto& trace : record.appliances) {
        write_series_csv(dir / (trace.appliance_id + ".csv"), trace.series);
    }
}

} // namespace nilmeval
