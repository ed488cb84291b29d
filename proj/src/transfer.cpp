#include "nilmeval/transfer.hpp"

#include "nilmeval/errors.hpp"
#include "nilmeval/io.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace nilmeval {

namespace {

// Values far outside metric range would overflow the cent representation used
// for 2-decimal rounding long before this bound matters.
constexpr double kMaxRenderable = 1e15;

void require_renderable(double value, const char* what) {
    if (!std::isfinite(value) || std::abs(value) > kMaxRenderable) {
        throw DomainError(std::string(what) + " is not renderable: " + std::to_string(value));
    }
}

double mean(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

void validate_classification_score(double value, const char* what) {
    if (!(value >= 0.0) || value > 1.0) {
        throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(value));
    }
}

void validate_error_score(double value, const char* what) {
    if (!std::isfinite(value) || value < 0.0) {
        throw DomainError(std::string(what) + " must be finite and non-negative, got " +
                          std::to_string(value));
    }
}

void sort_and_check_unseen(std::vector<UnseenScore>& unseen) {
    std::sort(unseen.begin(), unseen.end(),
              [](const UnseenScore& a, const UnseenScore& b) { return a.house_id < b.house_id; });
    for (std::size_t i = 1; i < unseen.size(); ++i) {
        if (unseen[i].house_id == unseen[i - 1].house_id) {
            throw DomainError("duplicate unseen house '" + unseen[i].house_id + "' in transfer report");
        }
    }
}

std::string kind_name(MetricKind kind) {
    return kind == MetricKind::Classification ? "classification" : "regression";
}

} // namespace

std::string GeneralisationRatio::to_string() const {
    return std::to_string(seen) + ":" + std::to_string(unseen);
}

GeneralisationRatio GeneralisationRatio::from_string(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ParseError("generalisation ratio '" + text + "' lacks a ':'");
    }
    const std::int64_t seen = detail::parse_int64(text.substr(0, colon), "generalisation ratio seen count");
    const std::int64_t unseen =
        detail::parse_int64(text.substr(colon + 1), "generalisation ratio unseen count");
    if (seen < 0 || unseen < 0) {
        throw ParseError("generalisation ratio '" + text + "' has a negative count");
    }
    return GeneralisationRatio{static_cast<std::size_t>(seen), static_cast<std::size_t>(unseen)};
}

double g_loss_classification(double seen, double unseen) {
    if (!(seen > 0.0) || seen > 1.0) {
        throw DomainError("seen classification score must lie in (0, 1], got " + std::to_string(seen));
    }
    validate_classification_score(unseen, "unseen classification score");
    return 100.0 * (1.0 - unseen / seen);
}

double g_loss_regression(double seen, double unseen) {
    if (!std::isfinite(seen) || !(seen > 0.0)) {
        throw DomainError("seen error must be positive, got " + std::to_string(seen));
    }
    validate_error_score(unseen, "unseen error");
    return 100.0 * (unseen / seen - 1.0);
}

double mgl(std::span<const double> g_losses_pct) {
    if (g_losses_pct.empty()) {
        throw EmptyInputError("mgl: no generalisation losses to average");
    }
    for (double g : g_losses_pct) {
        if (!std::isfinite(g)) {
            throw DomainError("mgl: losses must be finite, got " + std::to_string(g));
        }
    }
    return mean(g_losses_pct);
}

double auh(std::span<const double> unseen_scores) {
    if (unseen_scores.empty()) {
        throw EmptyInputError("auh: no unseen scores to average");
    }
    for (double v : unseen_scores) {
        validate_classification_score(v, "unseen score");
    }
    return mean(unseen_scores);
}

double euh(std::span<const double> unseen_errors) {
    if (unseen_errors.empty()) {
        throw EmptyInputError("euh: no unseen errors to average");
    }
    for (double v : unseen_errors) {
        validate_error_score(v, "unseen error");
    }
    return mean(unseen_errors);
}

double round2(double value) {
    require_renderable(value, "value");
    return static_cast<double>(std::llround(value * 100.0)) / 100.0;
}

std::string format_fixed2(double value) {
    require_renderable(value, "value");
    const long long cents = std::llround(value * 100.0);
    const bool negative = cents < 0;
    const unsigned long long magnitude =
        negative ? -static_cast<unsigned long long>(cents) : static_cast<unsigned long long>(cents);
    const unsigned long long whole = magnitude / 100;
    const unsigned long long frac = magnitude % 100;
    std::string out;
    if (negative && magnitude != 0) out += '-';
    out += std::to_string(whole);
    out += '.';
    out += static_cast<char>('0' + frac / 10);
    out += static_cast<char>('0' + frac % 10);
    return out;
}

TransferReport TransferReport::build(std::string algorithm_id, std::string appliance_id, MetricId metric,
                                     SeenScore seen, std::vector<UnseenScore> unseen,
                                     GeneralisationRatio gr) {
    if (unseen.empty()) {
        throw EmptyInputError("transfer report needs at least one unseen score; use seen_only");
    }
    if (!(seen.value > 0.0)) {
        throw DomainError("transfer report needs a positive seen score; use without_g_loss");
    }
    TransferReport r;
    r.algorithm_id = std::move(algorithm_id);
    r.appliance_id = std::move(appliance_id);
    r.metric = metric;
    r.kind = kind_of(metric);
    r.gr = gr;
    r.seen = std::move(seen);
    r.unseen = std::move(unseen);
    sort_and_check_unseen(r.unseen);

    std::vector<double> values;
    std::vector<double> losses;
    values.reserve(r.unseen.size());
    losses.reserve(r.unseen.size());
    for (auto& u : r.unseen) {
        const double loss = r.kind == MetricKind::Classification
                                ? g_loss_classification(r.seen.value, u.value)
                                : g_loss_regression(r.seen.value, u.value);
        u.g_loss_pct = loss;
        values.push_back(u.value);
        losses.push_back(loss);
    }
    r.auh_or_euh = r.kind == MetricKind::Classification ? auh(values) : euh(values);
    r.mgl_pct = mgl(losses);

    const double rounded_seen = round2(r.seen.value);
    if (rounded_seen > 0.0) {
        const double rounded_mean = round2(*r.auh_or_euh);
        r.mgl_from_rounded_pct = r.kind == MetricKind::Classification
                                     ? g_loss_classification(rounded_seen, rounded_mean)
                                     : g_loss_regression(rounded_seen, rounded_mean);
    }
    return r;
}

TransferReport TransferReport::seen_only(std::string algorithm_id, std::string appliance_id,
                                         MetricId metric, SeenScore seen, GeneralisationRatio gr) {
    TransferReport r;
    r.algorithm_id = std::move(algorithm_id);
    r.appliance_id = std::move(appliance_id);
    r.metric = metric;
    r.kind = kind_of(metric);
    r.gr = gr;
    if (r.kind == MetricKind::Classification) {
        validate_classification_score(seen.value, "seen score");
    } else {
        validate_error_score(seen.value, "seen error");
    }
    r.seen = std::move(seen);
    return r;
}

TransferReport TransferReport::without_g_loss(std::string algorithm_id, std::string appliance_id,
                                              MetricId metric, SeenScore seen,
                                              std::vector<UnseenScore> unseen, GeneralisationRatio gr) {
    if (unseen.empty()) {
        throw EmptyInputError("transfer report needs at least one unseen score; use seen_only");
    }
    TransferReport r;
    r.algorithm_id = std::move(algorithm_id);
    r.appliance_id = std::move(appliance_id);
    r.metric = metric;
    r.kind = kind_of(metric);
    r.gr = gr;
    r.seen = std::move(seen);
    r.unseen = std::move(unseen);
    sort_and_check_unseen(r.unseen);

    std::vector<double> values;
    values.reserve(r.unseen.size());
    for (auto& u : r.unseen) {
        u.g_loss_pct.reset();
        values.push_back(u.value);
    }
    r.auh_or_euh = r.kind == MetricKind::Classification ? auh(values) : euh(values);
    return r;
}

TransferReport make_transfer_report(std::string algorithm_id, std::string appliance_id, MetricId metric,
                                    SeenScore seen, std::vector<UnseenScore> unseen,
                                    GeneralisationRatio gr) {
    if (unseen.empty()) {
        return TransferReport::seen_only(std::move(algorithm_id), std::move(appliance_id), metric,
                                         std::move(seen), gr);
    }
    if (!(seen.value > 0.0)) {
        return TransferReport::without_g_loss(std::move(algorithm_id), std::move(appliance_id), metric,
                                              std::move(seen), std::move(unseen), gr);
    }
    return TransferReport::build(std::move(algorithm_id), std::move(appliance_id), metric,
                                 std::move(seen), std::move(unseen), gr);
}

Json TransferReport::to_json() const {
    Json j;
    j["algorithm"] = algorithm_id;
    j["appliance"] = appliance_id;
    j["metric"] = std::string(nilmeval::to_string(metric));
    j["kind"] = kind_name(kind);
    j["gr"] = gr.to_string();

    Json s;
    s["house_id"] = seen.house_id;
    s["value"] = seen.value;
    s["degenerate"] = seen.degenerate;
    s["rendered"] = format_fixed2(seen.value);
    j["seen"] = std::move(s);

    j["unseen"] = Json::array();
    for (const auto& u : unseen) {
        Json e;
        e["house_id"] = u.house_id;
        e["value"] = u.value;
        e["degenerate"] = u.degenerate;
        e["rendered"] = format_fixed2(u.value);
        if (u.g_loss_pct) {
            e["g_loss_pct"] = *u.g_loss_pct;
            e["g_loss_rendered"] = format_fixed2(*u.g_loss_pct);
        }
        j["unseen"].push_back(std::move(e));
    }

    const char* mean_key = kind == MetricKind::Classification ? "auh" : "euh";
    if (auh_or_euh) {
        j[mean_key] = *auh_or_euh;
        j[std::string(mean_key) + "_rendered"] = format_fixed2(*auh_or_euh);
    }
    if (mgl_pct) {
        j["mgl_pct"] = *mgl_pct;
        j["mgl_rendered"] = format_fixed2(*mgl_pct);
    }
    if (mgl_from_rounded_pct) {
        j["mgl_from_rounded_pct"] = *mgl_from_rounded_pct;
        j["mgl_from_rounded_rendered"] = format_fixed2(*mgl_from_rounded_pct);
    }
    return j;
}

namespace {

const Json& require_field(const Json& j, const char* key) {
    if (!j.contains(key)) {
        throw ParseError(std::string("transfer report: missing field '") + key + "'");
    }
    return j.at(key);
}

} // namespace

TransferReport TransferReport::from_json(const Json& j) {
    TransferReport r;
    r.algorithm_id = require_field(j, "algorithm").get<std::string>();
    r.appliance_id = require_field(j, "appliance").get<std::string>();
    r.metric = metric_from_string(require_field(j, "metric").get<std::string>());
    r.kind = kind_of(r.metric);
    r.gr = GeneralisationRatio::from_string(require_field(j, "gr").get<std::string>());

    const Json& s = require_field(j, "seen");
    r.seen.house_id = require_field(s, "house_id").get<std::string>();
    r.seen.value = require_field(s, "value").get<double>();
    r.seen.degenerate = s.value("degenerate", false);

    for (const Json& e : require_field(j, "unseen")) {
        UnseenScore u;
        u.house_id = require_field(e, "house_id").get<std::string>();
        u.value = require_field(e, "value").get<double>();
        u.degenerate = e.value("degenerate", false);
        if (e.contains("g_loss_pct")) {
            u.g_loss_pct = e["g_loss_pct"].get<double>();
        }
        r.unseen.push_back(std::move(u));
    }

    const char* mean_key = r.kind == MetricKind::Classification ? "auh" : "euh";
    if (j.contains(mean_key)) {
        r.auh_or_euh = j.at(mean_key).get<double>();
    }
    if (j.contains("mgl_pct")) {
        r.mgl_pct = j["mgl_pct"].get<double>();
    }
    if (j.contains("mgl_from_rounded_pct")) {
        r.mgl_from_rounded_pct = j["mgl_from_rounded_pct"].get<double>();
    }
    return r;
}

namespace {

std::string render_mgl_cell(const TransferReport& r) {
    if (!r.mgl_from_rounded_pct) return "-";
    std::string cell = format_fixed2(*r.mgl_from_rounded_pct);
    if (*r.mgl_from_rounded_pct < 0.0 && cell != "0.00") {
        cell += " (gain)";
    }
    return cell;
}

} // namespace

std::string render_transfer_table(std::span<const TransferReport> reports) {
    const std::vector<std::string> header = {"algorithm", "appliance", "metric", "gr",
                                             "seen_house", "seen", "auh/euh", "mgl"};
    std::vector<std::vector<std::string>> rows;
    rows.push_back(header);
    for (const auto& r : reports) {
        rows.push_back({r.algorithm_id, r.appliance_id, std::string(to_string(r.metric)),
                        r.gr.to_string(), r.seen.house_id, format_fixed2(r.seen.value),
                        r.auh_or_euh ? format_fixed2(*r.auh_or_euh) : "-", render_mgl_cell(r)});
    }
    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += "  ";
            out += row[c];
            if (c + 1 < row.size()) {
                out.append(widths[c] - row[c].size(), ' ');
            }
        }
        out += '\n';
    }
    return out;
}

} // namespace nilmeval
