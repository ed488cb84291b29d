#pragma once

#include <nilmeval/series.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace testutil {

// Mixed tolerance: relative for large magnitudes, absolute below 1.
inline bool close(double a, double b, double tol) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
    return std::fabs(a - b) <= tol * scale;
}

// ---------------------------------------------------------------------------
// Reference metric implementations, written as plain loops so they share no
// code with the library. States: 0 = off, 1 = on, anything else = missing.

struct RefCounts {
    long long tp = 0;
    long long fp = 0;
    long long tn = 0;
    long long fn = 0;
};

inline RefCounts ref_count(const std::vector<int>& pred, const std::vector<int>& truth) {
    RefCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] > 1 || truth[i] > 1) continue;
        if (pred[i] == 1 && truth[i] == 1) {
            c.tp += 1;
        } else if (pred[i] == 1 && truth[i] == 0) {
            c.fp += 1;
        } else if (pred[i] == 0 && truth[i] == 1) {
            c.fn += 1;
        } else {
            c.tn += 1;
        }
    }
    return c;
}

inline double ref_accuracy(const RefCounts& c) {
    const double total = static_cast<double>(c.tp + c.fp + c.tn + c.fn);
    return static_cast<double>(c.tp + c.tn) / total;
}

inline double ref_precision(const RefCounts& c) {
    if (c.tp + c.fp == 0) return 0.0;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

inline double ref_recall(const RefCounts& c) {
    if (c.tp + c.fn == 0) return 0.0;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

inline double ref_f1(const RefCounts& c) {
    const double p = ref_precision(c);
    const double r = ref_recall(c);
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

// Regression references pair estimate[i] with truth[i]; NaN on either side
// drops the pair.

inline double ref_mae(const std::vector<double>& est, const std::vector<double>& truth) {
    double sum = 0.0;
    long long n = 0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        if (std::isnan(est[i]) || std::isnan(truth[i])) continue;
        sum += std::fabs(est[i] - truth[i]);
        n += 1;
    }
    return sum / static_cast<double>(n);
}

inline double ref_rmse(const std::vector<double>& est, const std::vector<double>& truth) {
    double sum = 0.0;
    long long n = 0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        if (std::isnan(est[i]) || std::isnan(truth[i])) continue;
        const double d = est[i] - truth[i];
        sum += d * d;
        n += 1;
    }
    return std::sqrt(sum / static_cast<double>(n));
}

inline double ref_nep(const std::vector<double>& est, const std::vector<double>& truth) {
    double err = 0.0;
    double tot = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        if (std::isnan(est[i]) || std::isnan(truth[i])) continue;
        err += std::fabs(est[i] - truth[i]);
        tot += truth[i];
    }
    return err / tot;
}

inline double ref_nde(const std::vector<double>& est, const std::vector<double>& truth) {
    double err = 0.0;
    double tot = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        if (std::isnan(est[i]) || std::isnan(truth[i])) continue;
        err += (est[i] - truth[i]) * (est[i] - truth[i]);
        tot += truth[i] * truth[i];
    }
    return std::sqrt(err / tot);
}

// ---------------------------------------------------------------------------
// Random instance generators. All draw from std::mt19937_64 so they are
// independent of the library's own generator.

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double missing_prob) {
    std::uniform_real_distribution<double> watts(0.0, 1000.0);
    std::uniform_real_distribution<double> gap(0.0, 1.0);
    std::vector<double> out(n);
    for (auto& v : out) {
        v = gap(rng) < missing_prob ? nilmeval::kMissing : watts(rng);
    }
    return out;
}

inline nilmeval::PowerSeries random_series(std::mt19937_64& rng, std::size_t n, double missing_prob,
                                           std::int64_t start = 0, std::int64_t interval = 10) {
    auto values = random_values(rng, n, missing_prob);
    bool any = false;
    for (double v : values) {
        any = any || !std::isnan(v);
    }
    if (!any) values[0] = 100.0; // series must hold at least one present sample
    return nilmeval::PowerSeries(start, interval, std::move(values));
}

// ---------------------------------------------------------------------------
// Filesystem scratch space, removed on scope exit.

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> serial{0};
        std::ostringstream name;
        name << "nilmeval-" << tag << "-" << ::getpid() << "-" << serial.fetch_add(1);
        path_ = std::filesystem::temp_directory_path() / name.str();
        std::filesystem::create_directories(path_);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace testutil
