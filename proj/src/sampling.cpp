#include "vrdlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "vrdlab/profiler.hpp" // kNoFlip
#include "vrdlab/rng.hpp"

namespace vrdlab {

namespace {

std::vector<std::uint64_t> numeric(std::span<const std::uint64_t> series) {
    std::vector<std::uint64_t> out;
    out.reserve(series.size());
    for (std::uint64_t v : series)
        if (v != kNoFlip) out.push_back(v);
    if (out.empty()) throw ModelError("series has no numeric measurement");
    return out;
}

// C(M-k, N) / C(M, N) = prod_{i=0}^{k-1} (M-N-i)/(M-i); zero once the
// numerator runs out (k > M-N means every subset hits the low set).
double complement_ratio(std::uint64_t m, std::uint64_t n, std::uint64_t k) {
    if (n > m) throw ModelError("subset size exceeds series length");
    if (k > m - n) return 0.0;
    double r = 1.0;
    for (std::uint64_t i = 0; i < k; ++i)
        r *= static_cast<double>(m - n - i) / static_cast<double>(m - i);
    return r;
}

std::uint64_t count_at_most(const std::vector<std::uint64_t>& sorted,
                            double threshold) {
    std::uint64_t k = 0;
    while (k < sorted.size() && static_cast<double>(sorted[k]) <= threshold) ++k;
    return k;
}

} // namespace

double prob_find_min(std::span<const std::uint64_t> series, std::uint64_t n) {
    std::vector<std::uint64_t> vals = numeric(series);
    if (n == 0) throw ModelError("subset size must be positive");
    const std::uint64_t m = vals.size();
    const std::uint64_t lo = *std::min_element(vals.begin(), vals.end());
    const std::uint64_t k = std::count(vals.begin(), vals.end(), lo);
    return 1.0 - complement_ratio(m, n, k);
}

double expected_normalized_min(std::span<const std::uint64_t> series, std::uint64_t n) {
    std::vector<std::uint64_t> vals = numeric(series);
    if (n == 0) throw ModelError("subset size must be positive");
    const std::uint64_t m = vals.size();
    if (n > m) throw ModelError("subset size exceeds series length");
    std::sort(vals.begin(), vals.end());
    if (vals.front() == 0) throw ModelError("series minimum must be positive");

    // P(subset minimum sits at sorted position i, 1-based) is
    // C(M-i, N-1)/C(M, N); walk it multiplicatively starting at N/M.
    double weight = static_cast<double>(n) / static_cast<double>(m);
    double expected = 0.0;
    for (std::uint64_t i = 1;; ++i) {
        expected += weight * static_cast<double>(vals[i - 1]);
        if (i + n > m) break; // position M-N+1 is the last possible minimum
        // weight(i+1)/weight(i) = (M-i-N+1)/(M-i)
        weight *= static_cast<double>(m - i - n + 1) / static_cast<double>(m - i);
    }
    return expected / static_cast<double>(vals.front());
}

double prob_min_within_margin(std::span<const std::uint64_t> series,
                              std::uint64_t n, double margin) {
    if (margin < 0.0) throw ModelError("margin must be non-negative");
    std::vector<std::uint64_t> vals = numeric(series);
    if (n == 0) throw ModelError("subset size must be positive");
    const std::uint64_t m = vals.size();
    std::sort(vals.begin(), vals.end());
    const double threshold = (1.0 + margin) * static_cast<double>(vals.front());
    const std::uint64_t k = count_at_most(vals, threshold);
    return 1.0 - complement_ratio(m, n, k);
}

std::string to_string(SampleMetric m) {
    switch (m) {
        case SampleMetric::FindMin: return "find_min";
        case SampleMetric::NormalizedMin: return "normalized_min";
        case SampleMetric::WithinMargin: return "within_margin";
    }
    throw ModelError("unknown sample metric");
}

SampleMetric sample_metric_from_string(const std::string& s) {
    if (s == "find_min") return SampleMetric::FindMin;
    if (s == "normalized_min") return SampleMetric::NormalizedMin;
    if (s == "within_margin") return SampleMetric::WithinMargin;
    throw ConfigError("unknown sample metric: " + s);
}

MonteCarloResult monte_carlo_estimate(std::span<const std::uint64_t> series,
                                      std::uint64_t n, SampleMetric metric,
                                      double margin, std::uint64_t iterations,
                                      std::uint64_t seed) {
    std::vector<std::uint64_t> vals = numeric(series);
    if (n == 0 || n > vals.size()) throw ModelError("invalid subset size");
    if (iterations == 0) throw ModelError("need at least one iteration");
    const std::uint64_t m = vals.size();
    const std::uint64_t lo = *std::min_element(vals.begin(), vals.end());
    const double threshold = metric == SampleMetric::WithinMargin
                                 ? (1.0 + margin) * static_cast<double>(lo)
                                 : static_cast<double>(lo);

    RngStream stream(seed);
    std::vector<std::uint64_t> pool(vals);
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t it = 0; it < iterations; ++it) {
        // Partial Fisher-Yates with a per-iteration substream; swaps are
        // undone afterwards so the pool never needs re-initializing.
        RngStream sub = RngStream::derive(stream.seed(), {it});
        std::uint64_t subset_min = ~0ull;
        for (std::uint64_t j = 0; j < n; ++j) {
            std::uint64_t pick = j + sub.below(j, m - j);
            std::swap(pool[j], pool[pick]);
            subset_min = std::min(subset_min, pool[j]);
        }
        for (std::uint64_t j = n; j-- > 0;) {
            // replay the same picks to restore order
            std::uint64_t pick = j + sub.below(j, m - j);
            std::swap(pool[j], pool[pick]);
        }

        double x = 0.0;
        switch (metric) {
            case SampleMetric::FindMin:
                x = subset_min == lo ? 1.0 : 0.0;
                break;
            case SampleMetric::NormalizedMin:
                x = static_cast<double>(subset_min) / static_cast<double>(lo);
                break;
            case SampleMetric::WithinMargin:
                x = static_cast<double>(subset_min) <= threshold ? 1.0 : 0.0;
                break;
        }
        sum += x;
        sumsq += x * x;
    }

    MonteCarloResult r;
    r.iterations = iterations;
    const double cnt = static_cast<double>(iterations);
    r.estimate = sum / cnt;
    if (iterations > 1) {
        double var = (sumsq - sum * sum / cnt) / (cnt - 1.0);
        if (var < 0.0) var = 0.0;
        r.std_error = std::sqrt(var / cnt);
    }
    return r;
}

std::vector<std::pair<std::uint64_t, double>>
cv_scurve(std::span<const std::pair<std::uint64_t, double>> series_cvs) {
    if (series_cvs.empty()) throw ModelError("cv_scurve needs a nonempty campaign");
    std::map<std::uint64_t, double> per_row;
    for (const auto& [row, cv] : series_cvs) {
        auto [it, inserted] = per_row.emplace(row, cv);
        if (!inserted) it->second = std::max(it->second, cv);
    }
    std::vector<std::pair<std::uint64_t, double>> out(per_row.begin(), per_row.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.second < b.second || (a.second == b.second && a.first < b.first);
    });
    return out;
}

} // namespace vrdlab
