#include "vrdlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "vrdlab/profiler.hpp" // kNoFlip

namespace vrdlab {

namespace {

std::vector<double> numeric_as_double(std::span<const std::uint64_t> series,
                                      std::uint64_t* noflips = nullptr) {
    std::vector<double> out;
    out.reserve(series.size());
    std::uint64_t skipped = 0;
    for (std::uint64_t v : series) {
        if (v == kNoFlip) {
            ++skipped;
            continue;
        }
        out.push_back(static_cast<double>(v));
    }
    if (noflips) *noflips = skipped;
    return out;
}

double median_of(std::span<const double> sorted) {
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

} // namespace

SeriesStats summarize(std::span<const std::uint64_t> series) {
    SeriesStats s;
    std::vector<double> vals = numeric_as_double(series, &s.noflip_count);
    if (vals.empty()) throw ModelError("series has no numeric measurement");
    s.sample_count = vals.size();

    double sum = 0.0;
    for (double v : vals) sum += v;
    s.mean = sum / static_cast<double>(vals.size());

    double ss = 0.0;
    for (double v : vals) ss += (v - s.mean) * (v - s.mean);
    s.stddev = vals.size() > 1
                   ? std::sqrt(ss / static_cast<double>(vals.size() - 1))
                   : 0.0;
    s.cv = s.mean > 0.0 ? s.stddev / s.mean : 0.0;

    std::sort(vals.begin(), vals.end());
    s.min = vals.front();
    s.max = vals.back();
    s.median = median_of(vals);
    const std::size_t n = vals.size();
    if (n >= 2) {
        const std::size_t half = n / 2;
        s.q1 = median_of(std::span<const double>(vals.data(), half));
        s.q3 = median_of(std::span<const double>(vals.data() + (n - half), half));
    } else {
        s.q1 = s.q3 = vals.front();
    }

    std::vector<double> uniq(vals);
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    s.unique_values = uniq.size();

    // One equal-width bin per unique value across [min, max]; last bin
    // closed on the right.
    const std::size_t bins = uniq.size();
    s.histogram.assign(bins, {});
    const double width = (s.max - s.min) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        s.histogram[b].lo = s.min + width * static_cast<double>(b);
        s.histogram[b].hi = s.min + width * static_cast<double>(b + 1);
    }
    s.histogram.back().hi = s.max;
    for (double v : vals) {
        std::size_t b = bins == 1 || width == 0.0
                            ? 0
                            : static_cast<std::size_t>((v - s.min) / width);
        if (b >= bins) b = bins - 1;
        ++s.histogram[b].count;
    }
    return s;
}

RunLengthHistogram run_lengths(std::span<const std::uint64_t> series) {
    if (series.empty()) throw ModelError("run_lengths needs a nonempty series");
    RunLengthHistogram h;
    std::uint64_t run = 1;
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i] == series[i - 1]) {
            ++run;
        } else {
            ++h[run];
            run = 1;
        }
    }
    ++h[run];
    return h;
}

std::vector<double> acf(std::span<const double> series, std::size_t max_lag) {
    const std::size_t n = series.size();
    if (n <= max_lag) throw ModelError("series must be longer than max_lag");

    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);

    double denom = 0.0;
    for (double v : series) denom += (v - mean) * (v - mean);
    if (denom == 0.0) throw ModelError("acf undefined for zero-variance series");

    std::vector<double> out(max_lag + 1);
    out[0] = 1.0;
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double num = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t)
            num += (series[t] - mean) * (series[t + lag] - mean);
        out[lag] = num / denom;
    }
    return out;
}

std::vector<double> acf(std::span<const std::uint64_t> series, std::size_t max_lag) {
    std::vector<double> vals = numeric_as_double(series);
    return acf(std::span<const double>(vals), max_lag);
}

ChiSquareResult chi_square_normal_fit(std::span<const std::uint64_t> series,
                                      double alpha) {
    std::vector<double> vals = numeric_as_double(series);
    if (vals.size() < 2) throw ModelError("chi-square fit needs at least two values");
    const double n = static_cast<double>(vals.size());

    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (sd == 0.0) throw ModelError("chi-square fit needs at least two distinct values");

    std::sort(vals.begin(), vals.end());
    std::vector<double> uniq(vals);
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    if (uniq.size() < 2) throw ModelError("chi-square fit needs at least two distinct values");

    // Observed count per unique value; expected mass between midpoint
    // edges under the fitted normal (tails absorbed into the end bins).
    auto norm_cdf = [&](double x) {
        return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
    };
    const std::size_t u = uniq.size();
    std::vector<double> observed(u, 0.0), expected(u, 0.0);
    {
        std::size_t j = 0;
        for (double v : vals) {
            while (uniq[j] != v) ++j;
            observed[j] += 1.0;
        }
    }
    double prev_cdf = 0.0;
    for (std::size_t i = 0; i < u; ++i) {
        const double hi_edge =
            i + 1 < u ? norm_cdf(0.5 * (uniq[i] + uniq[i + 1])) : 1.0;
        expected[i] = n * (hi_edge - prev_cdf);
        prev_cdf = hi_edge;
    }

    // Merge adjacent bins left to right until each group expects >= 5;
    // a short tail group folds into its predecessor. This convention is
    // deliberately isolated here so it can be swapped wholesale.
    std::vector<double> mo, me;
    double co = 0.0, ce = 0.0;
    for (std::size_t i = 0; i < u; ++i) {
        co += observed[i];
        ce += expected[i];
        if (ce >= 5.0) {
            mo.push_back(co);
            me.push_back(ce);
            co = ce = 0.0;
        }
    }
    if (ce > 0.0 || co > 0.0) {
        if (me.empty()) throw ModelError("chi-square fit: expected counts too small");
        mo.back() += co;
        me.back() += ce;
    }
    if (mo.size() < 4)
        throw ModelError("chi-square fit: fewer than 4 bins after merging");

    ChiSquareResult r;
    r.bins = mo.size();
    r.dof = mo.size() - 3;
    for (std::size_t i = 0; i < mo.size(); ++i) {
        const double d = mo[i] - me[i];
        r.statistic += d * d / me[i];
    }
    boost::math::chi_squared dist(static_cast<double>(r.dof));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    r.reject = r.p_value < alpha;
    return r;
}

} // namespace vrdlab
