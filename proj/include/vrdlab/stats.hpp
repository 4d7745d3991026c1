#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "vrdlab/errors.hpp"

namespace vrdlab {

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::uint64_t count = 0;
};

// Descriptive summary of one measurement series. NoFlip sentinels are
// excluded from every statistic and reported via noflip_count.
// Quartiles follow the median-of-halves convention: Q1/Q3 are the
// medians of the lower/upper half of the sorted data (the overall
// median element is excluded when the count is odd). The histogram has
// one equal-width bin per unique value, spanning [min, max].
struct SeriesStats {
    double mean = 0.0;
    double stddev = 0.0; // sample stddev (n-1)
    double min = 0.0;
    double max = 0.0;
    double cv = 0.0; // stddev / mean
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    std::uint64_t unique_values = 0;
    std::vector<HistogramBin> histogram;
    std::uint64_t sample_count = 0; // numeric values
    std::uint64_t noflip_count = 0;
};

// Throws ModelError when the series has no numeric value.
SeriesStats summarize(std::span<const std::uint64_t> series);

// run length -> number of maximal runs of that length. Computed over
// the raw outcome sequence (sentinels are ordinary symbols), so
// sum(length * count) always equals the series length.
using RunLengthHistogram = std::map<std::uint64_t, std::uint64_t>;
RunLengthHistogram run_lengths(std::span<const std::uint64_t> series);

// Sample autocorrelation for lags 0..max_lag over a sentinel-free
// sequence; acf[0] == 1 exactly. Throws on zero variance or when the
// series is not longer than max_lag.
std::vector<double> acf(std::span<const std::uint64_t> series, std::size_t max_lag);
std::vector<double> acf(std::span<const double> series, std::size_t max_lag);

struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t bins = 0;     // after merging
    std::size_t dof = 0;      // bins - 3 (two fitted parameters)
    bool reject = false;      // p_value < alpha
};

// Goodness of fit against Normal(sample mean, sample stddev).
// Bins start as one bin per unique value (edges at midpoints between
// consecutive unique values, open-ended at both tails) and adjacent
// bins are merged left to right until every expected count is >= 5.
// Throws when fewer than two distinct values exist or fewer than four
// bins survive merging.
ChiSquareResult chi_square_normal_fit(std::span<const std::uint64_t> series,
                                      double alpha = 0.05);

} // namespace vrdlab
