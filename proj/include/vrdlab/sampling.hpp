#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vrdlab/errors.hpp"

namespace vrdlab {

// Subset metrics over a measurement series: how well do N of its M
// values recover the series minimum? Subsets are drawn uniformly
// WITHOUT replacement; this is what makes a once-occurring minimum
// found with probability exactly N/M. NoFlip sentinels are dropped
// before any computation, so M always counts numeric values.

// P(an N-subset contains the series minimum) = 1 - C(M-k,N)/C(M,N)
// with k the multiplicity of the minimum. Computed as a telescoped
// k-term product, so small-k cases are exact.
double prob_find_min(std::span<const std::uint64_t> series, std::uint64_t n);

// E[min of an N-subset] / (series minimum), via order statistics:
// E[min] = sum_i v_(i) * C(M-i, N-1)/C(M, N). Always >= 1, equals 1
// at N = M.
double expected_normalized_min(std::span<const std::uint64_t> series, std::uint64_t n);

// P(min of an N-subset <= (1+margin) * series minimum). margin = 0
// degenerates to prob_find_min.
double prob_min_within_margin(std::span<const std::uint64_t> series,
                              std::uint64_t n, double margin);

enum class SampleMetric { FindMin, NormalizedMin, WithinMargin };

std::string to_string(SampleMetric m);
SampleMetric sample_metric_from_string(const std::string& s);

struct MonteCarloResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t iterations = 0;
};

// Monte-Carlo counterpart of the exact metrics: iterations i.i.d.
// uniform N-subsets without replacement. Each iteration draws from its
// own counter-based substream, so the result is deterministic for a
// given seed no matter how iterations are scheduled.
MonteCarloResult monte_carlo_estimate(std::span<const std::uint64_t> series,
                                      std::uint64_t n, SampleMetric metric,
                                      double margin, std::uint64_t iterations,
                                      std::uint64_t seed);

// Per-row maximum coefficient of variation across parameter
// combinations, sorted ascending by CV. Input: one (row, cv) entry per
// measured series.
std::vector<std::pair<std::uint64_t, double>>
cv_scurve(std::span<const std::pair<std::uint64_t, double>> series_cvs);

} // namespace vrdlab
