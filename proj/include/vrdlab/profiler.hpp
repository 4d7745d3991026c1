#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vrdlab/device_model.hpp"

namespace vrdlab {

// Sentinel recorded when no hammer count within the sweep range induces
// a bitflip. Real thresholds are always positive, so 0 is free.
constexpr std::uint64_t kNoFlip = 0;

// Upper bound for the bootstrap sweep that seeds the threshold guess.
// Thresholds beyond this are outside the search space we model.
constexpr std::uint64_t kBootstrapCeiling = 500'000;

// Sweep parameters derived from a guessed threshold: half the guess up
// to three times the guess, stepping by a hundredth of the guess.
struct SweepConfig {
    std::uint64_t rdt_guess = 0;
    std::uint64_t rdt_min = 0;
    std::uint64_t rdt_max = 0;
    std::uint64_t rdt_step = 1;
    std::uint64_t iterations = 0;

    static SweepConfig from_guess(std::uint64_t guess, std::uint64_t iterations);
    void validate() const;
    std::uint64_t grid_points() const { return (rdt_max - rdt_min) / rdt_step + 1; }
};

// An ordered series of threshold measurements for one row under one
// combination of test parameters. Values are grid points or kNoFlip.
struct MeasurementSeries {
    std::uint64_t row_address = 0;
    SweepConfig config;
    DataPattern pattern = DataPattern::Checkered0;
    double t_aggon_ns = kTRasNs;
    TemperatureClass temperature = TemperatureClass::C50;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> values;

    std::size_t noflip_count() const;
    std::vector<std::uint64_t> numeric_values() const; // sentinels dropped
};

// Mean threshold across n quick measurements over the model's own grid
// (capped at kBootstrapCeiling), rounded to the nearest integer.
// Throws ModelError if the grid starts above the ceiling or every
// bootstrap measurement comes back without a flip.
std::uint64_t guess_rdt(RowState& row, DataPattern pattern, double t_aggon_ns,
                        TemperatureClass temperature, const RngStream& stream,
                        unsigned n = 10,
                        std::uint64_t ceiling = kBootstrapCeiling);

struct VictimGuess {
    std::uint64_t rdt_guess = 0;
    std::uint64_t row_address = 0;
};

// First row (ascending address) whose guessed threshold falls below the
// cutoff. Rows whose bootstrap cannot produce a guess are skipped.
// Throws NotFoundError when no row qualifies.
VictimGuess find_victim(std::span<RowState> rows, DataPattern pattern,
                        double t_aggon_ns, TemperatureClass temperature,
                        const RngStream& stream,
                        std::uint64_t threshold = 40'000);

// One sweep: draw a fresh latent threshold, then walk the hammer-count
// grid upward and report the first count that flips, or kNoFlip.
std::uint64_t measure_rdt_once(RowState& row, const SweepConfig& config,
                               DataPattern pattern, double t_aggon_ns,
                               TemperatureClass temperature,
                               const RngStream& stream);

// config.iterations independent sweeps, in order. Deterministic given
// (row state, seed). NoFlip outcomes are recorded, never retried.
MeasurementSeries test_loop(RowState& row, const SweepConfig& config,
                            DataPattern pattern, double t_aggon_ns,
                            TemperatureClass temperature, std::uint64_t seed);

} // namespace vrdlab
