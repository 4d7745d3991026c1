#include "vrdlab/profiler.hpp"

#include <algorithm>
#include <cmath>

namespace vrdlab {

SweepConfig SweepConfig::from_guess(std::uint64_t guess, std::uint64_t iterations) {
    if (guess == 0) throw ModelError("rdt_guess must be positive");
    SweepConfig c;
    c.rdt_guess = guess;
    c.rdt_min = guess / 2;
    c.rdt_max = guess * 3;
    c.rdt_step = std::max<std::uint64_t>(1, (guess + 50) / 100); // round(guess/100)
    c.iterations = iterations;
    c.validate();
    return c;
}

void SweepConfig::validate() const {
    if (rdt_min == 0) throw ModelError("rdt_min must be positive");
    if (rdt_step == 0) throw ModelError("rdt_step must be positive");
    if (rdt_min >= rdt_max) throw ModelError("rdt_min must be below rdt_max");
    if ((rdt_max - rdt_min) / rdt_step < 1) throw ModelError("sweep needs at least two grid points");
}

std::size_t MeasurementSeries::noflip_count() const {
    return static_cast<std::size_t>(
        std::count(values.begin(), values.end(), kNoFlip));
}

std::vector<std::uint64_t> MeasurementSeries::numeric_values() const {
    std::vector<std::uint64_t> out;
    out.reserve(values.size());
    for (std::uint64_t v : values)
        if (v != kNoFlip) out.push_back(v);
    return out;
}

namespace {

// Shared sweep core: one latent draw, then walk the grid upward until
// the first flip. The device is only touched through hammer().
std::uint64_t sweep_once(RowState& row, std::uint64_t lo, std::uint64_t hi,
                         std::uint64_t step, DataPattern pattern,
                         double t_aggon_ns, TemperatureClass temperature,
                         const RngStream& stream) {
    Condition cond{pattern, classify_t_aggon(t_aggon_ns), temperature};
    row.draw_latent(cond, stream);

    HammerRequest req;
    req.row_address = row.row_address();
    req.t_aggon_ns = t_aggon_ns;
    req.pattern = pattern;
    req.temperature = temperature;

    const std::uint64_t points = (hi - lo) / step + 1;
    for (std::uint64_t k = 0; k < points; ++k) {
        req.hammer_count = lo + k * step;
        if (row.hammer(req)) return req.hammer_count;
    }
    return kNoFlip;
}

} // namespace

std::uint64_t guess_rdt(RowState& row, DataPattern pattern, double t_aggon_ns,
                        TemperatureClass temperature, const RngStream& stream,
                        unsigned n, std::uint64_t ceiling) {
    if (n == 0) throw ModelError("guess_rdt needs at least one measurement");
    const GridSpec& grid = row.model().grid();
    if (grid.min > ceiling)
        throw ModelError("model grid starts above the bootstrap ceiling");
    const std::uint64_t hi = std::min(grid.highest_point(), ceiling);

    double sum = 0.0;
    unsigned hits = 0;
    for (unsigned i = 0; i < n; ++i) {
        std::uint64_t v = sweep_once(row, grid.min, hi, grid.step, pattern,
                                     t_aggon_ns, temperature, stream);
        if (v == kNoFlip) continue;
        sum += static_cast<double>(v);
        ++hits;
    }
    if (hits == 0)
        throw ModelError("all bootstrap measurements yielded no flip for row " +
                         std::to_string(row.row_address()));
    return static_cast<std::uint64_t>(
        std::llround(sum / static_cast<double>(hits)));
}

VictimGuess find_victim(std::span<RowState> rows, DataPattern pattern,
                        double t_aggon_ns, TemperatureClass temperature,
                        const RngStream& stream, std::uint64_t threshold) {
    if (rows.empty()) throw ModelError("find_victim needs a nonempty row list");
    for (RowState& row : rows) {
        std::uint64_t guess;
        try {
            guess = guess_rdt(row, pattern, t_aggon_ns, temperature, stream);
        } catch (const ModelError&) {
            continue; // row never flips within the bootstrap range
        }
        if (guess < threshold) return VictimGuess{guess, row.row_address()};
    }
    throw NotFoundError("no row with guessed RDT below " + std::to_string(threshold));
}

std::uint64_t measure_rdt_once(RowState& row, const SweepConfig& config,
                               DataPattern pattern, double t_aggon_ns,
                               TemperatureClass temperature,
                               const RngStream& stream) {
    config.validate();
    // Highest grid point not exceeding rdt_max.
    const std::uint64_t hi =
        config.rdt_min + (config.rdt_max - config.rdt_min) / config.rdt_step * config.rdt_step;
    return sweep_once(row, config.rdt_min, hi, config.rdt_step, pattern,
                      t_aggon_ns, temperature, stream);
}

MeasurementSeries test_loop(RowState& row, const SweepConfig& config,
                            DataPattern pattern, double t_aggon_ns,
                            TemperatureClass temperature, std::uint64_t seed) {
    config.validate();
    MeasurementSeries series;
    series.row_address = row.row_address();
    series.config = config;
    series.pattern = pattern;
    series.t_aggon_ns = t_aggon_ns;
    series.temperature = temperature;
    series.seed = seed;
    series.values.reserve(config.iterations);

    RngStream stream = RngStream::derive(seed, {row.row_address()});
    for (std::uint64_t i = 0; i < config.iterations; ++i) {
        series.values.push_back(measure_rdt_once(row, config, pattern,
                                                 t_aggon_ns, temperature, stream));
    }
    return series;
}

} // namespace vrdlab
