#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "vrdlab/errors.hpp"
#include "vrdlab/rng.hpp"

namespace vrdlab {

// Test-parameter enums. Values and names follow the standard DRAM
// reliability-testing vocabulary.
enum class DataPattern { Rowstripe0, Rowstripe1, Checkered0, Checkered1 };
enum class TAggOnClass { TRas, TRefi, NineTRefi };
enum class TemperatureClass { C50, C65, C80 };
enum class CellEncoding { True, Anti };

std::string to_string(DataPattern p);
std::string to_string(TAggOnClass t);
std::string to_string(TemperatureClass t);
DataPattern data_pattern_from_string(const std::string& s);
TAggOnClass t_aggon_class_from_string(const std::string& s);
TemperatureClass temperature_from_string(const std::string& s);

// Canonical aggressor-on-time values in nanoseconds (DDR4/DDR5 ballpark).
constexpr double kTRasNs = 32.0;
constexpr double kTRefiNs = 7800.0;
constexpr double kNineTRefiNs = 9.0 * kTRefiNs;

// Buckets an aggressor-on-time into the nearest canonical class.
TAggOnClass classify_t_aggon(double t_aggon_ns);
double t_aggon_ns_for(TAggOnClass c);

// One combination of test parameters; keys the modifier table.
struct Condition {
    DataPattern pattern = DataPattern::Checkered0;
    TAggOnClass t_aggon = TAggOnClass::TRas;
    TemperatureClass temperature = TemperatureClass::C50;

    auto operator<=>(const Condition&) const = default;
};

// Quantization grid for threshold values: points are
// grid_min, grid_min + step, ..., up to grid_max.
struct GridSpec {
    std::uint64_t min = 1;
    std::uint64_t max = 1;
    std::uint64_t step = 1;

    void validate() const;
    std::uint64_t point_count() const { return (max - min) / step + 1; }
    std::uint64_t highest_point() const { return min + (point_count() - 1) * step; }
    bool contains(std::uint64_t v) const {
        return v >= min && v <= max && (v - min) % step == 0;
    }
    // Round-to-nearest grid point, clamped to the grid range.
    std::uint64_t snap(double raw) const;
};

struct MixtureSpec {
    double weight = 0.0; // probability of drawing the second component
    double mean = 0.0;
    double stddev = 0.0;
};

enum class RdtFamily { Constant, DiscreteNormal, BimodalMixture, EmpiricalReplay };

std::string to_string(RdtFamily f);
RdtFamily rdt_family_from_string(const std::string& s);

// Generative description of a row's time-varying read-disturbance
// threshold: a distribution family plus the quantization grid the
// sweep can observe. Modifiers scale the distribution per test
// condition; unspecified conditions scale by 1.
class RdtModel {
public:
    static RdtModel constant(std::uint64_t value, GridSpec grid);
    static RdtModel discrete_normal(double mean, double stddev, GridSpec grid);
    static RdtModel bimodal(double mean, double stddev, MixtureSpec mixture, GridSpec grid);
    // Replay models default to a unit grid covering the replay values, so
    // draws reproduce the list verbatim.
    static RdtModel empirical_replay(std::vector<std::uint64_t> values);
    static RdtModel empirical_replay(std::vector<std::uint64_t> values, GridSpec grid);

    RdtFamily family() const { return family_; }
    double mean() const { return mean_; }
    double stddev() const { return stddev_; }
    const std::optional<MixtureSpec>& mixture() const { return mixture_; }
    const GridSpec& grid() const { return grid_; }
    const std::vector<std::uint64_t>& replay_values() const { return replay_; }

    void set_modifier(const Condition& c, double scale);
    double modifier(const Condition& c) const; // 1.0 when unset
    const std::map<Condition, double>& modifiers() const { return modifiers_; }

    void validate() const;

private:
    RdtModel() = default;

    RdtFamily family_ = RdtFamily::Constant;
    double mean_ = 0.0;
    double stddev_ = 0.0;
    std::optional<MixtureSpec> mixture_;
    GridSpec grid_;
    std::vector<std::uint64_t> replay_;
    std::map<Condition, double> modifiers_;
};

// A hammer session request against one row.
struct HammerRequest {
    std::uint64_t row_address = 0;
    std::uint64_t hammer_count = 0;   // activations per aggressor
    double t_aggon_ns = kTRasNs;
    DataPattern pattern = DataPattern::Checkered0;
    TemperatureClass temperature = TemperatureClass::C50;

    Condition condition() const {
        return Condition{pattern, classify_t_aggon(t_aggon_ns), temperature};
    }
    void validate() const;
};

// Per-row simulation state. The latent threshold is drawn once per
// measurement sweep and stays fixed until the next draw; hammer() only
// queries it. Each RowState owns an independent draw counter, so a
// fixed (stream, row) pair replays bit-for-bit.
class RowState {
public:
    RowState(std::uint64_t row_address, RdtModel model,
             CellEncoding encoding = CellEncoding::True);

    std::uint64_t row_address() const { return row_; }
    const RdtModel& model() const { return model_; }
    CellEncoding cell_encoding() const { return encoding_; }
    std::uint64_t draw_count() const { return draw_count_; }
    bool has_latent() const { return latent_.has_value(); }
    std::uint64_t latent_rdt() const;

    // Draws the sweep's latent threshold. Deterministic given
    // (stream, draw_count); each draw consumes a disjoint counter block.
    std::uint64_t draw_latent(const Condition& condition, const RngStream& stream);

    // Ends the current sweep: discards the latent value so the next
    // draw samples afresh. The draw counter keeps advancing.
    void invalidate_latent() { latent_.reset(); }

    // True iff this request's hammer count reaches the current latent
    // threshold. Throws if no draw has happened yet.
    bool hammer(const HammerRequest& req) const;

private:
    std::uint64_t row_ = 0;
    RdtModel model_;
    CellEncoding encoding_ = CellEncoding::True;
    std::optional<std::uint64_t> latent_;
    std::uint64_t draw_count_ = 0;
};

} // namespace vrdlab
