#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vrdlab/errors.hpp"

namespace vrdlab {

// DDR5 command timings in nanoseconds at 8800 MT/s. Defaults are the
// reference values this estimator is calibrated against; override at
// your own risk.
struct TimingParams {
    double t_rrd_s = 1.816;
    double t_ccd_s = 1.816;
    double t_ccd_l = 5.000;
    double t_ccd_l_wr = 20.000;
    double t_rcd = 14.090;
    double t_rp = 14.090;
    double t_ras = 32.000;
    double t_rtp = 7.500;
    double t_wr = 30.000;
    double t_refi = 7800.0;

    void validate() const;
};

enum class DramCommand { Act, Write, Read, Pre };
enum class CommandTarget { Victim, Agg1, Agg2 };

std::string to_string(DramCommand c);
std::string to_string(CommandTarget t);

// One schedule entry: a command issued `repeat` times, each followed by
// `delay_ns` before the next command may issue.
struct ScheduledCommand {
    DramCommand command = DramCommand::Act;
    CommandTarget target = CommandTarget::Victim;
    double delay_ns = 0.0;
    std::uint64_t repeat = 1;
};

using CommandSchedule = std::vector<ScheduledCommand>;

// Single-bank schedule for one threshold measurement: initialize the
// victim and both aggressors (ACT, 128 WRITEs, PRE each), hammer both
// aggressors hammer_count times (ACT held for t_aggon, then PRE), and
// read the victim back (ACT, 128 READs).
CommandSchedule build_single_bank_schedule(std::uint64_t hammer_count,
                                           double t_aggon_ns,
                                           const TimingParams& tp = {});

// 16-bank variant: row initializations are interleaved across banks
// (16 ACTs spaced by tRRD_S, 2032 WRITEs spaced by tCCD_S), hammer ACTs
// are spaced by max(t_aggon, 16 * tRRD_S), and the victim readback runs
// per bank sequentially. Only banks == 16 is defined.
CommandSchedule build_bank_parallel_schedule(std::uint64_t hammer_count,
                                             double t_aggon_ns,
                                             unsigned banks = 16,
                                             const TimingParams& tp = {});

// Total wall time of a schedule: sum of delay * repeat.
double schedule_time_ns(const CommandSchedule& schedule);

// Worst-case time of one full sweep measurement (no flip anywhere):
// one single-bank measurement per grid point from rdt_min to rdt_max.
double sweep_measurement_time_ns(std::uint64_t rdt_min, std::uint64_t rdt_max,
                                 std::uint64_t rdt_step, double t_aggon_ns,
                                 const TimingParams& tp = {});

// Full-campaign geometry. rows counts rows per bank; parallel_banks 16
// uses the bank-parallel schedule (banks are covered in groups of 16).
struct CampaignSpec {
    std::uint64_t rows = 1;
    unsigned banks = 1;
    std::uint64_t measurements_per_row = 1;
    std::uint64_t hammer_count = 1;
    double t_aggon_ns = 32.0;
    unsigned patterns = 1;
    unsigned temperatures = 1;
    unsigned parallel_banks = 1; // 1 or 16

    void validate() const;
};

double campaign_time_seconds(const CampaignSpec& spec, const TimingParams& tp = {});

// "3d 4h 05m 06.7s" style rendering for reports.
std::string human_duration(double seconds);

} // namespace vrdlab
