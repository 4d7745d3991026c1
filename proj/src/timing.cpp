#include "vrdlab/timing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace vrdlab {

void TimingParams::validate() const {
    for (double v : {t_rrd_s, t_ccd_s, t_ccd_l, t_ccd_l_wr, t_rcd, t_rp, t_ras,
                     t_rtp, t_wr, t_refi})
        if (!(v > 0.0)) throw ModelError("timing parameters must be positive");
}

std::string to_string(DramCommand c) {
    switch (c) {
        case DramCommand::Act: return "ACT";
        case DramCommand::Write: return "WRITE";
        case DramCommand::Read: return "READ";
        case DramCommand::Pre: return "PRE";
    }
    throw ModelError("unknown DRAM command");
}

std::string to_string(CommandTarget t) {
    switch (t) {
        case CommandTarget::Victim: return "victim";
        case CommandTarget::Agg1: return "aggressor1";
        case CommandTarget::Agg2: return "aggressor2";
    }
    throw ModelError("unknown command target");
}

namespace {

void append_row_init(CommandSchedule& s, CommandTarget row, const TimingParams& tp) {
    s.push_back({DramCommand::Act, row, tp.t_rcd, 1});
    s.push_back({DramCommand::Write, row, tp.t_ccd_l_wr, 127});
    s.push_back({DramCommand::Write, row, tp.t_wr, 1});
    s.push_back({DramCommand::Pre, row, tp.t_rp, 1});
}

void append_readback(CommandSchedule& s, const TimingParams& tp) {
    s.push_back({DramCommand::Act, CommandTarget::Victim, tp.t_rcd, 1});
    s.push_back({DramCommand::Read, CommandTarget::Victim, tp.t_ccd_l, 127});
    s.push_back({DramCommand::Read, CommandTarget::Victim, tp.t_rtp, 1});
}

} // namespace

CommandSchedule build_single_bank_schedule(std::uint64_t hammer_count,
                                           double t_aggon_ns,
                                           const TimingParams& tp) {
    tp.validate();
    if (!(t_aggon_ns > 0.0)) throw ModelError("t_aggon must be positive");
    CommandSchedule s;
    append_row_init(s, CommandTarget::Victim, tp);
    append_row_init(s, CommandTarget::Agg1, tp);
    append_row_init(s, CommandTarget::Agg2, tp);
    if (hammer_count > 0) {
        s.push_back({DramCommand::Act, CommandTarget::Agg1, t_aggon_ns, hammer_count});
        s.push_back({DramCommand::Pre, CommandTarget::Agg1, tp.t_rp, hammer_count});
        s.push_back({DramCommand::Act, CommandTarget::Agg2, t_aggon_ns, hammer_count});
        s.push_back({DramCommand::Pre, CommandTarget::Agg2, tp.t_rp, hammer_count});
    }
    append_readback(s, tp);
    return s;
}

CommandSchedule build_bank_parallel_schedule(std::uint64_t hammer_count,
                                             double t_aggon_ns, unsigned banks,
                                             const TimingParams& tp) {
    tp.validate();
    if (banks != 16) throw ModelError("bank-parallel schedule is defined for 16 banks");
    if (!(t_aggon_ns > 0.0)) throw ModelError("t_aggon must be positive");

    CommandSchedule s;
    auto init16 = [&](CommandTarget row) {
        s.push_back({DramCommand::Act, row, tp.t_rrd_s, 16});
        s.push_back({DramCommand::Write, row, tp.t_ccd_s, 2032});
        s.push_back({DramCommand::Write, row, tp.t_wr, 1});
        s.push_back({DramCommand::Pre, row, tp.t_rp, 1});
    };
    init16(CommandTarget::Victim);
    init16(CommandTarget::Agg1);
    init16(CommandTarget::Agg2);

    // All 16 banks hammer in lockstep; consecutive ACTs to the same row
    // address must clear both the row-on time and 16 activation slots.
    const double act_spacing = std::max(t_aggon_ns, 16.0 * tp.t_rrd_s);
    if (hammer_count > 0) {
        s.push_back({DramCommand::Act, CommandTarget::Agg1, act_spacing, hammer_count});
        s.push_back({DramCommand::Pre, CommandTarget::Agg1, tp.t_rp, hammer_count});
        s.push_back({DramCommand::Act, CommandTarget::Agg2, act_spacing, hammer_count});
        s.push_back({DramCommand::Pre, CommandTarget::Agg2, tp.t_rp, hammer_count});
    }
    for (unsigned b = 0; b < banks; ++b) append_readback(s, tp);
    return s;
}

double schedule_time_ns(const CommandSchedule& schedule) {
    double total = 0.0;
    for (const ScheduledCommand& c : schedule)
        total += c.delay_ns * static_cast<double>(c.repeat);
    return total;
}

double sweep_measurement_time_ns(std::uint64_t rdt_min, std::uint64_t rdt_max,
                                 std::uint64_t rdt_step, double t_aggon_ns,
                                 const TimingParams& tp) {
    if (rdt_step == 0 || rdt_min == 0 || rdt_min > rdt_max)
        throw ModelError("invalid sweep grid");
    // Fixed cost (init + readback) per grid step plus the hammer cost,
    // which sums arithmetically over the swept counts.
    const double fixed = schedule_time_ns(build_single_bank_schedule(0, t_aggon_ns, tp));
    const double pair_cost =
        schedule_time_ns(build_single_bank_schedule(1, t_aggon_ns, tp)) - fixed;
    const std::uint64_t steps = (rdt_max - rdt_min) / rdt_step + 1;
    const double total_hammers =
        static_cast<double>(steps) * static_cast<double>(rdt_min) +
        static_cast<double>(rdt_step) * 0.5 * static_cast<double>(steps) *
            static_cast<double>(steps - 1);
    return static_cast<double>(steps) * fixed + total_hammers * pair_cost;
}

void CampaignSpec::validate() const {
    if (rows == 0 || banks == 0 || measurements_per_row == 0 || patterns == 0 ||
        temperatures == 0)
        throw ModelError("campaign dimensions must be positive");
    if (parallel_banks != 1 && parallel_banks != 16)
        throw ModelError("parallel_banks must be 1 or 16");
    if (!(t_aggon_ns > 0.0)) throw ModelError("t_aggon must be positive");
}

double campaign_time_seconds(const CampaignSpec& spec, const TimingParams& tp) {
    spec.validate();
    double per_meas_ns;
    double bank_groups;
    if (spec.parallel_banks == 16) {
        per_meas_ns = schedule_time_ns(
            build_bank_parallel_schedule(spec.hammer_count, spec.t_aggon_ns, 16, tp));
        bank_groups = std::ceil(static_cast<double>(spec.banks) / 16.0);
    } else {
        per_meas_ns = schedule_time_ns(
            build_single_bank_schedule(spec.hammer_count, spec.t_aggon_ns, tp));
        bank_groups = static_cast<double>(spec.banks);
    }
    // All factors are exactly linear; double keeps 15+ significant
    // digits over the ~1e16 ns totals this reaches.
    const double total_ns = static_cast<double>(spec.rows) *
                            static_cast<double>(spec.measurements_per_row) *
                            static_cast<double>(spec.patterns) *
                            static_cast<double>(spec.temperatures) * bank_groups *
                            per_meas_ns;
    return total_ns * 1e-9;
}

std::string human_duration(double seconds) {
    if (seconds < 0.0) throw ModelError("negative duration");
    char buf[64];
    if (seconds < 1e-3) {
        std::snprintf(buf, sizeof buf, "%.3f us", seconds * 1e6);
    } else if (seconds < 1.0) {
        std::snprintf(buf, sizeof buf, "%.3f ms", seconds * 1e3);
    } else if (seconds < 60.0) {
        std::snprintf(buf, sizeof buf, "%.2f s", seconds);
    } else if (seconds < 3600.0) {
        std::snprintf(buf, sizeof buf, "%.1f min", seconds / 60.0);
    } else if (seconds < 86400.0) {
        std::snprintf(buf, sizeof buf, "%.2f h", seconds / 3600.0);
    } else {
        std::snprintf(buf, sizeof buf, "%.2f days", seconds / 86400.0);
    }
    return buf;
}

} // namespace vrdlab
