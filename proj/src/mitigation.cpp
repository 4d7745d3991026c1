#include "vrdlab/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "vrdlab/rng.hpp"

namespace vrdlab {

std::string to_string(MitigationTechnique t) {
    switch (t) {
        case MitigationTechnique::Para: return "para";
        case MitigationTechnique::Mint: return "mint";
        case MitigationTechnique::Graphene: return "graphene";
        case MitigationTechnique::Prac: return "prac";
    }
    throw ModelError("unknown mitigation technique");
}

MitigationTechnique mitigation_technique_from_string(const std::string& s) {
    if (s == "para") return MitigationTechnique::Para;
    if (s == "mint") return MitigationTechnique::Mint;
    if (s == "graphene") return MitigationTechnique::Graphene;
    if (s == "prac") return MitigationTechnique::Prac;
    throw ConfigError("unknown mitigation technique: " + s);
}

std::uint64_t MitigationConfig::effective_threshold() const {
    if (configured_rdt == 0) throw ModelError("configured_rdt must be positive");
    if (guardband < 0.0) throw ModelError("guardband must be non-negative");
    const auto t = static_cast<std::uint64_t>(
        static_cast<double>(configured_rdt) / (1.0 + guardband));
    if (t < 1) throw ModelError("effective threshold fell below 1");
    return t;
}

std::uint64_t MitigationConfig::trigger_threshold() const {
    const std::uint64_t eff = effective_threshold();
    const bool counter_based = technique == MitigationTechnique::Prac ||
                               technique == MitigationTechnique::Graphene;
    if (counter_based && halve_for_double_sided)
        return std::max<std::uint64_t>(1, eff / 2);
    return eff;
}

void MitigationConfig::validate() const {
    (void)effective_threshold();
    switch (technique) {
        case MitigationTechnique::Para:
            if (para_probability < 0.0 || para_probability > 1.0)
                throw ModelError("PARA probability outside [0, 1]");
            break;
        case MitigationTechnique::Mint:
            if (mint_window < 1) throw ModelError("MINT window must be >= 1");
            break;
        case MitigationTechnique::Graphene:
            if (graphene_table_size < 1)
                throw ModelError("Graphene table size must be >= 1");
            break;
        case MitigationTechnique::Prac:
            break;
    }
}

void ActivationTrace::validate() const {
    if (rows_per_bank == 0) throw ModelError("rows_per_bank must be positive");
    if (banks == 0) throw ModelError("bank count must be positive");
    for (const ActivationEvent& e : events) {
        if (e.row >= rows_per_bank) throw ModelError("trace row outside bank geometry");
        if (e.bank >= banks) throw ModelError("trace bank outside geometry");
    }
}

ActivationTrace ActivationTrace::load_csv(const std::filesystem::path& path,
                                          std::uint64_t rows_per_bank,
                                          unsigned banks) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace file: " + path.string());
    ActivationTrace trace;
    trace.rows_per_bank = rows_per_bank;
    trace.banks = banks;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("seq", 0) == 0) continue; // header
        }
        std::istringstream ss(line);
        std::string seq, bank, row;
        if (!std::getline(ss, seq, ',') || !std::getline(ss, bank, ',') ||
            !std::getline(ss, row, ','))
            throw IoError("malformed trace line: " + line);
        ActivationEvent e;
        e.bank = static_cast<unsigned>(std::stoul(bank));
        e.row = std::stoull(row);
        trace.events.push_back(e);
    }
    trace.validate();
    return trace;
}

void ActivationTrace::save_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trace file: " + path.string());
    out << "seq,bank,row\n";
    for (std::size_t i = 0; i < events.size(); ++i)
        out << i << ',' << events[i].bank << ',' << events[i].row << '\n';
}

namespace {

struct RowKey {
    unsigned bank;
    std::uint64_t row;
    bool operator==(const RowKey&) const = default;
};

struct RowKeyHash {
    std::size_t operator()(const RowKey& k) const {
        return std::hash<std::uint64_t>()(
            (static_cast<std::uint64_t>(k.bank) << 48) ^ k.row);
    }
};

// Shared bookkeeping: exact activation counts per row since that row
// last triggered a preventive action, and the refresh log.
class RunRecorder {
public:
    RunRecorder(const ActivationTrace& trace, MitigationRun& run)
        : trace_(trace), run_(run) {}

    // Returns the row's activation count including this event.
    std::uint64_t record_activation(const ActivationEvent& e) {
        std::uint64_t& c = counts_[RowKey{e.bank, e.row}];
        ++c;
        run_.outcome.max_unmitigated_activations =
            std::max(run_.outcome.max_unmitigated_activations, c);
        return c;
    }

    // Refresh both neighbors of `row` right after event `seq`; resets
    // the aggressor's own count.
    void refresh_neighbors(std::uint64_t seq, unsigned bank, std::uint64_t row) {
        if (row > 0) push_refresh(seq, bank, row - 1);
        if (row + 1 < trace_.rows_per_bank) push_refresh(seq, bank, row + 1);
        counts_[RowKey{bank, row}] = 0;
    }

private:
    void push_refresh(std::uint64_t seq, unsigned bank, std::uint64_t row) {
        run_.refreshes.push_back(RefreshEvent{seq, bank, row});
        ++run_.outcome.preventive_refreshes;
    }

    const ActivationTrace& trace_;
    MitigationRun& run_;
    std::unordered_map<RowKey, std::uint64_t, RowKeyHash> counts_;
};

} // namespace

MitigationRun run_graphene(const ActivationTrace& trace, const MitigationConfig& config) {
    trace.validate();
    config.validate();
    const std::uint64_t trigger = config.trigger_threshold();
    const std::uint64_t table_size = config.graphene_table_size;

    MitigationRun run;
    RunRecorder rec(trace, run);
    // One counter table per bank.
    std::unordered_map<unsigned, std::unordered_map<std::uint64_t, std::uint64_t>> tables;

    for (std::size_t seq = 0; seq < trace.events.size(); ++seq) {
        const ActivationEvent& e = trace.events[seq];
        rec.record_activation(e);

        auto& table = tables[e.bank];
        auto it = table.find(e.row);
        if (it != table.end()) {
            ++it->second;
        } else if (table.size() < table_size) {
            it = table.emplace(e.row, 1).first;
        } else {
            // Misra-Gries: untracked arrival into a full table decrements
            // every counter; zeros fall out of the table.
            for (auto t = table.begin(); t != table.end();) {
                if (--t->second == 0)
                    t = table.erase(t);
                else
                    ++t;
            }
            continue;
        }
        if (it->second >= trigger) {
            rec.refresh_neighbors(seq, e.bank, e.row);
            table.erase(it);
        }
    }
    return run;
}

MitigationRun run_para(const ActivationTrace& trace, const MitigationConfig& config,
                       std::uint64_t seed) {
    trace.validate();
    config.validate();
    const double p = config.para_probability;

    MitigationRun run;
    RunRecorder rec(trace, run);
    RngStream stream = RngStream::derive(seed, {0x70617261ull}); // "para"

    for (std::size_t seq = 0; seq < trace.events.size(); ++seq) {
        const ActivationEvent& e = trace.events[seq];
        rec.record_activation(e);
        if (p >= 1.0 || stream.uniform01(seq) < p)
            rec.refresh_neighbors(seq, e.bank, e.row);
    }
    return run;
}

MitigationRun run_mint(const ActivationTrace& trace, const MitigationConfig& config,
                       std::uint64_t seed) {
    trace.validate();
    config.validate();
    const std::uint64_t window = config.mint_window;

    MitigationRun run;
    RunRecorder rec(trace, run);

    struct BankWindow {
        std::uint64_t index = 0;    // which window we are in
        std::uint64_t position = 0; // offset inside the window
        std::uint64_t chosen = 0;   // pre-drawn slot to mitigate
    };
    std::unordered_map<unsigned, BankWindow> windows;

    for (std::size_t seq = 0; seq < trace.events.size(); ++seq) {
        const ActivationEvent& e = trace.events[seq];
        rec.record_activation(e);

        BankWindow& w = windows[e.bank];
        if (w.position == 0) {
            RngStream stream = RngStream::derive(seed, {0x6d696e74ull, e.bank});
            w.chosen = stream.below(w.index, window);
        }
        if (w.position == w.chosen)
            rec.refresh_neighbors(seq, e.bank, e.row);
        if (++w.position == window) {
            w.position = 0;
            ++w.index;
        }
    }
    return run;
}

MitigationRun run_prac(const ActivationTrace& trace, const MitigationConfig& config) {
    trace.validate();
    config.validate();
    const std::uint64_t trigger = config.trigger_threshold();

    MitigationRun run;
    RunRecorder rec(trace, run);

    for (std::size_t seq = 0; seq < trace.events.size(); ++seq) {
        const ActivationEvent& e = trace.events[seq];
        // The recorder's exact counts double as PRAC's per-row counters.
        if (rec.record_activation(e) >= trigger) {
            ++run.outcome.backoffs_or_rfm;
            rec.refresh_neighbors(seq, e.bank, e.row);
        }
    }
    return run;
}

std::uint64_t evaluate_security(const ActivationTrace& trace,
                                const std::vector<RefreshEvent>& refreshes,
                                const SecurityModel& model) {
    trace.validate();

    struct VictimState {
        RowState state;
        RngStream stream;
        std::uint64_t accumulated = 0;
        bool missed_this_epoch = false;
    };
    std::unordered_map<RowKey, VictimState, RowKeyHash> victims;

    auto victim_at = [&](unsigned bank, std::uint64_t row) -> VictimState& {
        auto it = victims.find(RowKey{bank, row});
        if (it == victims.end()) {
            it = victims
                     .emplace(RowKey{bank, row},
                              VictimState{RowState(row, model.model),
                                          RngStream::derive(model.seed, {bank, row}),
                                          0, false})
                     .first;
        }
        return it->second;
    };

    std::uint64_t missed = 0;
    auto disturb = [&](unsigned bank, std::uint64_t row) {
        VictimState& v = victim_at(bank, row);
        if (!v.state.has_latent()) v.state.draw_latent(model.condition, v.stream);
        ++v.accumulated;
        if (!v.missed_this_epoch && v.accumulated >= v.state.latent_rdt()) {
            ++missed;
            v.missed_this_epoch = true;
        }
    };

    std::size_t r = 0;
    for (std::size_t seq = 0; seq < trace.events.size(); ++seq) {
        const ActivationEvent& e = trace.events[seq];
        if (e.row > 0) disturb(e.bank, e.row - 1);
        if (e.row + 1 < trace.rows_per_bank) disturb(e.bank, e.row + 1);

        // Refreshes tagged with this sequence apply after the
        // activation's disturbance has landed.
        for (; r < refreshes.size() && refreshes[r].seq == seq; ++r) {
            auto it = victims.find(RowKey{refreshes[r].bank, refreshes[r].row});
            if (it == victims.end()) continue; // refreshed before ever disturbed
            VictimState& v = it->second;
            v.accumulated = 0;
            v.missed_this_epoch = false;
            v.state.invalidate_latent(); // next epoch draws afresh
        }
    }
    return missed;
}

} // namespace vrdlab
