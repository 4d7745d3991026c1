#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vrdlab/device_model.hpp"
#include "vrdlab/errors.hpp"

namespace vrdlab {

enum class MitigationTechnique { Para, Mint, Graphene, Prac };

std::string to_string(MitigationTechnique t);
MitigationTechnique mitigation_technique_from_string(const std::string& s);

// Configuration of one mitigation run. The guardband shrinks the
// configured threshold (effective = configured / (1 + guardband),
// floored); counter-based techniques additionally halve it when
// defending against double-sided patterns, where both aggressors
// contribute disturbance to the shared victim.
struct MitigationConfig {
    MitigationTechnique technique = MitigationTechnique::Prac;
    std::uint64_t configured_rdt = 0;
    double guardband = 0.0;

    double para_probability = 0.0;        // PARA: refresh probability per ACT
    std::uint64_t mint_window = 0;        // MINT: window length in activations
    std::uint64_t graphene_table_size = 0;// Graphene: counter-table entries
    bool halve_for_double_sided = true;   // PRAC/Graphene

    std::uint64_t effective_threshold() const;
    std::uint64_t trigger_threshold() const; // counter value that fires a refresh
    void validate() const;
};

struct ActivationEvent {
    unsigned bank = 0;
    std::uint64_t row = 0;
};

// Ordered per-bank row-activation stream; the event index is the
// sequence number. Persisted as CSV `seq,bank,row`.
struct ActivationTrace {
    std::vector<ActivationEvent> events;
    std::uint64_t rows_per_bank = 0;
    unsigned banks = 1;

    void validate() const;
    static ActivationTrace load_csv(const std::filesystem::path& path,
                                    std::uint64_t rows_per_bank, unsigned banks);
    void save_csv(const std::filesystem::path& path) const;
};

// A preventive refresh of `row` in `bank`, issued immediately after the
// activation at sequence index `seq`.
struct RefreshEvent {
    std::uint64_t seq = 0;
    unsigned bank = 0;
    std::uint64_t row = 0;
};

struct MitigationOutcome {
    std::uint64_t preventive_refreshes = 0; // individual neighbor-row refreshes
    std::uint64_t backoffs_or_rfm = 0;      // PRAC back-off events
    std::uint64_t missed_bitflips = 0;      // filled by evaluate_security
    // Highest activation count any row accumulated between consecutive
    // preventive actions triggered by that row (aggressor-centric).
    std::uint64_t max_unmitigated_activations = 0;
};

struct MitigationRun {
    MitigationOutcome outcome;
    std::vector<RefreshEvent> refreshes; // ordered by seq
};

// Misra-Gries counter table over aggressor rows: tracked rows count up,
// an untracked row in a full table decrements everyone. A counter
// reaching the trigger threshold refreshes both neighbors and resets.
MitigationRun run_graphene(const ActivationTrace& trace, const MitigationConfig& config);

// Refresh both neighbors of each activated row with probability p.
MitigationRun run_para(const ActivationTrace& trace, const MitigationConfig& config,
                       std::uint64_t seed);

// Per bank, split the activation stream into windows of W events and
// refresh the neighbors of exactly one uniformly pre-drawn activation
// per window. A position beyond a partial trailing window means that
// window performs no refresh.
MitigationRun run_mint(const ActivationTrace& trace, const MitigationConfig& config,
                       std::uint64_t seed);

// Exact per-row activation counters; reaching the trigger threshold
// issues a back-off that refreshes both neighbors and resets.
MitigationRun run_prac(const ActivationTrace& trace, const MitigationConfig& config);

// Device model the security evaluation draws victim thresholds from:
// every victim row shares the generative model; streams are derived
// per (bank, row) from the seed.
struct SecurityModel {
    RdtModel model;
    Condition condition;
    std::uint64_t seed = 0;
};

// Counts missed bitflips: a victim whose accumulated aggressor
// activations within one epoch (the interval between consecutive
// preventive refreshes of that victim) reach the epoch's latent
// threshold draw. At most one miss is counted per victim per epoch —
// the first flip is what the threshold measures.
std::uint64_t evaluate_security(const ActivationTrace& trace,
                                const std::vector<RefreshEvent>& refreshes,
                                const SecurityModel& model);

} // namespace vrdlab
