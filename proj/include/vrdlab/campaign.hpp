#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "vrdlab/device_model.hpp"
#include "vrdlab/profiler.hpp"

namespace vrdlab {

// End-to-end campaign description: which rows of the model to profile,
// under which parameter grid, how many measurements each, where to put
// the results. A fixed master seed makes the whole campaign (and any
// subset of it) reproducible byte for byte.
struct CampaignConfig {
    std::filesystem::path model_file;
    std::vector<std::uint64_t> rows; // empty = every row in the model file
    std::uint64_t iterations = 1000;
    std::vector<DataPattern> patterns{DataPattern::Checkered0};
    std::vector<TAggOnClass> t_aggon{TAggOnClass::TRas};
    std::vector<TemperatureClass> temperatures{TemperatureClass::C50};
    std::filesystem::path out_dir;
    std::uint64_t master_seed = 1;
    unsigned jobs = 1;
    std::set<std::string> analyses; // used by the CLI's analyze step

    static CampaignConfig load(const std::filesystem::path& path);
    void validate() const;
};

struct ManifestEntry {
    std::string file; // relative to the manifest directory
    std::string hash; // fnv1a64 of the series file
    std::uint64_t row = 0;
    DataPattern pattern = DataPattern::Checkered0;
    TAggOnClass t_aggon = TAggOnClass::TRas;
    TemperatureClass temperature = TemperatureClass::C50;
    std::uint64_t seed = 0;
};

struct Manifest {
    std::uint64_t master_seed = 0;
    std::vector<ManifestEntry> entries; // canonical order
    std::filesystem::path dir;

    void save() const; // writes <dir>/manifest.json
    static Manifest load(const std::filesystem::path& manifest_path);

    // Re-hashes every listed file; throws IoError on any mismatch.
    void verify_hashes() const;
};

// Profiles every (row, pattern, tAggOn, temperature) combination:
// bootstrap guess, derived sweep, test loop, one CSV per combination.
// Per-combination seeds are derived from the master seed and the
// combination key, so re-runs and subsets reproduce identical bytes.
Manifest run_campaign(const CampaignConfig& config);

// Known analysis names: stats, runlength, acf, chisquare, sampling,
// margin, scurve.
const std::set<std::string>& known_analyses();

// Runs the requested analyses over every series in the manifest and
// writes one CSV per analysis next to it. Returns the files written.
std::vector<std::filesystem::path> analyze(const Manifest& manifest,
                                           const std::set<std::string>& which);

// Compact human-readable digest of a campaign and its analyses.
std::string report(const Manifest& manifest);

} // namespace vrdlab
