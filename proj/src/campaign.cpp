#include "vrdlab/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vrdlab/io.hpp"
#include "vrdlab/sampling.hpp"
#include "vrdlab/stats.hpp"

namespace vrdlab {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSamplingNGrid[] = {1, 3, 5, 10, 50, 500};
constexpr double kMarginGrid[] = {0.10, 0.20, 0.30, 0.40, 0.50};
constexpr std::size_t kAcfMaxLag = 50;
constexpr std::uint64_t kMcIterations = 10'000;

std::string full_precision(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string series_filename(const ManifestEntry& e) {
    std::ostringstream name;
    name << "series_row" << e.row << '_' << to_string(e.pattern) << '_'
         << to_string(e.t_aggon) << '_' << to_string(e.temperature) << ".csv";
    return name.str();
}

} // namespace

CampaignConfig CampaignConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open campaign config: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("campaign config is not valid JSON: " + std::string(e.what()));
    }

    CampaignConfig c;
    c.model_file = doc.at("model_file").get<std::string>();
    if (c.model_file.is_relative()) c.model_file = path.parent_path() / c.model_file;
    if (doc.contains("rows")) c.rows = doc["rows"].get<std::vector<std::uint64_t>>();
    c.iterations = doc.value("iterations", 1000ull);
    if (doc.contains("patterns")) {
        c.patterns.clear();
        for (const auto& p : doc["patterns"])
            c.patterns.push_back(data_pattern_from_string(p));
    }
    if (doc.contains("t_aggon")) {
        c.t_aggon.clear();
        for (const auto& t : doc["t_aggon"])
            c.t_aggon.push_back(t_aggon_class_from_string(t));
    }
    if (doc.contains("temperatures")) {
        c.temperatures.clear();
        for (const auto& t : doc["temperatures"])
            c.temperatures.push_back(temperature_from_string(t));
    }
    if (doc.contains("out_dir")) c.out_dir = doc["out_dir"].get<std::string>();
    c.master_seed = doc.value("master_seed", 1ull);
    c.jobs = doc.value("jobs", 1u);
    if (doc.contains("analyses"))
        for (const auto& a : doc["analyses"]) c.analyses.insert(a.get<std::string>());
    c.validate();
    return c;
}

void CampaignConfig::validate() const {
    if (model_file.empty()) throw ConfigError("campaign needs a model file");
    if (iterations == 0) throw ConfigError("iterations must be positive");
    if (patterns.empty() || t_aggon.empty() || temperatures.empty())
        throw ConfigError("parameter grid must be nonempty");
    for (const std::string& a : analyses)
        if (!known_analyses().count(a)) throw ConfigError("unknown analysis: " + a);
}

void Manifest::save() const {
    json doc;
    doc["master_seed"] = master_seed;
    json arr = json::array();
    for (const ManifestEntry& e : entries) {
        arr.push_back({{"file", e.file},
                       {"hash", e.hash},
                       {"row", e.row},
                       {"pattern", to_string(e.pattern)},
                       {"t_aggon", to_string(e.t_aggon)},
                       {"temperature", to_string(e.temperature)},
                       {"seed", e.seed}});
    }
    doc["series"] = arr;
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw IoError("cannot write manifest in " + dir.string());
    out << doc.dump(2) << '\n';
}

Manifest Manifest::load(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open manifest: " + manifest_path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("manifest is not valid JSON: " + std::string(e.what()));
    }
    Manifest m;
    m.dir = manifest_path.parent_path();
    m.master_seed = doc.value("master_seed", 0ull);
    for (const json& rec : doc.at("series")) {
        ManifestEntry e;
        e.file = rec.at("file").get<std::string>();
        e.hash = rec.at("hash").get<std::string>();
        e.row = rec.at("row");
        e.pattern = data_pattern_from_string(rec.at("pattern"));
        e.t_aggon = t_aggon_class_from_string(rec.at("t_aggon"));
        e.temperature = temperature_from_string(rec.at("temperature"));
        e.seed = rec.at("seed");
        m.entries.push_back(e);
    }
    return m;
}

void Manifest::verify_hashes() const {
    for (const ManifestEntry& e : entries) {
        const std::string actual = hash_hex(fnv1a64_file(dir / e.file));
        if (actual != e.hash)
            throw IoError("hash mismatch for " + e.file + " (expected " + e.hash +
                          ", got " + actual + ")");
    }
}

Manifest run_campaign(const CampaignConfig& config) {
    config.validate();
    const std::map<std::uint64_t, RdtModel> models = load_model_file(config.model_file);

    std::vector<std::uint64_t> rows = config.rows;
    if (rows.empty())
        for (const auto& [row, model] : models) rows.push_back(row);
    for (std::uint64_t row : rows)
        if (!models.count(row))
            throw ConfigError("row " + std::to_string(row) + " not in model file");

    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + config.out_dir.string());

    // Build the combination list in canonical order; seeds depend only
    // on the combination key, never on scheduling.
    std::vector<ManifestEntry> combos;
    for (std::uint64_t row : rows) {
        for (std::size_t pi = 0; pi < config.patterns.size(); ++pi) {
            for (std::size_t ti = 0; ti < config.t_aggon.size(); ++ti) {
                for (std::size_t ci = 0; ci < config.temperatures.size(); ++ci) {
                    ManifestEntry e;
                    e.row = row;
                    e.pattern = config.patterns[pi];
                    e.t_aggon = config.t_aggon[ti];
                    e.temperature = config.temperatures[ci];
                    e.seed = RngStream::derive(
                                 config.master_seed,
                                 {row, static_cast<std::uint64_t>(e.pattern),
                                  static_cast<std::uint64_t>(e.t_aggon),
                                  static_cast<std::uint64_t>(e.temperature)})
                                 .seed();
                    e.file = series_filename(e);
                    combos.push_back(e);
                }
            }
        }
    }
    {
        std::vector<std::uint64_t> seeds;
        seeds.reserve(combos.size());
        for (const ManifestEntry& e : combos) seeds.push_back(e.seed);
        std::sort(seeds.begin(), seeds.end());
        if (std::adjacent_find(seeds.begin(), seeds.end()) != seeds.end())
            throw ConfigError("derived seed collision; change the master seed");
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= combos.size()) return;
            ManifestEntry& e = combos[i];
            try {
                RowState state(e.row, models.at(e.row));
                const double t_aggon_ns = t_aggon_ns_for(e.t_aggon);
                RngStream bootstrap = RngStream::derive(e.seed, {0xb007ull});
                const std::uint64_t guess =
                    guess_rdt(state, e.pattern, t_aggon_ns, e.temperature, bootstrap);
                const SweepConfig sweep =
                    SweepConfig::from_guess(guess, config.iterations);
                MeasurementSeries series = test_loop(state, sweep, e.pattern,
                                                     t_aggon_ns, e.temperature, e.seed);
                const auto path = config.out_dir / e.file;
                save_series_csv(series, path);
                e.hash = hash_hex(fnv1a64_file(path));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(combos.size()); // stop everyone
                return;
            }
        }
    };

    const unsigned jobs = std::max(1u, config.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    Manifest manifest;
    manifest.master_seed = config.master_seed;
    manifest.entries = std::move(combos);
    manifest.dir = config.out_dir;
    manifest.save();
    return manifest;
}

const std::set<std::string>& known_analyses() {
    static const std::set<std::string> names{
        "stats", "runlength", "acf", "chisquare", "sampling", "margin", "scurve"};
    return names;
}

std::vector<std::filesystem::path> analyze(const Manifest& manifest,
                                           const std::set<std::string>& which) {
    for (const std::string& a : which)
        if (!known_analyses().count(a)) throw ConfigError("unknown analysis: " + a);
    std::vector<std::filesystem::path> written;
    if (which.empty()) return written;

    manifest.verify_hashes();

    struct Loaded {
        const ManifestEntry* entry;
        MeasurementSeries series;
    };
    std::vector<Loaded> all;
    all.reserve(manifest.entries.size());
    for (const ManifestEntry& e : manifest.entries)
        all.push_back({&e, load_series_csv(manifest.dir / e.file)});

    auto open_csv = [&](const std::string& name, const std::string& header) {
        const auto path = manifest.dir / name;
        auto out = std::make_shared<std::ofstream>(path, std::ios::binary);
        if (!*out) throw IoError("cannot write " + path.string());
        *out << header << '\n';
        written.push_back(path);
        return out;
    };
    auto key_fields = [](const ManifestEntry& e) {
        std::ostringstream k;
        k << e.row << ',' << to_string(e.pattern) << ',' << to_string(e.t_aggon)
          << ',' << to_string(e.temperature);
        return k.str();
    };

    if (which.count("stats")) {
        auto out = open_csv("stats.csv",
                            "row,pattern,t_aggon,temperature,count,noflips,mean,"
                            "stddev,cv,min,q1,median,q3,max,unique_values");
        for (const Loaded& l : all) {
            const SeriesStats s = summarize(l.series.values);
            *out << key_fields(*l.entry) << ',' << s.sample_count << ','
                 << s.noflip_count << ',' << full_precision(s.mean) << ','
                 << full_precision(s.stddev) << ',' << full_precision(s.cv) << ','
                 << full_precision(s.min) << ',' << full_precision(s.q1) << ','
                 << full_precision(s.median) << ',' << full_precision(s.q3) << ','
                 << full_precision(s.max) << ',' << s.unique_values << '\n';
        }
    }

    if (which.count("runlength")) {
        auto out = open_csv("run_lengths.csv",
                            "row,pattern,t_aggon,temperature,run_length,count");
        for (const Loaded& l : all)
            for (const auto& [len, count] : run_lengths(l.series.values))
                *out << key_fields(*l.entry) << ',' << len << ',' << count << '\n';
    }

    if (which.count("acf")) {
        auto out = open_csv("acf.csv", "row,pattern,t_aggon,temperature,lag,value");
        for (const Loaded& l : all) {
            const auto numeric = l.series.numeric_values();
            if (numeric.size() < 2) continue;
            const std::size_t max_lag = std::min(kAcfMaxLag, numeric.size() - 1);
            std::vector<double> values = acf(std::span<const std::uint64_t>(numeric),
                                             max_lag);
            for (std::size_t lag = 0; lag < values.size(); ++lag)
                *out << key_fields(*l.entry) << ',' << lag << ','
                     << full_precision(values[lag]) << '\n';
        }
    }

    if (which.count("chisquare")) {
        auto out = open_csv("chi_square.csv",
                            "row,pattern,t_aggon,temperature,statistic,p_value,"
                            "bins,dof,reject");
        for (const Loaded& l : all) {
            try {
                const ChiSquareResult r = chi_square_normal_fit(l.series.values);
                *out << key_fields(*l.entry) << ',' << full_precision(r.statistic)
                     << ',' << full_precision(r.p_value) << ',' << r.bins << ','
                     << r.dof << ',' << (r.reject ? 1 : 0) << '\n';
            } catch (const ModelError&) {
                // Degenerate series (constant, too few bins) has no fit.
            }
        }
    }

    if (which.count("sampling")) {
        auto out = open_csv("sampling.csv",
                            "row,pattern,t_aggon,temperature,N,metric,exact,"
                            "mc_estimate,mc_stderr");
        for (const Loaded& l : all) {
            const auto numeric = l.series.numeric_values();
            for (std::uint64_t n : kSamplingNGrid) {
                if (n > numeric.size()) continue;
                for (SampleMetric metric :
                     {SampleMetric::FindMin, SampleMetric::NormalizedMin}) {
                    const double exact =
                        metric == SampleMetric::FindMin
                            ? prob_find_min(l.series.values, n)
                            : expected_normalized_min(l.series.values, n);
                    const MonteCarloResult mc = monte_carlo_estimate(
                        l.series.values, n, metric, 0.0, kMcIterations,
                        RngStream::derive(l.entry->seed, {0x3ca1eull, n}).seed());
                    *out << key_fields(*l.entry) << ',' << n << ','
                         << to_string(metric) << ',' << full_precision(exact) << ','
                         << full_precision(mc.estimate) << ','
                         << full_precision(mc.std_error) << '\n';
                }
            }
        }
    }

    if (which.count("margin")) {
        auto out = open_csv("margin.csv",
                            "row,pattern,t_aggon,temperature,N,margin,probability");
        for (const Loaded& l : all) {
            const auto numeric = l.series.numeric_values();
            for (std::uint64_t n : kSamplingNGrid) {
                if (n > numeric.size()) continue;
                for (double margin : kMarginGrid)
                    *out << key_fields(*l.entry) << ',' << n << ','
                         << full_precision(margin) << ','
                         << full_precision(
                                prob_min_within_margin(l.series.values, n, margin))
                         << '\n';
            }
        }
    }

    if (which.count("scurve")) {
        auto out = open_csv("cv_scurve.csv", "rank,row,max_cv");
        std::vector<std::pair<std::uint64_t, double>> cvs;
        for (const Loaded& l : all)
            cvs.emplace_back(l.entry->row, summarize(l.series.values).cv);
        const auto curve =
            cv_scurve(std::span<const std::pair<std::uint64_t, double>>(cvs));
        for (std::size_t i = 0; i < curve.size(); ++i)
            *out << i << ',' << curve[i].first << ','
                 << full_precision(curve[i].second) << '\n';
    }

    return written;
}

std::string report(const Manifest& manifest) {
    manifest.verify_hashes();
    std::ostringstream out;
    out << "campaign: " << manifest.entries.size() << " series, master seed "
        << manifest.master_seed << "\n";

    std::map<std::uint64_t, double> row_cv;
    std::uint64_t noflips = 0, measurements = 0;
    for (const ManifestEntry& e : manifest.entries) {
        const MeasurementSeries s = load_series_csv(manifest.dir / e.file);
        measurements += s.values.size();
        noflips += s.noflip_count();
        const SeriesStats stats = summarize(s.values);
        auto [it, inserted] = row_cv.emplace(e.row, stats.cv);
        if (!inserted) it->second = std::max(it->second, stats.cv);
    }
    out << "measurements: " << measurements << " (" << noflips << " without flip)\n";
    out << "rows: " << row_cv.size() << "\n";
    for (const auto& [row, cv] : row_cv) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f", cv);
        out << "  row " << row << "  max CV " << buf << "\n";
    }
    return out.str();
}

} // namespace vrdlab
