#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vrdlab/campaign.hpp"
#include "vrdlab/device_model.hpp"
#include "vrdlab/ecc.hpp"
#include "vrdlab/errors.hpp"
#include "vrdlab/io.hpp"
#include "vrdlab/mitigation.hpp"
#include "vrdlab/sampling.hpp"
#include "vrdlab/stats.hpp"
#include "vrdlab/timing.hpp"

using nlohmann::json;
using namespace vrdlab;

namespace {

double parse_taggon(const std::string& s) {
    if (s == "tras") return kTRasNs;
    if (s == "trefi") return kTRefiNs;
    if (s == "9trefi") return kNineTRefiNs;
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw ConfigError("tAggOn must be tras, trefi, 9trefi, or a value in ns");
    }
}

int cmd_profile(const std::string& config_path, const std::string& out_override,
                std::uint64_t seed_override, unsigned jobs_override) {
    CampaignConfig config = CampaignConfig::load(config_path);
    if (!out_override.empty()) config.out_dir = out_override;
    if (seed_override != 0) config.master_seed = seed_override;
    if (jobs_override != 0) config.jobs = jobs_override;
    if (config.out_dir.empty()) throw ConfigError("no output directory configured");

    const Manifest manifest = run_campaign(config);
    std::cout << "wrote " << manifest.entries.size() << " series to "
              << manifest.dir.string() << "\n";
    if (!config.analyses.empty()) {
        for (const auto& f : analyze(manifest, config.analyses))
            std::cout << "wrote " << f.string() << "\n";
    }
    return kExitOk;
}

int cmd_analyze(const std::string& manifest_path, std::vector<std::string> names) {
    const Manifest manifest = Manifest::load(manifest_path);
    std::set<std::string> which(names.begin(), names.end());
    if (which.empty()) which = known_analyses();
    for (const auto& f : analyze(manifest, which))
        std::cout << "wrote " << f.string() << "\n";
    return kExitOk;
}

int cmd_sample(const std::string& series_path, std::vector<std::uint64_t> ns,
               double margin, std::uint64_t mc_iterations, std::uint64_t seed) {
    const MeasurementSeries series = load_series_csv(series_path);
    if (ns.empty()) ns = {1, 3, 5, 10, 50, 500};

    std::cout << "row,N,metric,exact,mc_estimate,mc_stderr\n";
    const auto numeric = series.numeric_values();
    for (std::uint64_t n : ns) {
        if (n == 0 || n > numeric.size()) continue;
        struct Line {
            SampleMetric metric;
            double exact;
        } lines[] = {
            {SampleMetric::FindMin, prob_find_min(series.values, n)},
            {SampleMetric::NormalizedMin, expected_normalized_min(series.values, n)},
            {SampleMetric::WithinMargin,
             prob_min_within_margin(series.values, n, margin)},
        };
        for (const Line& l : lines) {
            const MonteCarloResult mc = monte_carlo_estimate(
                series.values, n, l.metric, margin, mc_iterations,
                RngStream::derive(seed, {n, static_cast<std::uint64_t>(l.metric)})
                    .seed());
            std::printf("%llu,%llu,%s,%.17g,%.17g,%.17g\n",
                        static_cast<unsigned long long>(series.row_address),
                        static_cast<unsigned long long>(n),
                        to_string(l.metric).c_str(), l.exact, mc.estimate,
                        mc.std_error);
        }
    }
    return kExitOk;
}

int cmd_esttime(std::uint64_t hammers, const std::string& taggon, std::uint64_t rows,
                unsigned banks, unsigned parallel, std::uint64_t measurements,
                unsigned patterns, unsigned temps) {
    CampaignSpec spec;
    spec.rows = rows;
    spec.banks = banks;
    spec.measurements_per_row = measurements;
    spec.hammer_count = hammers;
    spec.t_aggon_ns = parse_taggon(taggon);
    spec.patterns = patterns;
    spec.temperatures = temps;
    spec.parallel_banks = parallel;

    const CommandSchedule schedule =
        parallel == 16 ? build_bank_parallel_schedule(hammers, spec.t_aggon_ns)
                       : build_single_bank_schedule(hammers, spec.t_aggon_ns);
    const double per_meas = schedule_time_ns(schedule);
    const double total = campaign_time_seconds(spec);

    json out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", per_meas);
    out["per_measurement_ns"] = std::stod(buf);
    out["total_seconds"] = total;
    out["human_readable"] = human_duration(total);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_ecc(const std::string& code, std::vector<double> bers,
            const std::string& ber_file) {
    EccGeometry geom;
    const EccKind kind = ecc_kind_from_string(code);
    switch (kind) {
        case EccKind::Sec: geom = EccGeometry::sec(); break;
        case EccKind::Secded: geom = EccGeometry::secded(); break;
        case EccKind::Ssc: geom = EccGeometry::ssc(); break;
    }
    if (!ber_file.empty()) {
        std::ifstream in(ber_file);
        if (!in) throw IoError("cannot open BER file: " + ber_file);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) bers.push_back(std::stod(line));
    }
    if (bers.empty()) throw ConfigError("need at least one --ber value");

    json out = json::array();
    for (double ber : bers) {
        const EccErrorProbs p = error_probabilities(geom, ber);
        json rec;
        rec["code"] = to_string(kind);
        rec["ber"] = ber;
        rec["uncorrectable"] = p.uncorrectable;
        rec["undetectable"] = p.undetectable;
        if (p.detectable_uncorrectable)
            rec["detectable_uncorrectable"] = *p.detectable_uncorrectable;
        out.push_back(rec);
    }
    std::cout << (out.size() == 1 ? out[0].dump(2) : out.dump(2)) << "\n";
    return kExitOk;
}

int cmd_mitigate(const std::string& technique_name, std::uint64_t rdt,
                 double guardband, const std::string& trace_path,
                 std::uint64_t rows_per_bank, unsigned banks, std::uint64_t seed,
                 double probability, std::uint64_t window, std::uint64_t table_size,
                 bool no_halve, const std::string& model_path,
                 std::uint64_t model_row) {
    MitigationConfig config;
    config.technique = mitigation_technique_from_string(technique_name);
    config.configured_rdt = rdt;
    config.guardband = guardband;
    config.para_probability = probability;
    config.mint_window = window;
    config.graphene_table_size = table_size;
    config.halve_for_double_sided = !no_halve;

    const ActivationTrace trace =
        ActivationTrace::load_csv(trace_path, rows_per_bank, banks);

    MitigationRun run;
    switch (config.technique) {
        case MitigationTechnique::Para: run = run_para(trace, config, seed); break;
        case MitigationTechnique::Mint: run = run_mint(trace, config, seed); break;
        case MitigationTechnique::Graphene: run = run_graphene(trace, config); break;
        case MitigationTechnique::Prac: run = run_prac(trace, config); break;
    }

    if (!model_path.empty()) {
        const auto models = load_model_file(model_path);
        auto it = models.find(model_row);
        if (it == models.end())
            throw ConfigError("row " + std::to_string(model_row) + " not in model file");
        SecurityModel sec{it->second, Condition{}, seed};
        run.outcome.missed_bitflips = evaluate_security(trace, run.refreshes, sec);
    }

    json out;
    out["technique"] = to_string(config.technique);
    out["configured_rdt"] = config.configured_rdt;
    out["guardband"] = config.guardband;
    out["effective_threshold"] = config.effective_threshold();
    out["trigger_threshold"] = config.trigger_threshold();
    out["preventive_refreshes"] = run.outcome.preventive_refreshes;
    out["backoffs_or_rfm"] = run.outcome.backoffs_or_rfm;
    out["missed_bitflips"] = run.outcome.missed_bitflips;
    out["max_unmitigated_activations"] = run.outcome.max_unmitigated_activations;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic read-disturbance threshold laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    unsigned jobs = 0;

    auto* profile = app.add_subcommand("profile", "Run a profiling campaign");
    profile->add_option("-c,--config", config_path, "Campaign config (JSON)")->required();
    profile->add_option("-o,--out", out_dir, "Output directory (overrides config)");
    profile->add_option("--seed", seed, "Master seed (overrides config)");
    profile->add_option("-j,--jobs", jobs, "Worker threads (overrides config)");

    std::string manifest_path;
    std::vector<std::string> analysis_names;
    auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a finished campaign");
    analyze_cmd->add_option("-m,--manifest", manifest_path, "manifest.json path")->required();
    analyze_cmd->add_option("-a,--analyses", analysis_names,
                            "Which analyses (default: all)");

    std::string series_path;
    std::vector<std::uint64_t> sample_ns;
    double sample_margin = 0.1;
    std::uint64_t mc_iterations = 10'000, sample_seed = 1;
    auto* sample = app.add_subcommand("sample", "Subset metrics for one series");
    sample->add_option("-s,--series", series_path, "Series CSV")->required();
    sample->add_option("-n,--n", sample_ns, "Subset sizes");
    sample->add_option("--margin", sample_margin, "Guardband margin fraction");
    sample->add_option("--mc", mc_iterations, "Monte-Carlo iterations");
    sample->add_option("--seed", sample_seed, "Monte-Carlo seed");

    std::uint64_t est_hammers = 1000, est_rows = 1, est_meas = 1;
    unsigned est_banks = 1, est_parallel = 1, est_patterns = 1, est_temps = 1;
    std::string est_taggon = "tras";
    auto* esttime = app.add_subcommand("esttime", "Estimate test time for a campaign");
    esttime->add_option("--hammers", est_hammers, "Hammer count per measurement");
    esttime->add_option("--taggon", est_taggon, "tras | trefi | 9trefi | <ns>");
    esttime->add_option("--rows", est_rows, "Rows per bank");
    esttime->add_option("--banks", est_banks, "Number of banks");
    esttime->add_option("--parallel", est_parallel, "Bank parallelism (1 or 16)");
    esttime->add_option("--measurements", est_meas, "Measurements per row");
    esttime->add_option("--patterns", est_patterns, "Data pattern count");
    esttime->add_option("--temps", est_temps, "Temperature level count");

    std::string ecc_code = "secded", ber_file;
    std::vector<double> ecc_bers;
    auto* ecc = app.add_subcommand("ecc", "Codeword error probabilities");
    ecc->add_option("--code", ecc_code, "sec | secded | ssc");
    ecc->add_option("--ber", ecc_bers, "Bit error rate(s)");
    ecc->add_option("--ber-file", ber_file, "File with one BER per line");

    std::string mit_technique = "prac", trace_path, model_path;
    std::uint64_t mit_rdt = 1024, mit_rows_per_bank = 1u << 16, mit_window = 0,
                  mit_table = 0, mit_seed = 1, model_row = 0;
    unsigned mit_banks = 1;
    double mit_guardband = 0.0, mit_probability = 0.0;
    bool mit_no_halve = false;
    auto* mitigate = app.add_subcommand("mitigate", "Replay a trace through a mitigation");
    mitigate->add_option("-t,--technique", mit_technique, "para | mint | graphene | prac")
        ->required();
    mitigate->add_option("--rdt", mit_rdt, "Configured threshold");
    mitigate->add_option("--guardband", mit_guardband, "Safety margin fraction");
    mitigate->add_option("--trace", trace_path, "Trace CSV (seq,bank,row)")->required();
    mitigate->add_option("--rows-per-bank", mit_rows_per_bank, "Bank geometry");
    mitigate->add_option("--banks", mit_banks, "Bank count");
    mitigate->add_option("--seed", mit_seed, "Seed for probabilistic techniques");
    mitigate->add_option("--probability", mit_probability, "PARA refresh probability");
    mitigate->add_option("--window", mit_window, "MINT window length");
    mitigate->add_option("--table-size", mit_table, "Graphene counter-table entries");
    mitigate->add_flag("--no-halve", mit_no_halve,
                       "Do not halve the threshold for double-sided attacks");
    mitigate->add_option("--model", model_path, "Device model for security evaluation");
    mitigate->add_option("--model-row", model_row, "Row of --model to draw from");

    auto* report_cmd = app.add_subcommand("report", "Summarize a finished campaign");
    std::string report_manifest;
    report_cmd->add_option("-m,--manifest", report_manifest, "manifest.json path")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (profile->parsed()) return cmd_profile(config_path, out_dir, seed, jobs);
        if (analyze_cmd->parsed()) return cmd_analyze(manifest_path, analysis_names);
        if (sample->parsed())
            return cmd_sample(series_path, sample_ns, sample_margin, mc_iterations,
                              sample_seed);
        if (esttime->parsed())
            return cmd_esttime(est_hammers, est_taggon, est_rows, est_banks,
                               est_parallel, est_meas, est_patterns, est_temps);
        if (ecc->parsed()) return cmd_ecc(ecc_code, ecc_bers, ber_file);
        if (mitigate->parsed())
            return cmd_mitigate(mit_technique, mit_rdt, mit_guardband, trace_path,
                                mit_rows_per_bank, mit_banks, mit_seed,
                                mit_probability, mit_window, mit_table,
                                mit_no_halve, model_path, model_row);
        if (report_cmd->parsed()) {
            std::cout << report(Manifest::load(report_manifest));
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NotFoundError& e) {
        std::cerr << "not found: " << e.what() << "\n";
        return kExitNotFound;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitConfig;
}
