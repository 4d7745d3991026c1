#include "vrdlab/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vrdlab {

using nlohmann::json;

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for hashing: " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const auto n = static_cast<std::size_t>(in.gcount());
        for (std::size_t i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
        if (!in) break;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void save_series_csv(const MeasurementSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary); // '\n' endings everywhere
    if (!out) throw IoError("cannot write series file: " + path.string());
    out << "index,rdt\n";
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        out << i << ',';
        if (series.values[i] == kNoFlip)
            out << "noflip";
        else
            out << series.values[i];
        out << '\n';
    }
    out.flush();
    if (!out) throw IoError("failed writing series file: " + path.string());

    json meta;
    meta["row"] = series.row_address;
    meta["config"] = {{"rdt_guess", series.config.rdt_guess},
                      {"rdt_min", series.config.rdt_min},
                      {"rdt_max", series.config.rdt_max},
                      {"rdt_step", series.config.rdt_step},
                      {"iterations", series.config.iterations}};
    meta["pattern"] = to_string(series.pattern);
    meta["t_aggon_ns"] = series.t_aggon_ns;
    meta["temperature"] = to_string(series.temperature);
    meta["seed"] = series.seed;
    std::filesystem::path meta_path = path;
    meta_path += ".meta.json";
    std::ofstream mout(meta_path, std::ios::binary);
    if (!mout) throw IoError("cannot write metadata: " + meta_path.string());
    mout << meta.dump(2) << '\n';
}

MeasurementSeries load_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open series file: " + path.string());
    MeasurementSeries series;
    std::string line;
    if (!std::getline(in, line) || line.rfind("index,rdt", 0) != 0)
        throw IoError("series file missing header: " + path.string());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw IoError("malformed series line: " + line);
        const std::string v = line.substr(comma + 1);
        series.values.push_back(v == "noflip" ? kNoFlip : std::stoull(v));
    }

    std::filesystem::path meta_path = path;
    meta_path += ".meta.json";
    std::ifstream min(meta_path);
    if (min) {
        json meta = json::parse(min);
        series.row_address = meta.value("row", 0ull);
        if (meta.contains("config")) {
            const json& c = meta["config"];
            series.config.rdt_guess = c.value("rdt_guess", 0ull);
            series.config.rdt_min = c.value("rdt_min", 0ull);
            series.config.rdt_max = c.value("rdt_max", 0ull);
            series.config.rdt_step = c.value("rdt_step", 1ull);
            series.config.iterations = c.value("iterations", 0ull);
        }
        if (meta.contains("pattern"))
            series.pattern = data_pattern_from_string(meta["pattern"]);
        series.t_aggon_ns = meta.value("t_aggon_ns", kTRasNs);
        if (meta.contains("temperature"))
            series.temperature = temperature_from_string(meta["temperature"]);
        series.seed = meta.value("seed", 0ull);
    }
    return series;
}

std::vector<std::uint64_t> load_replay_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open replay file: " + path.string());
    std::vector<std::uint64_t> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            values.push_back(std::stoull(line));
        } catch (const std::exception&) {
            throw IoError("replay file has a non-integer line: " + line);
        }
    }
    if (values.empty()) throw IoError("replay file is empty: " + path.string());
    return values;
}

std::string modifier_key_to_string(const Condition& c) {
    return to_string(c.pattern) + "|" + to_string(c.t_aggon) + "|" +
           to_string(c.temperature);
}

Condition modifier_key_from_string(const std::string& key) {
    std::istringstream ss(key);
    std::string pattern, taggon, temp;
    if (!std::getline(ss, pattern, '|') || !std::getline(ss, taggon, '|') ||
        !std::getline(ss, temp, '|'))
        throw ConfigError("malformed modifier key: " + key);
    return Condition{data_pattern_from_string(pattern),
                     t_aggon_class_from_string(taggon),
                     temperature_from_string(temp)};
}

namespace {

RdtModel model_from_json(const json& rec, const std::filesystem::path& base_dir) {
    const RdtFamily family = rdt_family_from_string(rec.at("family"));

    GridSpec grid;
    if (rec.contains("grid")) {
        const json& g = rec["grid"];
        grid.min = g.at("min");
        grid.max = g.at("max");
        grid.step = g.at("step");
    }

    RdtModel model = [&] {
        switch (family) {
            case RdtFamily::Constant:
                return RdtModel::constant(rec.at("mean").get<std::uint64_t>(), grid);
            case RdtFamily::DiscreteNormal:
                return RdtModel::discrete_normal(rec.at("mean"), rec.at("stddev"), grid);
            case RdtFamily::BimodalMixture: {
                const json& mx = rec.at("mixture");
                MixtureSpec mix{mx.at("weight"), mx.at("mean"), mx.at("stddev")};
                return RdtModel::bimodal(rec.at("mean"), rec.at("stddev"), mix, grid);
            }
            case RdtFamily::EmpiricalReplay: {
                std::vector<std::uint64_t> values;
                if (rec.contains("replay_file")) {
                    values = load_replay_file(
                        base_dir / rec["replay_file"].get<std::string>());
                } else if (rec.contains("replay_values")) {
                    values = rec["replay_values"].get<std::vector<std::uint64_t>>();
                } else {
                    throw ConfigError("replay model needs replay_file or replay_values");
                }
                if (rec.contains("grid"))
                    return RdtModel::empirical_replay(std::move(values), grid);
                return RdtModel::empirical_replay(std::move(values));
            }
        }
        throw ConfigError("unknown model family");
    }();

    if (rec.contains("modifiers")) {
        for (const auto& [key, scale] : rec["modifiers"].items())
            model.set_modifier(modifier_key_from_string(key), scale.get<double>());
    }
    return model;
}

} // namespace

std::map<std::uint64_t, RdtModel> load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("model file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.contains("rows") || !doc["rows"].is_array())
        throw ConfigError("model file needs a top-level \"rows\" array");

    std::map<std::uint64_t, RdtModel> models;
    const auto base_dir = path.parent_path();
    for (const json& rec : doc["rows"]) {
        const std::uint64_t row = rec.at("row");
        if (models.count(row)) throw ConfigError("duplicate row in model file");
        try {
            models.emplace(row, model_from_json(rec, base_dir));
        } catch (const ModelError& e) {
            throw ConfigError("row " + std::to_string(row) + ": " + e.what());
        }
    }
    if (models.empty()) throw ConfigError("model file has no rows");
    return models;
}

void save_model_file(const std::map<std::uint64_t, RdtModel>& models,
                     const std::filesystem::path& path) {
    json rows = json::array();
    for (const auto& [row, model] : models) {
        json rec;
        rec["row"] = row;
        rec["family"] = to_string(model.family());
        rec["grid"] = {{"min", model.grid().min},
                       {"max", model.grid().max},
                       {"step", model.grid().step}};
        switch (model.family()) {
            case RdtFamily::Constant:
                rec["mean"] = static_cast<std::uint64_t>(model.mean());
                break;
            case RdtFamily::DiscreteNormal:
                rec["mean"] = model.mean();
                rec["stddev"] = model.stddev();
                break;
            case RdtFamily::BimodalMixture:
                rec["mean"] = model.mean();
                rec["stddev"] = model.stddev();
                rec["mixture"] = {{"weight", model.mixture()->weight},
                                  {"mean", model.mixture()->mean},
                                  {"stddev", model.mixture()->stddev}};
                break;
            case RdtFamily::EmpiricalReplay:
                rec["replay_values"] = model.replay_values();
                break;
        }
        if (!model.modifiers().empty()) {
            json mods;
            for (const auto& [cond, scale] : model.modifiers())
                mods[modifier_key_to_string(cond)] = scale;
            rec["modifiers"] = mods;
        }
        rows.push_back(rec);
    }
    json doc;
    doc["rows"] = rows;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model file: " + path.string());
    out << doc.dump(2) << '\n';
}

} // namespace vrdlab
