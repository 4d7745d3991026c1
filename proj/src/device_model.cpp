#include "vrdlab/device_model.hpp"

#include <cmath>
#include <utility>

namespace vrdlab {

std::string to_string(DataPattern p) {
    switch (p) {
        case DataPattern::Rowstripe0: return "rowstripe0";
        case DataPattern::Rowstripe1: return "rowstripe1";
        case DataPattern::Checkered0: return "checkered0";
        case DataPattern::Checkered1: return "checkered1";
    }
    throw ModelError("unknown data pattern");
}

std::string to_string(TAggOnClass t) {
    switch (t) {
        case TAggOnClass::TRas: return "tras";
        case TAggOnClass::TRefi: return "trefi";
        case TAggOnClass::NineTRefi: return "9trefi";
    }
    throw ModelError("unknown tAggOn class");
}

std::string to_string(TemperatureClass t) {
    switch (t) {
        case TemperatureClass::C50: return "c50";
        case TemperatureClass::C65: return "c65";
        case TemperatureClass::C80: return "c80";
    }
    throw ModelError("unknown temperature class");
}

DataPattern data_pattern_from_string(const std::string& s) {
    if (s == "rowstripe0") return DataPattern::Rowstripe0;
    if (s == "rowstripe1") return DataPattern::Rowstripe1;
    if (s == "checkered0") return DataPattern::Checkered0;
    if (s == "checkered1") return DataPattern::Checkered1;
    throw ConfigError("unknown data pattern: " + s);
}

TAggOnClass t_aggon_class_from_string(const std::string& s) {
    if (s == "tras") return TAggOnClass::TRas;
    if (s == "trefi") return TAggOnClass::TRefi;
    if (s == "9trefi") return TAggOnClass::NineTRefi;
    throw ConfigError("unknown tAggOn class: " + s);
}

TemperatureClass temperature_from_string(const std::string& s) {
    if (s == "c50") return TemperatureClass::C50;
    if (s == "c65") return TemperatureClass::C65;
    if (s == "c80") return TemperatureClass::C80;
    throw ConfigError("unknown temperature class: " + s);
}

TAggOnClass classify_t_aggon(double t_aggon_ns) {
    // Nearest canonical value in log-ish terms: the three classes are
    // orders of magnitude apart, so simple midpoints suffice.
    if (t_aggon_ns < (kTRasNs + kTRefiNs) / 2.0) return TAggOnClass::TRas;
    if (t_aggon_ns < (kTRefiNs + kNineTRefiNs) / 2.0) return TAggOnClass::TRefi;
    return TAggOnClass::NineTRefi;
}

double t_aggon_ns_for(TAggOnClass c) {
    switch (c) {
        case TAggOnClass::TRas: return kTRasNs;
        case TAggOnClass::TRefi: return kTRefiNs;
        case TAggOnClass::NineTRefi: return kNineTRefiNs;
    }
    throw ModelError("unknown tAggOn class");
}

std::string to_string(RdtFamily f) {
    switch (f) {
        case RdtFamily::Constant: return "constant";
        case RdtFamily::DiscreteNormal: return "discrete_normal";
        case RdtFamily::BimodalMixture: return "bimodal_mixture";
        case RdtFamily::EmpiricalReplay: return "empirical_replay";
    }
    throw ModelError("unknown RDT family");
}

RdtFamily rdt_family_from_string(const std::string& s) {
    if (s == "constant") return RdtFamily::Constant;
    if (s == "discrete_normal") return RdtFamily::DiscreteNormal;
    if (s == "bimodal_mixture") return RdtFamily::BimodalMixture;
    if (s == "empirical_replay") return RdtFamily::EmpiricalReplay;
    throw ConfigError("unknown RDT family: " + s);
}

void GridSpec::validate() const {
    if (min == 0) throw ModelError("grid_min must be positive");
    if (step == 0) throw ModelError("grid_step must be positive");
    if (min > max) throw ModelError("grid_min > grid_max");
}

std::uint64_t GridSpec::snap(double raw) const {
    double k = std::round((raw - static_cast<double>(min)) / static_cast<double>(step));
    double k_max = static_cast<double>(point_count() - 1);
    if (k < 0.0) k = 0.0;
    if (k > k_max) k = k_max;
    return min + static_cast<std::uint64_t>(k) * step;
}

RdtModel RdtModel::constant(std::uint64_t value, GridSpec grid) {
    RdtModel m;
    m.family_ = RdtFamily::Constant;
    m.mean_ = static_cast<double>(value);
    m.stddev_ = 0.0;
    m.grid_ = grid;
    m.validate();
    return m;
}

RdtModel RdtModel::discrete_normal(double mean, double stddev, GridSpec grid) {
    RdtModel m;
    m.family_ = RdtFamily::DiscreteNormal;
    m.mean_ = mean;
    m.stddev_ = stddev;
    m.grid_ = grid;
    m.validate();
    return m;
}

RdtModel RdtModel::bimodal(double mean, double stddev, MixtureSpec mixture, GridSpec grid) {
    RdtModel m;
    m.family_ = RdtFamily::BimodalMixture;
    m.mean_ = mean;
    m.stddev_ = stddev;
    m.mixture_ = mixture;
    m.grid_ = grid;
    m.validate();
    return m;
}

RdtModel RdtModel::empirical_replay(std::vector<std::uint64_t> values) {
    std::uint64_t top = 1;
    for (std::uint64_t v : values) top = std::max(top, v);
    return empirical_replay(std::move(values), GridSpec{1, top, 1});
}

RdtModel RdtModel::empirical_replay(std::vector<std::uint64_t> values, GridSpec grid) {
    RdtModel m;
    m.family_ = RdtFamily::EmpiricalReplay;
    m.replay_ = std::move(values);
    m.grid_ = grid;
    if (!m.replay_.empty()) {
        double sum = 0.0;
        for (std::uint64_t v : m.replay_) sum += static_cast<double>(v);
        m.mean_ = sum / static_cast<double>(m.replay_.size());
    }
    m.validate();
    return m;
}

void RdtModel::set_modifier(const Condition& c, double scale) {
    if (!(scale > 0.0)) throw ModelError("modifier scale must be positive");
    modifiers_[c] = scale;
}

double RdtModel::modifier(const Condition& c) const {
    auto it = modifiers_.find(c);
    return it == modifiers_.end() ? 1.0 : it->second;
}

void RdtModel::validate() const {
    grid_.validate();
    switch (family_) {
        case RdtFamily::Constant:
        case RdtFamily::DiscreteNormal:
            if (!(mean_ > 0.0)) throw ModelError("mean must be positive");
            if (stddev_ < 0.0) throw ModelError("stddev must be non-negative");
            if (mean_ < static_cast<double>(grid_.min) ||
                mean_ > static_cast<double>(grid_.max))
                throw ModelError("mean outside [grid_min, grid_max]");
            break;
        case RdtFamily::BimodalMixture:
            if (!(mean_ > 0.0)) throw ModelError("mean must be positive");
            if (stddev_ < 0.0) throw ModelError("stddev must be non-negative");
            if (!mixture_) throw ModelError("bimodal model needs a mixture spec");
            if (mixture_->weight < 0.0 || mixture_->weight > 1.0)
                throw ModelError("mixture weight outside [0, 1]");
            if (!(mixture_->mean > 0.0)) throw ModelError("mixture mean must be positive");
            if (mixture_->stddev < 0.0) throw ModelError("mixture stddev must be non-negative");
            break;
        case RdtFamily::EmpiricalReplay:
            if (replay_.empty()) throw ModelError("empty replay list");
            for (std::uint64_t v : replay_)
                if (v == 0) throw ModelError("replay values must be positive");
            break;
    }
}

void HammerRequest::validate() const {
    if (hammer_count < 1) throw ModelError("hammer_count must be >= 1");
    if (t_aggon_ns < kTRasNs) throw ModelError("t_aggon below minimum tRAS");
}

RowState::RowState(std::uint64_t row_address, RdtModel model, CellEncoding encoding)
    : row_(row_address), model_(std::move(model)), encoding_(encoding) {
    model_.validate();
}

std::uint64_t RowState::latent_rdt() const {
    if (!latent_) throw ModelError("no latent RDT drawn yet");
    return *latent_;
}

std::uint64_t RowState::draw_latent(const Condition& condition, const RngStream& stream) {
    const double scale = model_.modifier(condition);
    // Each draw owns counters [4d, 4d+4): one selector plus a Box-Muller
    // pair, so families can change without shifting later draws.
    const std::uint64_t base = 4 * draw_count_;
    std::uint64_t value = 0;

    switch (model_.family()) {
        case RdtFamily::Constant:
            value = model_.grid().snap(model_.mean() * scale);
            break;
        case RdtFamily::DiscreteNormal: {
            double raw = model_.mean() * scale +
                         model_.stddev() * scale * stream.gaussian(base + 1);
            value = model_.grid().snap(raw);
            break;
        }
        case RdtFamily::BimodalMixture: {
            const MixtureSpec& mix = *model_.mixture();
            double u = stream.uniform01(base);
            double m = model_.mean(), s = model_.stddev();
            if (u < mix.weight) {
                m = mix.mean;
                s = mix.stddev;
            }
            double raw = m * scale + s * scale * stream.gaussian(base + 1);
            value = model_.grid().snap(raw);
            break;
        }
        case RdtFamily::EmpiricalReplay: {
            if (draw_count_ >= model_.replay_values().size())
                throw ModelError("replay list exhausted for row " + std::to_string(row_));
            value = model_.grid().snap(
                static_cast<double>(model_.replay_values()[draw_count_]));
            break;
        }
    }

    latent_ = value;
    ++draw_count_;
    return value;
}

bool RowState::hammer(const HammerRequest& req) const {
    req.validate();
    if (!latent_) throw ModelError("hammer called before any latent RDT draw");
    return req.hammer_count >= *latent_;
}

} // namespace vrdlab
