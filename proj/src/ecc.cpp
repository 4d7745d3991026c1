#include "vrdlab/ecc.hpp"

#include <cmath>

namespace vrdlab {

std::string to_string(EccKind k) {
    switch (k) {
        case EccKind::Sec: return "sec";
        case EccKind::Secded: return "secded";
        case EccKind::Ssc: return "ssc";
    }
    throw ModelError("unknown ECC kind");
}

EccKind ecc_kind_from_string(const std::string& s) {
    if (s == "sec") return EccKind::Sec;
    if (s == "secded") return EccKind::Secded;
    if (s == "ssc") return EccKind::Ssc;
    throw ConfigError("unknown ECC kind: " + s);
}

void EccGeometry::validate() const {
    if (codeword_bits == 0 || symbol_bits == 0)
        throw ModelError("codeword and symbol widths must be positive");
    if (codeword_bits % symbol_bits != 0)
        throw ModelError("codeword_bits must be a multiple of symbol_bits");
}

double symbol_error_prob(double p, unsigned symbol_bits) {
    if (p < 0.0 || p > 1.0) throw ModelError("bit error rate outside [0, 1]");
    if (symbol_bits == 0) throw ModelError("symbol width must be positive");
    // -expm1(k*log1p(-p)) keeps precision for tiny p.
    return -std::expm1(static_cast<double>(symbol_bits) * std::log1p(-p));
}

namespace {

// Upper binomial tail P(X >= k), summed term by term from below so tiny
// probabilities never pass through a 1-x cancellation. Terms are walked
// with the recurrence t_{j+1} = t_j * (n-j)/(j+1) * p/(1-p).
double binomial_tail_at_least(unsigned n, double p, unsigned k) {
    if (k == 0) return 1.0;
    if (k > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;

    double log_t = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                   std::lgamma(n - k + 1.0) + k * std::log(p) +
                   (n - k) * std::log1p(-p);
    double term = std::exp(log_t);
    double sum = 0.0;
    const double ratio_base = p / (1.0 - p);
    for (unsigned j = k; j <= n; ++j) {
        sum += term;
        term *= static_cast<double>(n - j) / static_cast<double>(j + 1) * ratio_base;
    }
    return std::min(sum, 1.0);
}

double binomial_pmf(unsigned n, double p, unsigned k) {
    return binomial_tail_at_least(n, p, k) - binomial_tail_at_least(n, p, k + 1);
}

} // namespace

EccErrorProbs error_probabilities(const EccGeometry& geom, double ber) {
    geom.validate();
    if (ber < 0.0 || ber > 1.0) throw ModelError("bit error rate outside [0, 1]");

    const unsigned units = geom.symbols();
    const double unit_p =
        geom.symbol_bits == 1 ? ber : symbol_error_prob(ber, geom.symbol_bits);

    EccErrorProbs r;
    switch (geom.kind) {
        case EccKind::Sec:
        case EccKind::Ssc:
            r.uncorrectable = binomial_tail_at_least(units, unit_p, 2);
            r.undetectable = r.uncorrectable;
            break;
        case EccKind::Secded:
            r.uncorrectable = binomial_tail_at_least(units, unit_p, 2);
            r.undetectable = binomial_tail_at_least(units, unit_p, 3);
            r.detectable_uncorrectable = binomial_pmf(units, unit_p, 2);
            break;
    }
    return r;
}

double row_bitflip_rate(std::uint64_t bitflips, std::uint64_t row_bits) {
    if (row_bits == 0) throw ModelError("row_bits must be positive");
    if (bitflips > row_bits) throw ModelError("bitflips exceed row size");
    return static_cast<double>(bitflips) / static_cast<double>(row_bits);
}

} // namespace vrdlab
