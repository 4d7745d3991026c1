#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vrdlab/errors.hpp"

namespace vrdlab {

enum class EccKind { Sec, Secded, Ssc };

std::string to_string(EccKind k);
EccKind ecc_kind_from_string(const std::string& s);

struct EccGeometry {
    EccKind kind = EccKind::Sec;
    unsigned codeword_bits = 72;
    unsigned symbol_bits = 1;

    unsigned symbols() const { return codeword_bits / symbol_bits; }
    void validate() const;

    static EccGeometry sec() { return {EccKind::Sec, 72, 1}; }
    static EccGeometry secded() { return {EccKind::Secded, 72, 1}; }
    static EccGeometry ssc() { return {EccKind::Ssc, 144, 8}; }
};

// q = 1 - (1-p)^symbol_bits under independent per-bit flips.
double symbol_error_prob(double p, unsigned symbol_bits);

// Failure probabilities for one codeword under i.i.d. bit error rate
// ber. SEC and SSC attempt correction on any syndrome, so everything
// uncorrectable is also silently miscorrected (undetectable). SECDED
// flags exactly-two errors as detected.
struct EccErrorProbs {
    double uncorrectable = 0.0;
    double undetectable = 0.0;
    std::optional<double> detectable_uncorrectable; // SECDED only
};

EccErrorProbs error_probabilities(const EccGeometry& geom, double ber);

// bitflips / row_bits, e.g. 5 flips in a 64 Kib row.
double row_bitflip_rate(std::uint64_t bitflips, std::uint64_t row_bits);

} // namespace vrdlab
