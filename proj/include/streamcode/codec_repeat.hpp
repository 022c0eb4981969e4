#pragma once

// Repetition stream code: enc(x) = LDC(x)^k, decoded in one pass by first
// settling checksum bits with smooth decoding, then emitting message bits
// with advice decoding on copies that pass the checksum test.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "streamcode/ldc_binary.hpp"
#include "streamcode/stream.hpp"

namespace streamcode {

struct RepeatParams {
    std::size_t n = 64;
    double eps = 0.1;            ///< codec eps (thresholds); the LDC carries its own
    std::size_t copies = 12;     ///< k
    std::size_t checksums = 16;  ///< v
    std::size_t r_out = 22;      ///< bits emitted per accepted copy
    std::size_t budget_bits = 65536;
    bool loose_threshold = false;   ///< accept on c < (1/2 - eps) v instead of (1/2 - 2 eps) v
    bool erasure_alphabet = false;  ///< stream may carry erasures (2-bit answers in the state)
    BinaryLdcParams ldc;

    /// n = 64, k = 12, eps = 0.1, LDC over GF(16) with m = 3, d = 3.
    static RepeatParams toy();

    /// Threshold on the checksum mismatch count c.
    double threshold() const { return (0.5 - (loose_threshold ? 1.0 : 2.0) * eps) * static_cast<double>(checksums); }
    /// Phase 1 exits once every tracker has P_b > (1 - eps) k / 2.
    double settle_level() const { return (1.0 - eps) * static_cast<double>(copies) / 2.0; }

    void validate() const;
    std::string describe() const;
};

/// Asymptotic parameter choices for reference: Q = min(s^0.1, 2^sqrt(log n)),
/// k = Q^2 n / s, v = (log n)^2, r = s / Q^2.
struct RepeatRegime {
    double Q = 0, k = 0, v = 0, r_out = 0;
};
RepeatRegime repeat_regime(std::size_t n, double s);

Word enc_repeat(const BinaryLdc& ldc, const RepeatParams& params, std::span<const Symbol> x);

/// Exact tracker sums after one phase-1 copy: P_b^t = num[t][b] / den.
struct TrackerSnapshot {
    std::vector<std::array<std::uint64_t, 2>> num;
    std::uint64_t den = 1;  ///< per-copy denominator; sums are over copies
};

struct RepeatResult {
    OutputTape tape;
    bool completed = false;        ///< n bits written
    bool exhausted = false;        ///< copies ran out first
    std::size_t copies_used = 0;
    std::size_t phase1_copies = 0;
    std::size_t peak_bits = 0;
    bool budget_exceeded = false;
    std::vector<double> per_copy_c;           ///< phase-2 checksum mismatches (erasure = 1/2)
    std::vector<bool> per_copy_accepted;
    std::vector<std::size_t> write_copy;      ///< copy (0-based) that wrote each tape entry
    std::vector<std::size_t> positions;       ///< j_1..j_{u+v}; the first u are advice
    std::vector<Symbol> settled;              ///< b_t after phase 1
    std::vector<TrackerSnapshot> trace;       ///< filled when record_trace
};

/// Single-pass decoder. Never throws on exhaustion; see repeat_decode.
RepeatResult dec_repeat(const BinaryLdc& ldc, const RepeatParams& params, SymbolStream& stream, Rng& rng,
                        bool record_trace = false);

/// Decoded message; throws StreamExhausted when the copies ran out.
std::vector<Symbol> repeat_decode(const BinaryLdc& ldc, const RepeatParams& params, SymbolStream& stream, Rng& rng);

/// Checks "errors in the first l copies >= 1/2 (1 - eps)(l - k/2) N" whenever a
/// tracker's true-bit sum P_b^t <= (1 - eps) k / 2 after l copies.
struct ErrCountProbe {
    std::size_t checks = 0;      ///< (tracker, copy) pairs with P_b^t at or below the level
    std::size_t violations = 0;  ///< of those, pairs where the planted errors fall short
};
/// errors_per_copy[i] is the planted corruption in copy i (erasures count 1/2).
ErrCountProbe errcount_probe(const RepeatParams& params, const RepeatResult& result, std::span<const Symbol> clean_copy,
                             std::span<const double> errors_per_copy);

}  // namespace streamcode
