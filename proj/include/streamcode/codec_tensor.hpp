#pragma once

// Tensor-power stream code for linear functions: enc(x) = C_inner(LDC^{(x)d}(x)),
// decoded by the level-by-level recursion over query lists in one pass.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "streamcode/codes.hpp"
#include "streamcode/ldc_large.hpp"
#include "streamcode/stream.hpp"

namespace streamcode {

/// Apply `code` along every axis of an r^d array (lexicographic order,
/// first index most significant). axis_order picks the order of the passes.
Word tensor_encode(const LinearCode& code, unsigned d, std::span<const Symbol> x);
Word tensor_encode_axes(const LinearCode& code, unsigned d, std::span<const Symbol> x,
                        std::span<const unsigned> axis_order);
/// The d-th tensor power as a generator matrix (Kronecker power).
LinearCode tensor_code(const LinearCode& code, unsigned d);

struct TensorParams {
    std::size_t r = 4;
    unsigned d = 2;
    double eps = 0.1;
    unsigned instances = 16;     ///< parallel top-level runs
    unsigned inner_copies = 4;   ///< C_inner = simplex(k) repeated this many times
    std::optional<std::size_t> cap_override;
    LargeLdcParams ldc;

    std::size_t n() const;

    /// n = 16, r = 4, d = 2, K = GF(16), RS over all 16 points (R = 16).
    static TensorParams toy();
    /// max(9, ceil(log2 n)^2), capped at 49.
    static unsigned default_instances(std::size_t n);

    void validate() const;
    std::string describe() const;
};

/// Asymptotic choices for reference: r = s^0.2, d = log n / log r, eps' = eps / (10 d).
struct TensorRegime {
    double r = 0, d = 0, eps_prime = 0;
};
TensorRegime tensor_regime(std::size_t n, double eps, double s);

struct BaseOutcome {
    std::optional<Symbol> sigma;   ///< empty for erasure
    bool decoded = false;          ///< unique decoding succeeded (before the coin)
    std::size_t half_distance = 0; ///< to the decoded codeword
};

struct TensorDiagnostics {
    std::vector<std::optional<Symbol>> instance_values;
    std::vector<std::size_t> max_live;  ///< per depth j: most requests of one instance on one segment
    std::size_t cap = 0;                ///< overlap cap used by the query lists
    bool live_violation = false;        ///< some depth exceeded cap^j
    std::size_t base_reads = 0;         ///< base blocks decoded
    std::size_t resamples = 0;
};

class TensorCodec {
public:
    explicit TensorCodec(TensorParams params);

    const TensorParams& params() const { return params_; }
    const LargeLdc& ldc() const { return ldc_; }
    const LinearCode& code() const { return code_; }
    const LinearCode& inner() const { return inner_; }
    const FieldPtr& field() const { return ldc_.symbol_field(); }
    std::size_t R() const { return ldc_.length(); }
    std::size_t inner_len() const { return inner_.code_len(); }
    std::size_t blocks() const;
    std::size_t length() const { return blocks() * inner_len(); }

    /// Codeword symbol index of a 0-based tuple: sum I_j R^{d-j}.
    std::size_t block_index(std::span<const std::size_t> tuple) const;

    Word encode_symbols(std::span<const Symbol> x) const;  ///< K^{R^d}
    Word encode(std::span<const Symbol> x) const;          ///< bits, x given as bits
    std::span<const Symbol> inner_codeword(Symbol s) const {
        return {inner_words_.data() + static_cast<std::size_t>(s) * inner_len(), inner_len()};
    }

    /// Base step: unique inner decoding, then keep sigma with probability
    /// 1 - 2 delta(z, C_inner(sigma)).
    BaseOutcome decode_base(std::span<const Symbol> bits, Rng& coin) const;

    /// Values of the top-level recursion for each instance (K or erasure).
    /// ell is over K, length n.
    std::vector<std::optional<Symbol>> recurse_instances(SymbolStream& stream, std::span<const Symbol> ell, Rng& rng,
                                                         TensorDiagnostics* diag = nullptr) const;

    /// ell . x over GF(2): erasures become fair coins, values are projected to
    /// their low bit, and the majority wins (ties by a fair coin).
    Symbol linear_dec(SymbolStream& stream, std::span<const Symbol> ell_bits, Rng& rng,
                      TensorDiagnostics* diag = nullptr) const;

private:
    TensorParams params_;
    LargeLdc ldc_;
    LinearCode code_;
    LinearCode inner_;
    std::size_t inner_distance_;
    std::vector<Symbol> inner_words_;
};

}  // namespace streamcode
