#pragma once

// Binary locally decodable code: Reed-Muller over F_q concatenated with a
// binary simplex inner code, with smooth local decoding (degree-2 curves)
// and local decoding with advice (curves through the advice points).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "streamcode/codes.hpp"
#include "streamcode/concat_rs.hpp"
#include "streamcode/oracle.hpp"
#include "streamcode/reed_muller.hpp"
#include "streamcode/rng.hpp"

namespace streamcode {

struct BinaryLdcParams {
    std::size_t n = 0;         ///< message bits
    double eps = 0.1;
    std::size_t Q = 0;         ///< query budget
    unsigned field_degree = 4; ///< q = 2^field_degree
    unsigned degree = 1;       ///< d
    unsigned variables = 2;    ///< m
    unsigned t_smooth = 1;     ///< curves per smooth decode
    unsigned k_adv = 1;        ///< advice RM points
    unsigned advice_iterations = 1;
    /// Off only for distance-only instances whose curves cannot fit in Q.
    bool check_query_budget = true;

    std::size_t q() const { return std::size_t{1} << field_degree; }
    std::size_t inner_len() const { return q() - 1; }
    std::size_t points() const;
    std::size_t N() const { return points() * inner_len(); }
    /// Advice length u = k_adv * N_inner.
    std::size_t u() const { return static_cast<std::size_t>(k_adv) * inner_len(); }
    std::size_t smooth_queries() const { return static_cast<std::size_t>(t_smooth) * (q() - 1) * inner_len(); }
    std::size_t advice_queries() const { return static_cast<std::size_t>(advice_iterations) * (q() - 1) * inner_len(); }

    /// Derivations q = sqrt(Q), d = floor(eps^6 sqrt(Q) / 4), m minimal with
    /// n <= C(d+m, m) log2 q, t = floor(cbrt(Q)), k_adv = ceil(1/eps),
    /// advice iterations = sqrt(Q).
    static BinaryLdcParams asymptotic(std::size_t n, double eps, std::size_t Q);

    /// Throws ProfileError on inconsistent parameters.
    void validate() const;
    std::string describe() const;
};

/// Exact rational output of smooth decoding: p(b) = num_b / den.
struct Confidence {
    std::uint64_t num0 = 0;
    std::uint64_t num1 = 0;
    std::uint64_t den = 1;
    double p0() const { return static_cast<double>(num0) / static_cast<double>(den); }
    double p1() const { return static_cast<double>(num1) / static_cast<double>(den); }
    double p(Symbol bit) const { return bit ? p1() : p0(); }
};

struct AdvicePositions {
    std::vector<std::size_t> rm_points;  ///< point indices in F_q^m
    std::vector<std::size_t> positions;  ///< all inner-block indices of each point, in order
};

/// Curve restricted queries: for each curve, blocks at lambda = 1..q-1.
struct SmoothPlan {
    std::size_t target = 0;                     ///< codeword index being corrected
    std::vector<std::size_t> queries;           ///< curve-major, lambda-major, then inner position
    std::vector<Symbol> curves;                 ///< per curve and coordinate: v0, v1, v2
};

struct AdvicePlan {
    std::size_t target = 0;
    std::vector<std::vector<Symbol>> lambdas;   ///< per iteration: j_1..j_k
    std::vector<std::size_t> queries;           ///< iteration-major
};

struct AdviceOutcome {
    Symbol bit = 0;
    unsigned accepted = 0;   ///< iterations with a unique survivor
    unsigned empty = 0;      ///< iterations with no survivor
    unsigned ambiguous = 0;  ///< iterations with several survivors
    bool flagged = false;    ///< no iteration produced a unique survivor
};

class BinaryLdc {
public:
    explicit BinaryLdc(BinaryLdcParams params);

    const BinaryLdcParams& params() const { return params_; }
    const ReedMuller& rm() const { return rm_; }
    const LinearCode& inner() const { return inner_; }
    std::size_t length() const { return params_.N(); }

    /// Bits packed MSB-first into field_degree-bit symbols, zero padded.
    std::vector<Symbol> pack(std::span<const Symbol> bits) const;
    Word encode(std::span<const Symbol> bits) const;
    /// The generator-matrix form (message = n bits).
    LinearCode as_linear_code() const;

    /// Codeword index holding message bit i.
    std::size_t message_position(std::size_t i) const;

    SmoothPlan plan_smooth(std::size_t target, Rng& rng) const;
    Confidence finish_smooth(const SmoothPlan& plan, std::span<const Symbol> answers) const;
    /// Smooth local correcting of codeword index `target`.
    Confidence smooth_correct(const Oracle& w, std::size_t target, Rng& rng) const;
    /// Smooth local decoding of message bit i.
    Confidence smooth_decode(const Oracle& w, std::size_t i, Rng& rng) const {
        return smooth_correct(w, message_position(i), rng);
    }

    AdvicePositions sample_advice(Rng& rng) const;
    AdvicePlan plan_advice(std::size_t target, const AdvicePositions& adv, Rng& rng) const;
    /// adv_values are the claimed codeword bits at adv.positions.
    AdviceOutcome finish_advice(const AdvicePlan& plan, const AdvicePositions& adv,
                                std::span<const Symbol> adv_values, std::span<const Symbol> answers) const;
    /// Message bit i; throws AdviceMismatch when no iteration has a survivor.
    Symbol decode_with_advice(const Oracle& w, std::size_t i, const AdvicePositions& adv,
                              std::span<const Symbol> adv_values, Rng& rng) const;
    AdviceOutcome decode_with_advice_detail(const Oracle& w, std::size_t i, const AdvicePositions& adv,
                                            std::span<const Symbol> adv_values, Rng& rng) const;

    const ConcatRs& smooth_code() const { return smooth_code_; }
    const ConcatRs& advice_code() const { return advice_code_; }

private:
    std::size_t curve_point(std::span<const std::vector<Symbol>> coeffs, Symbol lambda) const;
    void append_curve_queries(std::span<const std::vector<Symbol>> coeffs, std::vector<std::size_t>& out) const;
    std::optional<Symbol> symbol_of_block(std::span<const Symbol> bits) const;

    BinaryLdcParams params_;
    FieldPtr field_;
    ReedMuller rm_;
    LinearCode inner_;
    ConcatRs smooth_code_;
    ConcatRs advice_code_;
};

}  // namespace streamcode
