#pragma once

// Linear LDC over K = GF(2^k): Reed-Muller over F = GF(2^{k e}) concatenated
// with an inner code over K. Smooth local decoding handles erasures and
// returns mass on at most one symbol of K plus mass on erasure.

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

struct LargeLdcParams {
    unsigned symbol_degree = 4;  ///< K = GF(2^symbol_degree)
    unsigned ext = 1;            ///< [F:K]; ext = 1 means identity inner code
    unsigned degree = 1;         ///< d
    unsigned variables = 1;      ///< m
    std::size_t r = 1;           ///< message symbols
    double eps = 0.1;
    std::size_t Q = 0;
    unsigned t = 1;              ///< curves per decode
    std::uint64_t inner_seed = 1;
    bool check_query_budget = true;

    unsigned field_degree() const { return symbol_degree * ext; }
    std::size_t q() const { return std::size_t{1} << field_degree(); }
    std::size_t points() const;
    std::size_t capacity() const;
    std::size_t queries_per_decode(std::size_t inner_len) const { return t * (q() - 1) * inner_len; }

    /// q = largest power of 2^k below sqrt(Q), d = floor(eps^6 q / 4),
    /// m minimal with r <= C(d+m, m) e, t = floor(cbrt(Q)).
    static LargeLdcParams asymptotic(std::size_t r, double eps, std::size_t Q, unsigned symbol_degree);

    void validate() const;
    std::string describe() const;
};

/// Exact masses over K and erasure: p(symbol) = num_symbol / den,
/// p(erasure) = num_bot / den, and p = 0 for every other symbol.
struct ConfidenceDist {
    std::optional<Symbol> symbol;
    std::uint64_t num_symbol = 0;
    std::uint64_t num_bot = 0;
    std::uint64_t den = 1;

    double p(Symbol s) const {
        return symbol && *symbol == s ? static_cast<double>(num_symbol) / static_cast<double>(den) : 0.0;
    }
    double p_symbol() const { return static_cast<double>(num_symbol) / static_cast<double>(den); }
    double p_bot() const { return static_cast<double>(num_bot) / static_cast<double>(den); }
};

/// Per-curve masses before merging; several symbols may carry mass.
/// Merge: while two symbols are positive, lower the two smallest by the
/// smaller one and move twice that amount to erasure.
ConfidenceDist merge_masses(std::vector<std::pair<Symbol, std::uint64_t>> masses, std::uint64_t bot, std::uint64_t den);

struct LargePlan {
    std::size_t target = 0;
    std::vector<std::size_t> queries;  ///< curve-major, lambda-major, inner position
};

struct QueryLists {
    std::vector<LargePlan> lists;  ///< lists[i] decodes message symbol i
    std::size_t cap = 0;
    std::size_t resamples = 0;
};

/// One line per list, decimal codeword indices separated by spaces.
std::string serialize_qlists(const QueryLists& lists);
/// Inverse of serialize_qlists for the index rows; targets and cap are not stored.
std::vector<std::vector<std::size_t>> parse_qlists(const std::string& text);

/// ceil(3 r Q^2 / R).
std::size_t overlap_cap(std::size_t r, std::size_t Q, std::size_t R);

class LargeLdc {
public:
    explicit LargeLdc(LargeLdcParams params);

    const LargeLdcParams& params() const { return params_; }
    const FieldPtr& symbol_field() const { return symbol_field_; }
    const FieldPtr& field() const { return field_; }
    const ReedMuller& rm() const { return rm_; }
    const LinearCode& inner() const { return inner_; }
    std::size_t inner_len() const { return inner_.code_len(); }
    std::size_t length() const { return params_.points() * inner_len(); }
    std::size_t queries_per_decode() const { return params_.queries_per_decode(inner_len()); }

    Word encode(std::span<const Symbol> msg) const;
    LinearCode as_linear_code() const;
    std::size_t message_position(std::size_t i) const;

    LargePlan plan_smooth(std::size_t target, Rng& rng) const;
    ConfidenceDist finish_smooth(const LargePlan& plan, std::span<const Symbol> answers) const;
    ConfidenceDist smooth_correct(const Oracle& w, std::size_t target, Rng& rng) const;
    ConfidenceDist smooth_decode(const Oracle& w, std::size_t i, Rng& rng) const {
        return smooth_correct(w, message_position(i), rng);
    }

    /// One query plan per message symbol, with no codeword index in more than
    /// `cap` lists (default overlap_cap(r, Q, length())). Each list is resampled
    /// at most Q^2 times before ResampleExhausted.
    QueryLists gen_qlists(Rng& rng, std::optional<std::size_t> cap = std::nullopt) const;

    const ConcatRs& curve_code() const { return curve_code_; }

private:
    LargeLdcParams params_;
    FieldPtr symbol_field_;
    FieldPtr field_;
    ReedMuller rm_;
    LinearCode inner_;
    ConcatRs curve_code_;
};

struct SmoothnessReport {
    double max_frequency = 0;  ///< max over indices of Pr[index queried]
    double bound = 0;          ///< 1.1 Q'/N with Q' the queries per decode
    double slack = 0;          ///< 3 sigma of the estimate at the bound
};

SmoothnessReport query_smoothness_check(const LargeLdc& ldc, std::size_t target, std::size_t trials, Rng& rng);

}  // namespace streamcode
