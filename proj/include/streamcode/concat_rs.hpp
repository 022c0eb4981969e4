#pragma once

// Reed-Solomon outer code (messages are coefficient vectors) concatenated with
// a small inner code, with GMD unique decoding and exhaustive list decoding.
// The restriction of an RM codeword to a curve is exactly such a code.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "streamcode/codes.hpp"
#include "streamcode/gf.hpp"

namespace streamcode {

struct Decoded {
    std::vector<Symbol> coeffs;  ///< h, low to high, length degree_bound
    std::size_t half_distance;
};

class ConcatRs {
public:
    /// `inner` takes [F:K] symbols of its own field K and outer symbols live in F.
    ConcatRs(FieldPtr outer, std::vector<Symbol> points, std::size_t degree_bound, LinearCode inner);

    const FieldPtr& outer_field() const { return outer_; }
    const LinearCode& inner() const { return inner_; }
    const std::vector<Symbol>& points() const { return points_; }
    std::size_t degree_bound() const { return degree_bound_; }
    std::size_t blocks() const { return points_.size(); }
    std::size_t block_len() const { return inner_.code_len(); }
    std::size_t length() const { return blocks() * block_len(); }
    std::size_t inner_distance() const { return inner_distance_; }
    /// (n - K + 1) * d_inner.
    std::size_t designed_distance() const { return (blocks() - degree_bound_ + 1) * inner_distance_; }

    const Embedding& embedding() const { return emb_; }
    /// Inner encoding of one outer symbol.
    std::span<const Symbol> inner_codeword(Symbol s) const {
        return {inner_words_.data() + static_cast<std::size_t>(s) * block_len(), block_len()};
    }

    Word encode(std::span<const Symbol> coeffs) const;

    /// Equivalent generator-matrix code over K; its messages are the
    /// K-coordinates of the coefficients (see flatten / unflatten).
    LinearCode as_linear_code() const;
    std::vector<Symbol> flatten(std::span<const Symbol> coeffs) const;
    std::vector<Symbol> unflatten(std::span<const Symbol> coords) const;

    /// table[j * |F| + s] = half distance between block j of w and inner_codeword(s).
    std::vector<std::uint32_t> block_distances(std::span<const Symbol> word) const;
    std::size_t half_distance(std::span<const std::uint32_t> table, std::span<const Symbol> coeffs) const;

    /// Unique decoding: the h with half distance < designed_distance(), found by
    /// inner ML decoding, reliability-threshold erasures and Berlekamp-Welch.
    std::optional<Decoded> gmd_decode(std::span<const Symbol> word) const;

    /// Every h with half distance <= max_half, by enumeration (|F|^K <= 2^20).
    std::vector<Decoded> list_decode(std::span<const Symbol> word, std::size_t max_half) const;

    /// Every h with h(x) = y for all `fixed` pairs and half distance <= max_half.
    /// Enumerates the coset of polynomials through the fixed points only.
    std::vector<Decoded> list_decode_through(std::span<const Symbol> word,
                                             std::span<const std::pair<Symbol, Symbol>> fixed,
                                             std::size_t max_half) const;

private:
    std::optional<std::vector<Symbol>> berlekamp_welch(std::span<const std::size_t> kept,
                                                       std::span<const Symbol> values) const;

    FieldPtr outer_;
    Embedding emb_;
    std::vector<Symbol> points_;
    std::size_t degree_bound_;
    LinearCode inner_;
    std::vector<Symbol> inner_words_;
    std::size_t inner_distance_;
};

/// Messages within relative distance (1 - eps)/2 of w, erasures at 1/2.
std::vector<Decoded> list_decode_concat(const ConcatRs& code, std::span<const Symbol> word, double eps);

}  // namespace streamcode
