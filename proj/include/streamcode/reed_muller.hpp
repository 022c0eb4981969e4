#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "streamcode/gf.hpp"
#include "streamcode/linalg.hpp"

namespace streamcode {

/// Reed-Muller evaluation structure over F_q^m with a systematic layout:
/// the message symbols are the codeword values at `systematic_points()`.
///
/// Points are indexed lexicographically, first coordinate most significant.
class ReedMuller {
public:
    ReedMuller(FieldPtr field, unsigned variables, unsigned degree);

    const FieldPtr& field() const { return field_; }
    unsigned variables() const { return variables_; }
    unsigned degree() const { return degree_; }
    std::size_t msg_len() const { return monomials_.size(); }
    std::size_t num_points() const { return num_points_; }

    /// Exponent vectors of the monomials of total degree <= d.
    const std::vector<std::vector<unsigned>>& monomials() const { return monomials_; }
    /// Point indices carrying the message, chosen greedily in lexicographic order.
    const std::vector<std::size_t>& systematic_points() const { return systematic_; }

    std::vector<Symbol> point(std::size_t index) const;
    std::size_t index_of(std::span<const Symbol> point) const;

    /// Evaluations at every point; positions systematic_points()[i] carry msg[i].
    std::vector<Symbol> encode(std::span<const Symbol> msg) const;
    /// Monomial coefficients of the polynomial encoding msg.
    std::vector<Symbol> coefficients(std::span<const Symbol> msg) const;

    /// q^m x msg_len generator in the systematic layout.
    linalg::Matrix generator() const;

private:
    std::vector<Symbol> monomial_row(std::span<const Symbol> point) const;

    FieldPtr field_;
    unsigned variables_;
    unsigned degree_;
    std::size_t num_points_;
    std::vector<std::vector<unsigned>> monomials_;
    std::vector<std::size_t> systematic_;
    linalg::Matrix to_coeffs_;  // msg -> coefficients
};

}  // namespace streamcode
