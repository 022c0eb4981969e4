#pragma once

// Generator-matrix linear codes and the brute-force oracles that check them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "streamcode/gf.hpp"
#include "streamcode/linalg.hpp"

namespace streamcode {

/// Marks an erased position in a Word.
inline constexpr Symbol kErasure = 0xFFFFFFFFU;

/// Received word over the code alphabet, possibly containing kErasure.
using Word = std::vector<Symbol>;

/// Hamming distance in half units: a mismatch costs 2, an erasure against
/// anything costs 1.
std::size_t half_distance(std::span<const Symbol> a, std::span<const Symbol> b);

/// Linear code K^m -> K^M given by an M x m generator matrix.
class LinearCode {
public:
    LinearCode(FieldPtr field, linalg::Matrix generator, std::optional<std::vector<std::size_t>> systematic,
               std::string kind);

    const FieldPtr& field() const { return field_; }
    std::size_t msg_len() const { return generator_.cols; }
    std::size_t code_len() const { return generator_.rows; }
    const linalg::Matrix& generator() const { return generator_; }
    const std::optional<std::vector<std::size_t>>& systematic() const { return systematic_; }
    const std::string& kind() const { return kind_; }

    /// log2 of the number of messages.
    double message_space_log2() const { return static_cast<double>(msg_len()) * field_->degree(); }

    Word encode(std::span<const Symbol> msg) const;

    /// Restriction of a codeword to the systematic positions.
    std::vector<Symbol> extract(std::span<const Symbol> codeword) const;

private:
    FieldPtr field_;
    linalg::Matrix generator_;
    std::optional<std::vector<std::size_t>> systematic_;
    std::string kind_;
};

LinearCode identity_code(FieldPtr field, std::size_t length);

/// Reed-Solomon: polynomials of degree < degree_bound evaluated at `points`,
/// systematic on the first degree_bound points.
LinearCode rs_code(FieldPtr field, std::span<const Symbol> points, std::size_t degree_bound);

/// Reed-Muller over F_q: m-variate polynomials of total degree <= d at all q^m points.
LinearCode rm_code(FieldPtr field, unsigned variables, unsigned degree);

/// Each outer symbol (over F = K^e) replaced by the inner encoding of its K-coordinates.
/// The inner code must take exactly e = [F:K] symbols.
LinearCode concat(const LinearCode& outer, const LinearCode& inner);

/// Binary simplex code [2^b - 1, b, 2^{b-1}], systematic on the first b
/// positions with the packed bits most significant first.
LinearCode simplex_code(unsigned bits);

/// The code repeated `copies` times side by side.
LinearCode replicate(const LinearCode& code, unsigned copies);

/// Systematic linear code over `field` of relative distance at least
/// 1 - 1/|K| - eps: an outer RS code concatenated with a searched inner code.
/// Throws SearchExhausted when no inner code is found within the retry budget.
LinearCode ecc_eps(FieldPtr field, double eps, std::size_t n, std::uint64_t seed);

/// Largest message space (log2) the enumeration oracles accept.
inline constexpr double kBruteForceLimitLog2 = 20.0;

struct NearestCodeword {
    std::vector<Symbol> message;
    std::size_t half_distance;  ///< erasures count 1, mismatches 2
};

/// Exact argmin over all codewords; ties keep the lexicographically first message.
NearestCodeword nearest_codeword_bruteforce(const LinearCode& code, std::span<const Symbol> word);

/// Exact minimum Hamming distance (in symbols).
std::size_t min_distance_bruteforce(const LinearCode& code);

/// Nearest-codeword decoder that only answers inside the unique radius.
class UniqueDecoder {
public:
    explicit UniqueDecoder(const LinearCode& code);

    std::size_t min_distance() const { return min_distance_; }

    /// The message x with 2 * dist(w, code(x)) < d_min (erasures at 1/2), or nullopt.
    std::optional<std::vector<Symbol>> decode(std::span<const Symbol> word) const;

private:
    const LinearCode& code_;
    std::size_t min_distance_;
};

std::optional<std::vector<Symbol>> unique_decode(const LinearCode& code, std::span<const Symbol> word);

/// Canonical text descriptor; identical descriptors give identical codewords.
std::string to_descriptor(const LinearCode& code);
LinearCode from_descriptor(const std::string& text);

}  // namespace streamcode
