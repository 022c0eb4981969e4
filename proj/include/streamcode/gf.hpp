#pragma once

// Arithmetic over binary extension fields GF(2^k) and univariate
// polynomials over them.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace streamcode {

/// Packed field element: bit i is the coefficient of x^i.
using Symbol = std::uint32_t;

/// GF(2^k) given by an irreducible modulus of degree k over GF(2).
class Field {
public:
    /// Throws InvalidArgument unless `modulus` has degree `degree` and is irreducible.
    Field(unsigned degree, std::uint32_t modulus);

    /// Field from the fixed modulus table (k in 1..12).
    static std::shared_ptr<const Field> standard(unsigned degree);

    /// Modulus used by standard(); 0 if the degree has no table entry.
    static std::uint32_t standard_modulus(unsigned degree);

    unsigned degree() const { return degree_; }
    std::uint32_t modulus() const { return modulus_; }
    std::uint32_t size() const { return size_; }
    bool contains(Symbol a) const { return a < size_; }

    Symbol add(Symbol a, Symbol b) const { return a ^ b; }
    Symbol mul(Symbol a, Symbol b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    Symbol inv(Symbol a) const;
    Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }
    Symbol pow(Symbol a, std::uint64_t e) const;

    /// Lowercase hex, fixed width ceil(k/4).
    std::string to_hex(Symbol a) const;
    Symbol from_hex(std::string_view text) const;
    unsigned hex_width() const { return (degree_ + 3) / 4; }

    bool operator==(const Field& other) const {
        return degree_ == other.degree_ && modulus_ == other.modulus_;
    }

private:
    unsigned degree_;
    std::uint32_t modulus_;
    std::uint32_t size_;
    std::vector<Symbol> exp_;  // doubled so log sums need no reduction
    std::vector<std::uint32_t> log_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Carry-less product reduced by `modulus`; independent of the log tables.
Symbol slow_mul(Symbol a, Symbol b, unsigned degree, std::uint32_t modulus);

/// Irreducibility over GF(2) by trial division up to degree/2.
bool is_irreducible(std::uint32_t poly);

/// A value together with the field it lives in. Mixed-field arithmetic throws FieldMismatch.
class FieldElem {
public:
    FieldElem(FieldPtr field, Symbol value);

    const FieldPtr& field() const { return field_; }
    Symbol value() const { return value_; }
    bool is_zero() const { return value_ == 0; }

    FieldElem operator+(const FieldElem& other) const;
    FieldElem operator-(const FieldElem& other) const { return *this + other; }
    FieldElem operator*(const FieldElem& other) const;
    FieldElem inverse() const;
    bool operator==(const FieldElem& other) const;

    std::string to_hex() const { return field_->to_hex(value_); }

private:
    FieldPtr field_;
    Symbol value_;
};

/// Univariate polynomial, coefficients low to high, trailing zeros trimmed.
class Poly {
public:
    explicit Poly(FieldPtr field, std::vector<Symbol> coeffs = {});

    const FieldPtr& field() const { return field_; }
    const std::vector<Symbol>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    Symbol eval(Symbol x) const;
    FieldElem eval(const FieldElem& x) const;

    /// Lagrange interpolation through points with distinct abscissae.
    static Poly interpolate(FieldPtr field, std::span<const std::pair<Symbol, Symbol>> points);
    static Poly interpolate(std::span<const std::pair<FieldElem, FieldElem>> points);

    bool operator==(const Poly& other) const {
        return *field_ == *other.field_ && coeffs_ == other.coeffs_;
    }

private:
    FieldPtr field_;
    std::vector<Symbol> coeffs_;
};

// Raw coefficient-vector helpers used by the decoders.
namespace poly {

Symbol eval(const Field& f, std::span<const Symbol> coeffs, Symbol x);
std::vector<Symbol> mul(const Field& f, std::span<const Symbol> a, std::span<const Symbol> b);
/// Quotient and remainder of a / b; b must be nonzero after trimming.
std::pair<std::vector<Symbol>, std::vector<Symbol>> divmod(const Field& f, std::span<const Symbol> a,
                                                           std::span<const Symbol> b);
void trim(std::vector<Symbol>& coeffs);
/// prod (x - r) over roots.
std::vector<Symbol> from_roots(const Field& f, std::span<const Symbol> roots);
/// Coefficients of the unique polynomial of degree < xs.size() through (xs, ys).
std::vector<Symbol> interpolate(const Field& f, std::span<const Symbol> xs, std::span<const Symbol> ys);

}  // namespace poly

/// Embedding of a subfield K = GF(2^k) into F = GF(2^{k e}), with a fixed
/// K-basis of F so that F symbols map K-linearly to e coordinates.
///
/// For K = GF(2) the basis is x^{e-1}, ..., x, 1, so coordinates are the
/// packed bits most significant first.
class Embedding {
public:
    Embedding(FieldPtr base, FieldPtr ext);

    const FieldPtr& base() const { return base_; }
    const FieldPtr& ext() const { return ext_; }
    unsigned ratio() const { return ratio_; }

    Symbol lift(Symbol base_value) const { return lift_[base_value]; }
    /// Coordinates of an F symbol, length ratio().
    std::span<const Symbol> coords(Symbol ext_value) const {
        return {coords_.data() + static_cast<std::size_t>(ext_value) * ratio_, ratio_};
    }
    Symbol from_coords(std::span<const Symbol> coords) const;

private:
    FieldPtr base_;
    FieldPtr ext_;
    unsigned ratio_;
    std::vector<Symbol> lift_;
    std::vector<Symbol> basis_;
    std::vector<Symbol> coords_;
};

}  // namespace streamcode
