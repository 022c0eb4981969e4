#include "streamcode/gf.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <mutex>

#include "streamcode/errors.hpp"

namespace streamcode {

namespace {

constexpr std::array<std::uint32_t, 13> kStandardModuli = {
    0,      // unused
    0x3,    // x + 1
    0x7,    // x^2 + x + 1
    0xb,    // x^3 + x + 1
    0x13,   // x^4 + x + 1
    0x25,   // x^5 + x^2 + 1
    0x43,   // x^6 + x + 1
    0x83,   // x^7 + x + 1
    0x11d,  // x^8 + x^4 + x^3 + x^2 + 1
    0x211,  // x^9 + x^4 + 1
    0x409,  // x^10 + x^3 + 1
    0x805,  // x^11 + x^2 + 1
    0x1053, // x^12 + x^6 + x^4 + x + 1
};

int bit_degree(std::uint64_t p) { return p == 0 ? -1 : 63 - std::countl_zero(p); }

std::uint64_t gf2_mod(std::uint64_t a, std::uint64_t b) {
    const int db = bit_degree(b);
    for (int da = bit_degree(a); da >= db; da = bit_degree(a)) a ^= b << (da - db);
    return a;
}

}  // namespace

Symbol slow_mul(Symbol a, Symbol b, unsigned degree, std::uint32_t modulus) {
    std::uint64_t acc = 0;
    for (unsigned i = 0; i < 32; ++i)
        if ((b >> i) & 1U) acc ^= static_cast<std::uint64_t>(a) << i;
    for (int d = bit_degree(acc); d >= static_cast<int>(degree); d = bit_degree(acc))
        acc ^= static_cast<std::uint64_t>(modulus) << (d - static_cast<int>(degree));
    return static_cast<Symbol>(acc);
}

bool is_irreducible(std::uint32_t poly) {
    const int deg = bit_degree(poly);
    if (deg < 1) return false;
    for (std::uint64_t divisor = 2; bit_degree(divisor) <= deg / 2; ++divisor)
        if (gf2_mod(poly, divisor) == 0) return false;
    return true;
}

Field::Field(unsigned degree, std::uint32_t modulus) : degree_(degree), modulus_(modulus) {
    if (degree < 1 || degree > 16) throw InvalidArgument("field degree must be in 1..16");
    if (bit_degree(modulus) != static_cast<int>(degree))
        throw InvalidArgument("modulus degree does not match field degree");
    if (!is_irreducible(modulus)) throw InvalidArgument("modulus is reducible");
    size_ = 1U << degree;

    // Find a multiplicative generator so log/exp tables cover every nonzero element.
    const std::uint32_t order = size_ - 1;
    Symbol generator = 0;
    for (Symbol g = 1; g < size_ && generator == 0; ++g) {
        Symbol x = g;
        std::uint32_t k = 1;
        while (x != 1) {
            x = slow_mul(x, g, degree, modulus);
            ++k;
        }
        if (k == order) generator = g;
    }
    exp_.assign(2 * static_cast<std::size_t>(order), 0);
    log_.assign(size_, 0);
    Symbol x = 1;
    for (std::uint32_t i = 0; i < order; ++i) {
        exp_[i] = x;
        exp_[i + order] = x;
        log_[x] = i;
        x = slow_mul(x, generator, degree, modulus);
    }
}

std::uint32_t Field::standard_modulus(unsigned degree) {
    return degree < kStandardModuli.size() ? kStandardModuli[degree] : 0;
}

std::shared_ptr<const Field> Field::standard(unsigned degree) {
    static std::mutex mutex;
    static std::map<unsigned, std::shared_ptr<const Field>> cache;
    const std::uint32_t modulus = standard_modulus(degree);
    if (modulus == 0) throw InvalidArgument("no standard modulus for degree " + std::to_string(degree));
    std::lock_guard lock(mutex);
    auto& slot = cache[degree];
    if (!slot) slot = std::make_shared<const Field>(degree, modulus);
    return slot;
}

Symbol Field::inv(Symbol a) const {
    if (a == 0) throw ZeroInverse("inverse of zero");
    const std::uint32_t order = size_ - 1;
    return exp_[(order - log_[a]) % order];
}

Symbol Field::pow(Symbol a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const std::uint64_t order = size_ - 1;
    return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % order)) % order];
}

std::string Field::to_hex(Symbol a) const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(hex_width(), '0');
    for (unsigned i = 0; i < hex_width(); ++i) out[hex_width() - 1 - i] = digits[(a >> (4 * i)) & 0xF];
    return out;
}

Symbol Field::from_hex(std::string_view text) const {
    if (text.size() != hex_width()) throw FormatError("field element hex has wrong width");
    Symbol v = 0;
    for (char c : text) {
        unsigned d;
        if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f') d = static_cast<unsigned>(c - 'a' + 10);
        else throw FormatError("invalid hex digit");
        v = (v << 4) | d;
    }
    if (!contains(v)) throw FormatError("field element out of range");
    return v;
}

// ---------------------------------------------------------------- FieldElem

FieldElem::FieldElem(FieldPtr field, Symbol value) : field_(std::move(field)), value_(value) {
    if (!field_->contains(value_)) throw InvalidArgument("value does not fit the field");
}

FieldElem FieldElem::operator+(const FieldElem& other) const {
    if (!(*field_ == *other.field_)) throw FieldMismatch("add across fields");
    return {field_, field_->add(value_, other.value_)};
}

FieldElem FieldElem::operator*(const FieldElem& other) const {
    if (!(*field_ == *other.field_)) throw FieldMismatch("mul across fields");
    return {field_, field_->mul(value_, other.value_)};
}

FieldElem FieldElem::inverse() const { return {field_, field_->inv(value_)}; }

bool FieldElem::operator==(const FieldElem& other) const {
    return *field_ == *other.field_ && value_ == other.value_;
}

// --------------------------------------------------------------------- Poly

namespace poly {

void trim(std::vector<Symbol>& coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

Symbol eval(const Field& f, std::span<const Symbol> coeffs, Symbol x) {
    Symbol acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = f.mul(acc, x) ^ *it;
    return acc;
}

std::vector<Symbol> mul(const Field& f, std::span<const Symbol> a, std::span<const Symbol> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Symbol> out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] ^= f.mul(a[i], b[j]);
    }
    trim(out);
    return out;
}

std::pair<std::vector<Symbol>, std::vector<Symbol>> divmod(const Field& f, std::span<const Symbol> a,
                                                           std::span<const Symbol> b) {
    std::vector<Symbol> rem(a.begin(), a.end());
    std::vector<Symbol> den(b.begin(), b.end());
    trim(rem);
    trim(den);
    if (den.empty()) throw ZeroInverse("polynomial division by zero");
    if (rem.size() < den.size()) return {{}, rem};
    std::vector<Symbol> quot(rem.size() - den.size() + 1, 0);
    const Symbol lead_inv = f.inv(den.back());
    for (std::size_t i = rem.size(); i-- >= den.size();) {
        const Symbol c = f.mul(rem[i], lead_inv);
        if (c == 0) continue;
        const std::size_t shift = i + 1 - den.size();
        quot[shift] = c;
        for (std::size_t j = 0; j < den.size(); ++j) rem[shift + j] ^= f.mul(c, den[j]);
    }
    trim(quot);
    trim(rem);
    return {quot, rem};
}

std::vector<Symbol> from_roots(const Field& f, std::span<const Symbol> roots) {
    std::vector<Symbol> out{1};
    for (Symbol r : roots) {
        std::vector<Symbol> next(out.size() + 1, 0);
        for (std::size_t i = 0; i < out.size(); ++i) {
            next[i + 1] ^= out[i];
            next[i] ^= f.mul(out[i], r);
        }
        out = std::move(next);
    }
    return out;
}

std::vector<Symbol> interpolate(const Field& f, std::span<const Symbol> xs, std::span<const Symbol> ys) {
    if (xs.size() != ys.size()) throw LengthMismatch("interpolation abscissae/ordinates differ in length");
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            if (xs[i] == xs[j]) throw DuplicateAbscissa("duplicate interpolation abscissa");
    std::vector<Symbol> out(xs.size(), 0);
    const std::vector<Symbol> full = from_roots(f, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ys[i] == 0) continue;
        // basis_i = full / (x - x_i), scaled so basis_i(x_i) = 1
        const std::array<Symbol, 2> lin{xs[i], 1};
        auto [basis, rem] = divmod(f, full, lin);
        const Symbol scale = f.div(ys[i], eval(f, basis, xs[i]));
        for (std::size_t j = 0; j < basis.size(); ++j) out[j] ^= f.mul(scale, basis[j]);
    }
    trim(out);
    return out;
}

}  // namespace poly

Poly::Poly(FieldPtr field, std::vector<Symbol> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    for (Symbol c : coeffs_)
        if (!field_->contains(c)) throw InvalidArgument("coefficient does not fit the field");
    poly::trim(coeffs_);
}

Symbol Poly::eval(Symbol x) const { return poly::eval(*field_, coeffs_, x); }

FieldElem Poly::eval(const FieldElem& x) const {
    if (!(*field_ == *x.field())) throw FieldMismatch("evaluation point from another field");
    return {field_, eval(x.value())};
}

Poly Poly::interpolate(FieldPtr field, std::span<const std::pair<Symbol, Symbol>> points) {
    std::vector<Symbol> xs, ys;
    for (auto [x, y] : points) {
        xs.push_back(x);
        ys.push_back(y);
    }
    auto coeffs = poly::interpolate(*field, xs, ys);
    return Poly(std::move(field), std::move(coeffs));
}

Poly Poly::interpolate(std::span<const std::pair<FieldElem, FieldElem>> points) {
    if (points.empty()) throw InvalidArgument("interpolation needs at least one point");
    const FieldPtr& field = points.front().first.field();
    std::vector<std::pair<Symbol, Symbol>> raw;
    for (const auto& [x, y] : points) {
        if (!(*x.field() == *field) || !(*y.field() == *field)) throw FieldMismatch("mixed-field points");
        raw.emplace_back(x.value(), y.value());
    }
    return interpolate(field, raw);
}

// ---------------------------------------------------------------- Embedding

Embedding::Embedding(FieldPtr base, FieldPtr ext) : base_(std::move(base)), ext_(std::move(ext)) {
    if (ext_->degree() % base_->degree() != 0) throw InvalidArgument("base degree must divide extension degree");
    ratio_ = ext_->degree() / base_->degree();

    // beta: a root of the base modulus inside the extension.
    // Same field: use x itself so the lift is the identity, not a Frobenius twist.
    Symbol beta = 0;
    bool found = false;
    if (*base_ == *ext_) {
        beta = base_->degree() == 1 ? 1 : 2;
        found = true;
    }
    for (Symbol cand = 0; cand < ext_->size() && !found; ++cand) {
        Symbol acc = 0;
        for (int i = static_cast<int>(base_->degree()); i >= 0; --i)
            acc = ext_->mul(acc, cand) ^ ((base_->modulus() >> i) & 1U);
        if (acc == 0) {
            beta = cand;
            found = true;
        }
    }
    if (!found) throw InvalidArgument("base modulus has no root in extension");
    lift_.resize(base_->size());
    for (Symbol a = 0; a < base_->size(); ++a) {
        Symbol acc = 0;
        Symbol power = 1;
        for (unsigned i = 0; i < base_->degree(); ++i) {
            if ((a >> i) & 1U) acc ^= power;
            power = ext_->mul(power, beta);
        }
        lift_[a] = acc;
    }

    if (base_->degree() == 1) {
        for (unsigned j = 0; j < ratio_; ++j) basis_.push_back(1U << (ratio_ - 1 - j));
    } else {
        std::vector<char> in_span(ext_->size(), 0);
        std::vector<Symbol> span{0};
        in_span[0] = 1;
        for (Symbol cand = 1; cand < ext_->size() && basis_.size() < ratio_; ++cand) {
            if (in_span[cand]) continue;
            basis_.push_back(cand);
            std::vector<Symbol> next;
            for (Symbol s : span)
                for (Symbol a = 0; a < base_->size(); ++a) next.push_back(s ^ ext_->mul(lift_[a], cand));
            span = std::move(next);
            for (Symbol s : span) in_span[s] = 1;
        }
    }

    coords_.assign(static_cast<std::size_t>(ext_->size()) * ratio_, 0);
    std::vector<Symbol> digits(ratio_, 0);
    for (std::uint32_t combo = 0; combo < ext_->size(); ++combo) {
        std::uint32_t rest = combo;
        for (unsigned j = ratio_; j-- > 0;) {
            digits[j] = rest % base_->size();
            rest /= base_->size();
        }
        const Symbol v = from_coords(digits);
        std::copy(digits.begin(), digits.end(), coords_.begin() + static_cast<std::ptrdiff_t>(v) * ratio_);
    }
}

Symbol Embedding::from_coords(std::span<const Symbol> coords) const {
    if (coords.size() != ratio_) throw LengthMismatch("coordinate vector has wrong length");
    Symbol acc = 0;
    for (unsigned j = 0; j < ratio_; ++j) acc ^= ext_->mul(lift_[coords[j]], basis_[j]);
    return acc;
}

}  // namespace streamcode
