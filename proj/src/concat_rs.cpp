#include "streamcode/concat_rs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "streamcode/errors.hpp"
#include "streamcode/linalg.hpp"

namespace streamcode {

ConcatRs::ConcatRs(FieldPtr outer, std::vector<Symbol> points, std::size_t degree_bound, LinearCode inner)
    : outer_(std::move(outer)),
      emb_(inner.field(), outer_),
      points_(std::move(points)),
      degree_bound_(degree_bound),
      inner_(std::move(inner)) {
    if (degree_bound_ == 0 || degree_bound_ > points_.size())
        throw InvalidArgument("degree bound must be in 1..#points");
    std::vector<char> seen(outer_->size(), 0);
    for (Symbol p : points_) {
        if (!outer_->contains(p)) throw InvalidArgument("evaluation point outside the field");
        if (seen[p]++) throw DuplicateAbscissa("evaluation points must be distinct");
    }
    if (inner_.msg_len() != emb_.ratio()) throw InvalidArgument("inner code must take [F:K] symbols");
    inner_words_.resize(static_cast<std::size_t>(outer_->size()) * block_len());
    for (Symbol s = 0; s < outer_->size(); ++s) {
        const auto cw = inner_.encode(emb_.coords(s));
        std::copy(cw.begin(), cw.end(), inner_words_.begin() + static_cast<std::ptrdiff_t>(s * block_len()));
    }
    inner_distance_ = block_len();
    for (Symbol s = 1; s < outer_->size(); ++s) {
        const auto cw = inner_codeword(s);
        inner_distance_ = std::min<std::size_t>(
            inner_distance_, static_cast<std::size_t>(std::count_if(cw.begin(), cw.end(), [](Symbol v) { return v != 0; })));
    }
}

Word ConcatRs::encode(std::span<const Symbol> coeffs) const {
    if (coeffs.size() != degree_bound_) throw LengthMismatch("coefficient vector has wrong length");
    Word out;
    out.reserve(length());
    for (Symbol p : points_) {
        const auto cw = inner_codeword(poly::eval(*outer_, coeffs, p));
        out.insert(out.end(), cw.begin(), cw.end());
    }
    return out;
}

LinearCode ConcatRs::as_linear_code() const {
    linalg::Matrix vander(points_.size(), degree_bound_);
    for (std::size_t r = 0; r < points_.size(); ++r)
        for (std::size_t c = 0; c < degree_bound_; ++c) vander.at(r, c) = outer_->pow(points_[r], c);
    return concat(LinearCode(outer_, std::move(vander), std::nullopt, "rs-coeff"), inner_);
}

std::vector<Symbol> ConcatRs::flatten(std::span<const Symbol> coeffs) const {
    std::vector<Symbol> out;
    for (Symbol c : coeffs) {
        const auto co = emb_.coords(c);
        out.insert(out.end(), co.begin(), co.end());
    }
    return out;
}

std::vector<Symbol> ConcatRs::unflatten(std::span<const Symbol> coords) const {
    if (coords.size() % emb_.ratio() != 0) throw LengthMismatch("coordinate vector not a multiple of [F:K]");
    std::vector<Symbol> out;
    for (std::size_t i = 0; i < coords.size(); i += emb_.ratio())
        out.push_back(emb_.from_coords(coords.subspan(i, emb_.ratio())));
    return out;
}

std::vector<std::uint32_t> ConcatRs::block_distances(std::span<const Symbol> word) const {
    if (word.size() != length()) throw LengthMismatch("received word has wrong length");
    const std::size_t q = outer_->size();
    std::vector<std::uint32_t> table(blocks() * q);
    for (std::size_t j = 0; j < blocks(); ++j) {
        const auto block = word.subspan(j * block_len(), block_len());
        for (Symbol s = 0; s < q; ++s)
            table[j * q + s] = static_cast<std::uint32_t>(streamcode::half_distance(block, inner_codeword(s)));
    }
    return table;
}

std::size_t ConcatRs::half_distance(std::span<const std::uint32_t> table, std::span<const Symbol> coeffs) const {
    const std::size_t q = outer_->size();
    std::size_t total = 0;
    for (std::size_t j = 0; j < blocks(); ++j) total += table[j * q + poly::eval(*outer_, coeffs, points_[j])];
    return total;
}

std::optional<std::vector<Symbol>> ConcatRs::berlekamp_welch(std::span<const std::size_t> kept,
                                                            std::span<const Symbol> values) const {
    const Field& f = *outer_;
    const std::size_t n = kept.size();
    if (n < degree_bound_) return std::nullopt;
    const std::size_t e = (n - degree_bound_) / 2;
    const std::size_t num_len = e + degree_bound_;
    // unknowns: N_0..N_{num_len-1}, E_0..E_{e-1}; E monic of degree e
    linalg::Matrix a(n, num_len + e);
    std::vector<Symbol> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Symbol x = points_[kept[i]];
        const Symbol y = values[i];
        Symbol xp = 1;
        for (std::size_t c = 0; c < num_len; ++c) {
            a.at(i, c) = xp;
            if (c < e) a.at(i, num_len + c) = f.mul(y, xp);  // char 2: minus is plus
            xp = f.mul(xp, x);
        }
        rhs[i] = f.mul(y, f.pow(x, e));
    }
    auto sol = linalg::solve(f, std::move(a), std::move(rhs));
    if (!sol) return std::nullopt;
    std::vector<Symbol> num(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(num_len));
    std::vector<Symbol> err(sol->begin() + static_cast<std::ptrdiff_t>(num_len), sol->end());
    err.push_back(1);
    poly::trim(num);
    if (num.empty()) return std::vector<Symbol>(degree_bound_, 0);
    auto [quot, rem] = poly::divmod(f, num, err);
    if (!rem.empty() || quot.size() > degree_bound_) return std::nullopt;
    quot.resize(degree_bound_, 0);
    return quot;
}

std::optional<Decoded> ConcatRs::gmd_decode(std::span<const Symbol> word) const {
    const auto table = block_distances(word);
    const std::size_t q = outer_->size();
    std::vector<Symbol> guess(blocks());
    std::vector<std::uint32_t> unreliability(blocks());
    for (std::size_t j = 0; j < blocks(); ++j) {
        const auto* row = table.data() + j * q;
        const auto best = std::min_element(row, row + q);
        guess[j] = static_cast<Symbol>(best - row);
        unreliability[j] = *best;
    }
    std::vector<std::size_t> order(blocks());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return unreliability[a] > unreliability[b]; });

    // Erase the `cut` least reliable blocks, for every threshold between distinct reliabilities.
    std::vector<Symbol> values;
    for (std::size_t cut = 0; cut + degree_bound_ <= blocks(); ++cut) {
        if (cut > 0 && cut < blocks() && unreliability[order[cut - 1]] == unreliability[order[cut]]) continue;
        std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(cut), order.end());
        std::sort(idx.begin(), idx.end());
        values.clear();
        for (std::size_t j : idx) values.push_back(guess[j]);
        auto cand = berlekamp_welch(idx, values);
        if (!cand) continue;
        const std::size_t hd = half_distance(table, *cand);
        if (hd < designed_distance()) return Decoded{std::move(*cand), hd};
    }
    return std::nullopt;
}

namespace {

// Advance a little-endian odometer over [0, q)^len; false once it wraps.
bool step(std::vector<Symbol>& digits, Symbol q) {
    for (auto& d : digits) {
        if (++d < q) return true;
        d = 0;
    }
    return false;
}

}  // namespace

std::vector<Decoded> ConcatRs::list_decode(std::span<const Symbol> word, std::size_t max_half) const {
    if (static_cast<double>(degree_bound_) * outer_->degree() > kBruteForceLimitLog2)
        throw SpaceTooLarge("list decoding enumerates at most 2^20 polynomials");
    const auto table = block_distances(word);
    std::vector<Decoded> out;
    std::vector<Symbol> coeffs(degree_bound_, 0);
    do {
        const std::size_t hd = half_distance(table, coeffs);
        if (hd <= max_half) out.push_back({coeffs, hd});
    } while (step(coeffs, outer_->size()));
    return out;
}

std::vector<Decoded> ConcatRs::list_decode_through(std::span<const Symbol> word,
                                                   std::span<const std::pair<Symbol, Symbol>> fixed,
                                                   std::size_t max_half) const {
    const Field& f = *outer_;
    if (fixed.size() > degree_bound_) throw InvalidArgument("more fixed points than coefficients");
    std::vector<Symbol> xs, ys;
    for (const auto& [x, y] : fixed) {
        xs.push_back(x);
        ys.push_back(y);
    }
    const auto base = poly::interpolate(f, xs, ys);
    const auto vanish = poly::from_roots(f, xs);
    const std::size_t free = degree_bound_ - fixed.size();
    if (static_cast<double>(free) * f.degree() > kBruteForceLimitLog2)
        throw SpaceTooLarge("advice coset exceeds 2^20 polynomials");

    const auto table = block_distances(word);
    std::vector<Decoded> out;
    std::vector<Symbol> g(free, 0);
    std::vector<Symbol> h(degree_bound_, 0);
    while (true) {
        auto prod = poly::mul(f, vanish, g);
        std::fill(h.begin(), h.end(), 0);
        for (std::size_t i = 0; i < base.size(); ++i) h[i] ^= base[i];
        for (std::size_t i = 0; i < prod.size() && i < degree_bound_; ++i) h[i] ^= prod[i];
        const std::size_t hd = half_distance(table, h);
        if (hd <= max_half) out.push_back({h, hd});
        if (free == 0 || !step(g, f.size())) break;
    }
    return out;
}

std::vector<Decoded> list_decode_concat(const ConcatRs& code, std::span<const Symbol> word, double eps) {
    // delta <= (1 - eps)/2  <=>  half_distance <= (1 - eps) * length
    const auto max_half = static_cast<std::size_t>(std::floor((1.0 - eps) * static_cast<double>(code.length()) + 1e-9));
    return code.list_decode(word, max_half);
}

}  // namespace streamcode
