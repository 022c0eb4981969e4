#include "streamcode/codes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "streamcode/errors.hpp"
#include "streamcode/reed_muller.hpp"
#include "streamcode/rng.hpp"

namespace streamcode {

std::size_t half_distance(std::span<const Symbol> a, std::span<const Symbol> b) {
    if (a.size() != b.size()) throw LengthMismatch("distance between words of different length");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == kErasure || b[i] == kErasure) d += 1;
        else if (a[i] != b[i]) d += 2;
    }
    return d;
}

// --------------------------------------------------------------- LinearCode

LinearCode::LinearCode(FieldPtr field, linalg::Matrix generator, std::optional<std::vector<std::size_t>> systematic,
                       std::string kind)
    : field_(std::move(field)), generator_(std::move(generator)), systematic_(std::move(systematic)),
      kind_(std::move(kind)) {
    for (Symbol s : generator_.data)
        if (!field_->contains(s)) throw InvalidArgument("generator entry outside the field");
    if (systematic_) {
        if (systematic_->size() != msg_len()) throw InvalidArgument("systematic position count != msg_len");
        for (std::size_t i = 0; i < msg_len(); ++i) {
            const std::size_t row = (*systematic_)[i];
            if (row >= code_len()) throw InvalidArgument("systematic position out of range");
            for (std::size_t c = 0; c < msg_len(); ++c)
                if (generator_.at(row, c) != (c == i ? 1U : 0U))
                    throw InvalidArgument("systematic positions do not carry the message");
        }
    } else if (msg_len() <= 4096 && linalg::rank(*field_, generator_) != msg_len()) {
        throw InvalidArgument("generator does not have full column rank");
    }
}

Word LinearCode::encode(std::span<const Symbol> msg) const {
    if (msg.size() != msg_len()) throw LengthMismatch("message length does not match the code");
    Word out(code_len(), 0);
    for (std::size_t r = 0; r < code_len(); ++r) {
        Symbol acc = 0;
        for (std::size_t c = 0; c < msg_len(); ++c) acc ^= field_->mul(generator_.at(r, c), msg[c]);
        out[r] = acc;
    }
    return out;
}

std::vector<Symbol> LinearCode::extract(std::span<const Symbol> codeword) const {
    if (!systematic_) throw InvalidArgument("code is not systematic");
    if (codeword.size() != code_len()) throw LengthMismatch("codeword length does not match the code");
    std::vector<Symbol> msg;
    msg.reserve(msg_len());
    for (std::size_t p : *systematic_) msg.push_back(codeword[p]);
    return msg;
}

LinearCode identity_code(FieldPtr field, std::size_t length) {
    linalg::Matrix g(length, length);
    std::vector<std::size_t> sys(length);
    for (std::size_t i = 0; i < length; ++i) {
        g.at(i, i) = 1;
        sys[i] = i;
    }
    return LinearCode(std::move(field), std::move(g), std::move(sys), "identity");
}

LinearCode rs_code(FieldPtr field, std::span<const Symbol> points, std::size_t degree_bound) {
    if (degree_bound == 0 || degree_bound > points.size())
        throw InvalidArgument("RS degree bound must be in 1..#points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!field->contains(points[i])) throw InvalidArgument("RS evaluation point outside the field");
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) throw DuplicateAbscissa("RS evaluation points must be distinct");
    }
    const Field& f = *field;
    linalg::Matrix vander(points.size(), degree_bound);
    for (std::size_t r = 0; r < points.size(); ++r)
        for (std::size_t c = 0; c < degree_bound; ++c) vander.at(r, c) = f.pow(points[r], c);
    linalg::Matrix top(degree_bound, degree_bound);
    std::copy_n(vander.data.begin(), degree_bound * degree_bound, top.data.begin());
    auto inv = linalg::inverse(f, top);
    std::vector<std::size_t> sys(degree_bound);
    for (std::size_t i = 0; i < degree_bound; ++i) sys[i] = i;
    return LinearCode(std::move(field), linalg::multiply(f, vander, *inv), std::move(sys), "rs");
}

LinearCode rm_code(FieldPtr field, unsigned variables, unsigned degree) {
    const ReedMuller rm(field, variables, degree);
    return LinearCode(std::move(field), rm.generator(), rm.systematic_points(), "rm");
}

LinearCode concat(const LinearCode& outer, const LinearCode& inner) {
    const Embedding emb(inner.field(), outer.field());
    const unsigned e = emb.ratio();
    if (inner.msg_len() != e) throw InvalidArgument("inner code must take [F:K] symbols per outer symbol");
    const Field& fo = *outer.field();
    const std::size_t n_in = inner.code_len();
    linalg::Matrix g(outer.code_len() * n_in, outer.msg_len() * e);
    std::vector<Symbol> unit(e, 0);
    for (std::size_t s = 0; s < outer.msg_len(); ++s) {
        for (unsigned c = 0; c < e; ++c) {
            std::fill(unit.begin(), unit.end(), 0);
            unit[c] = 1;
            const Symbol b = emb.from_coords(unit);
            for (std::size_t j = 0; j < outer.code_len(); ++j) {
                const Symbol sym = fo.mul(outer.generator().at(j, s), b);
                const Word block = inner.encode(emb.coords(sym));
                for (std::size_t t = 0; t < n_in; ++t) g.at(j * n_in + t, s * e + c) = block[t];
            }
        }
    }
    std::optional<std::vector<std::size_t>> sys;
    if (outer.systematic() && inner.systematic()) {
        sys.emplace();
        for (std::size_t p : *outer.systematic())
            for (std::size_t q : *inner.systematic()) sys->push_back(p * n_in + q);
    }
    return LinearCode(inner.field(), std::move(g), std::move(sys), "concat");
}

LinearCode simplex_code(unsigned bits) {
    if (bits == 0 || bits > 12) throw InvalidArgument("simplex code needs 1..12 bits");
    const std::uint32_t count = (1U << bits) - 1;
    std::vector<std::uint32_t> columns;
    for (unsigned j = 0; j < bits; ++j) columns.push_back(1U << (bits - 1 - j));
    for (std::uint32_t v = 1; v <= count; ++v)
        if ((v & (v - 1)) != 0) columns.push_back(v);
    linalg::Matrix g(count, bits);
    for (std::uint32_t r = 0; r < count; ++r)
        for (unsigned c = 0; c < bits; ++c) g.at(r, c) = (columns[r] >> (bits - 1 - c)) & 1U;
    std::vector<std::size_t> sys(bits);
    for (unsigned i = 0; i < bits; ++i) sys[i] = i;
    return LinearCode(Field::standard(1), std::move(g), std::move(sys), "simplex");
}

LinearCode replicate(const LinearCode& code, unsigned copies) {
    if (copies == 0) throw InvalidArgument("replicate needs at least one copy");
    linalg::Matrix g(code.code_len() * copies, code.msg_len());
    for (unsigned k = 0; k < copies; ++k)
        std::copy(code.generator().data.begin(), code.generator().data.end(),
                  g.data.begin() + static_cast<std::ptrdiff_t>(k * code.generator().data.size()));
    return LinearCode(code.field(), std::move(g), code.systematic(), code.kind() + "x" + std::to_string(copies));
}

// ------------------------------------------------------------ brute force

namespace {

void require_enumerable(const LinearCode& code) {
    if (code.message_space_log2() > kBruteForceLimitLog2) throw SpaceTooLarge("message space exceeds 2^20");
}

// Walks every message in odometer order while keeping the codeword current.
template <typename Visit>
void for_each_codeword(const LinearCode& code, Visit&& visit) {
    require_enumerable(code);
    const Field& f = *code.field();
    const std::size_t m = code.msg_len();
    const std::size_t len = code.code_len();
    std::vector<Symbol> msg(m, 0);
    Word cw(len, 0);
    if (!visit(msg, cw)) return;
    while (true) {
        std::size_t pos = m;
        while (pos-- > 0) {
            const Symbol old = msg[pos];
            const Symbol next = (old + 1 == f.size()) ? 0 : old + 1;
            msg[pos] = next;
            const Symbol delta = old ^ next;
            for (std::size_t r = 0; r < len; ++r) cw[r] ^= f.mul(code.generator().at(r, pos), delta);
            if (next != 0) break;
        }
        if (pos == static_cast<std::size_t>(-1)) return;
        if (!visit(msg, cw)) return;
    }
}

}  // namespace

NearestCodeword nearest_codeword_bruteforce(const LinearCode& code, std::span<const Symbol> word) {
    if (word.size() != code.code_len()) throw LengthMismatch("word length does not match the code");
    NearestCodeword best{{}, std::numeric_limits<std::size_t>::max()};
    for_each_codeword(code, [&](const std::vector<Symbol>& msg, const Word& cw) {
        const std::size_t d = half_distance(cw, word);
        if (d < best.half_distance) best = {msg, d};
        return best.half_distance > 0;
    });
    return best;
}

std::size_t min_distance_bruteforce(const LinearCode& code) {
    std::size_t best = code.code_len();
    bool first = true;
    for_each_codeword(code, [&](const std::vector<Symbol>&, const Word& cw) {
        if (first) {
            first = false;
            return true;
        }
        const auto w = static_cast<std::size_t>(std::count_if(cw.begin(), cw.end(), [](Symbol s) { return s != 0; }));
        best = std::min(best, w);
        return true;
    });
    return best;
}

UniqueDecoder::UniqueDecoder(const LinearCode& code) : code_(code), min_distance_(min_distance_bruteforce(code)) {}

std::optional<std::vector<Symbol>> UniqueDecoder::decode(std::span<const Symbol> word) const {
    auto nearest = nearest_codeword_bruteforce(code_, word);
    // half units: 2 * dist < d_min  <=>  half_distance < d_min
    if (nearest.half_distance < min_distance_) return std::move(nearest.message);
    return std::nullopt;
}

std::optional<std::vector<Symbol>> unique_decode(const LinearCode& code, std::span<const Symbol> word) {
    return UniqueDecoder(code).decode(word);
}

// ------------------------------------------------------------------ ecc_eps

namespace {

std::size_t min_weight_enumerated(const LinearCode& code) { return min_distance_bruteforce(code); }

std::optional<LinearCode> search_inner(FieldPtr field, unsigned msg, double target, Rng& rng, std::size_t& budget) {
    const Field& f = *field;
    for (std::size_t len = msg; len <= 64 * msg && budget > 0; ++len) {
        const std::size_t need = static_cast<std::size_t>(std::ceil(target * static_cast<double>(len) - 1e-9));
        if (need > len - msg + 1) continue;  // Singleton bound
        for (unsigned attempt = 0; attempt < 200 && budget > 0; ++attempt, --budget) {
            linalg::Matrix g(len, msg);
            for (unsigned i = 0; i < msg; ++i) g.at(i, i) = 1;
            for (std::size_t r = msg; r < len; ++r)
                for (unsigned c = 0; c < msg; ++c) g.at(r, c) = static_cast<Symbol>(rng.below(f.size()));
            std::vector<std::size_t> sys(msg);
            for (unsigned i = 0; i < msg; ++i) sys[i] = i;
            LinearCode cand(field, std::move(g), std::move(sys), "inner");
            if (min_weight_enumerated(cand) >= need) return cand;
        }
    }
    return std::nullopt;
}

}  // namespace

LinearCode ecc_eps(FieldPtr field, double eps, std::size_t n, std::uint64_t seed) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0, 1)");
    if (n == 0) throw InvalidArgument("message length must be positive");
    const double alphabet = static_cast<double>(field->size());
    const double inner_target = (1.0 - 1.0 / alphabet) * (1.0 - eps / 2.0);
    Rng rng(seed);
    std::size_t budget = 10000;

    for (unsigned b = 1; field->degree() * b <= 12; ++b) {
        const std::size_t outer_msg = (n + b - 1) / b;
        const std::size_t outer_size = std::size_t{1} << (field->degree() * b);
        std::size_t outer_len = outer_msg;
        if (outer_msg > 1) {
            outer_len = std::max<std::size_t>(
                outer_msg, static_cast<std::size_t>(std::ceil(static_cast<double>(outer_msg - 1) / (eps / 2.0) - 1e-9)));
        }
        if (outer_len > outer_size) continue;

        auto inner = search_inner(field, b, inner_target, rng, budget);
        if (!inner) break;

        const FieldPtr outer_field = b == 1 ? field : Field::standard(field->degree() * b);
        std::vector<Symbol> points(outer_len);
        for (std::size_t i = 0; i < outer_len; ++i) points[i] = static_cast<Symbol>(i);
        const LinearCode outer = rs_code(outer_field, points, outer_msg);
        const LinearCode full = concat(outer, *inner);

        // Drop the padding coordinates beyond n.
        linalg::Matrix g(full.code_len(), n);
        for (std::size_t r = 0; r < full.code_len(); ++r)
            for (std::size_t c = 0; c < n; ++c) g.at(r, c) = full.generator().at(r, c);
        std::vector<std::size_t> sys(full.systematic()->begin(), full.systematic()->begin() + static_cast<std::ptrdiff_t>(n));
        return LinearCode(field, std::move(g), std::move(sys), "ecc_eps");
    }
    throw SearchExhausted("no inner code found within the search budget");
}

// -------------------------------------------------------------- descriptor

std::string to_descriptor(const LinearCode& code) {
    const Field& f = *code.field();
    std::ostringstream out;
    out << "code kind=" << code.kind() << " k=" << f.degree() << " modulus=" << std::hex << f.modulus() << std::dec
        << " m=" << code.msg_len() << " M=" << code.code_len() << "\n";
    out << "systematic";
    if (code.systematic()) {
        for (std::size_t p : *code.systematic()) out << ' ' << p;
    } else {
        out << " none";
    }
    out << "\n";
    for (std::size_t r = 0; r < code.code_len(); ++r) {
        out << "row";
        for (std::size_t c = 0; c < code.msg_len(); ++c) out << ' ' << f.to_hex(code.generator().at(r, c));
        out << "\n";
    }
    return out.str();
}

LinearCode from_descriptor(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty code descriptor");
    std::istringstream head(line);
    std::string tag, kind_kv, k_kv, mod_kv, m_kv, big_m_kv;
    head >> tag >> kind_kv >> k_kv >> mod_kv >> m_kv >> big_m_kv;
    auto value_of = [](const std::string& kv, const std::string& key) {
        if (kv.rfind(key + "=", 0) != 0) throw FormatError("descriptor header missing " + key);
        return kv.substr(key.size() + 1);
    };
    if (tag != "code") throw FormatError("descriptor must start with 'code'");
    const std::string kind = value_of(kind_kv, "kind");
    const unsigned k = static_cast<unsigned>(std::stoul(value_of(k_kv, "k")));
    const auto modulus = static_cast<std::uint32_t>(std::stoul(value_of(mod_kv, "modulus"), nullptr, 16));
    const std::size_t m = std::stoul(value_of(m_kv, "m"));
    const std::size_t big_m = std::stoul(value_of(big_m_kv, "M"));
    FieldPtr field = (Field::standard_modulus(k) == modulus) ? Field::standard(k) : std::make_shared<const Field>(k, modulus);

    if (!std::getline(in, line)) throw FormatError("descriptor missing systematic line");
    std::istringstream sys_line(line);
    sys_line >> tag;
    if (tag != "systematic") throw FormatError("expected systematic line");
    std::optional<std::vector<std::size_t>> sys;
    std::string tok;
    std::vector<std::size_t> positions;
    bool none = false;
    while (sys_line >> tok) {
        if (tok == "none") none = true;
        else positions.push_back(std::stoul(tok));
    }
    if (!none) sys = std::move(positions);

    linalg::Matrix g(big_m, m);
    for (std::size_t r = 0; r < big_m; ++r) {
        if (!std::getline(in, line)) throw FormatError("descriptor truncated");
        std::istringstream row(line);
        row >> tag;
        if (tag != "row") throw FormatError("expected row line");
        for (std::size_t c = 0; c < m; ++c) {
            if (!(row >> tok)) throw FormatError("row too short");
            g.at(r, c) = field->from_hex(tok);
        }
    }
    return LinearCode(std::move(field), std::move(g), std::move(sys), kind);
}

}  // namespace streamcode
