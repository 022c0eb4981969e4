#include "streamcode/ldc_large.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "streamcode/errors.hpp"

namespace streamcode {

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<Symbol> nonzero_points(std::size_t q) {
    std::vector<Symbol> p(q - 1);
    for (std::size_t i = 0; i + 1 < q; ++i) p[i] = static_cast<Symbol>(i + 1);
    return p;
}

LinearCode make_inner(const LargeLdcParams& p, const FieldPtr& k) {
    if (p.ext == 1) return identity_code(k, 1);
    return ecc_eps(k, p.eps, p.ext, p.inner_seed);
}

}  // namespace

std::size_t LargeLdcParams::points() const {
    std::size_t p = 1;
    for (unsigned i = 0; i < variables; ++i) p *= q();
    return p;
}

std::size_t LargeLdcParams::capacity() const { return binomial(degree + variables, variables) * ext; }

LargeLdcParams LargeLdcParams::asymptotic(std::size_t r, double eps, std::size_t Q, unsigned symbol_degree) {
    LargeLdcParams p;
    p.symbol_degree = symbol_degree;
    p.r = r;
    p.eps = eps;
    p.Q = Q;
    const double root = std::sqrt(static_cast<double>(Q));
    unsigned ext = 0;
    while (static_cast<double>(std::size_t{1} << (symbol_degree * (ext + 1))) < root &&
           symbol_degree * (ext + 1) <= 12)
        ++ext;
    if (ext == 0) throw ProfileError("no q = 2^{k e} below sqrt(Q)");
    p.ext = ext;
    p.degree = static_cast<unsigned>(std::floor(std::pow(eps, 6) * static_cast<double>(p.q()) / 4.0));
    if (p.degree == 0) throw ProfileError("eps^6 q / 4 < 1: degree would be zero");
    p.variables = 1;
    while (p.capacity() < r) ++p.variables;
    p.t = static_cast<unsigned>(std::floor(std::cbrt(static_cast<double>(Q)) + 1e-9));
    return p;
}

void LargeLdcParams::validate() const {
    auto fail = [](const std::string& why) { throw ProfileError("large LDC: " + why); };
    if (symbol_degree < 1 || ext < 1 || field_degree() > 12) fail("need 1 <= k e <= 12");
    if (!(eps > 0.0 && eps < 1.0)) fail("eps must lie in (0, 1)");
    if (r == 0) fail("r must be positive");
    if (t == 0) fail("t must be >= 1");
    if (variables == 0) fail("m must be >= 1");
    if (2 * static_cast<std::size_t>(degree) + 1 > q() - 1) fail("2d + 1 must not exceed q - 1");
    if (static_cast<double>(variables) * field_degree() > 24) fail("q^m exceeds 2^24 points");
    if (capacity() < r) fail("r exceeds C(d+m, m) [F:K]");
}

std::string LargeLdcParams::describe() const {
    std::ostringstream out;
    out << "large-ldc k=" << symbol_degree << " e=" << ext << " q=" << q() << " d=" << degree << " m=" << variables
        << " r=" << r << " eps=" << eps << " Q=" << Q << " t=" << t;
    return out.str();
}

ConfidenceDist merge_masses(std::vector<std::pair<Symbol, std::uint64_t>> masses, std::uint64_t bot,
                            std::uint64_t den) {
    std::erase_if(masses, [](const auto& m) { return m.second == 0; });
    std::sort(masses.begin(), masses.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    // Smallest first: each step zeroes the smallest mass.
    for (std::size_t i = 0; i + 1 < masses.size(); ++i) {
        const std::uint64_t m = masses[i].second;
        masses[i].second = 0;
        masses[i + 1].second -= m;
        bot += 2 * m;
        std::sort(masses.begin() + static_cast<std::ptrdiff_t>(i + 1), masses.end(),
                  [](const auto& a, const auto& b) { return a.second < b.second; });
    }
    ConfidenceDist out;
    out.den = den;
    out.num_bot = bot;
    if (!masses.empty() && masses.back().second > 0) {
        out.symbol = masses.back().first;
        out.num_symbol = masses.back().second;
    }
    return out;
}

std::string serialize_qlists(const QueryLists& lists) {
    std::ostringstream out;
    for (const auto& l : lists.lists) {
        for (std::size_t j = 0; j < l.queries.size(); ++j) out << (j ? " " : "") << l.queries[j];
        out << '\n';
    }
    return out.str();
}

std::vector<std::vector<std::size_t>> parse_qlists(const std::string& text) {
    std::vector<std::vector<std::size_t>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::size_t> row;
        std::string tok;
        while (ls >> tok) {
            if (tok.find_first_not_of("0123456789") != std::string::npos) throw FormatError("bad query index: " + tok);
            row.push_back(std::stoull(tok));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::size_t overlap_cap(std::size_t r, std::size_t Q, std::size_t R) {
    if (R == 0) throw InvalidArgument("R must be positive");
    return (3 * r * Q * Q + R - 1) / R;
}

LargeLdc::LargeLdc(LargeLdcParams params)
    : params_((params.validate(), params)),
      symbol_field_(Field::standard(params_.symbol_degree)),
      field_(Field::standard(params_.field_degree())),
      rm_(field_, params_.variables, params_.degree),
      inner_(make_inner(params_, symbol_field_)),
      curve_code_(field_, nonzero_points(params_.q()), 2 * static_cast<std::size_t>(params_.degree) + 1, inner_) {
    if (!inner_.systematic()) throw ProfileError("large LDC: inner code must be systematic");
    if (params_.check_query_budget && queries_per_decode() > params_.Q)
        throw ProfileError("large LDC: t (q-1) N_inner exceeds Q");
}

Word LargeLdc::encode(std::span<const Symbol> msg) const {
    if (msg.size() != params_.r) throw LengthMismatch("message must have r symbols");
    const Embedding& emb = curve_code_.embedding();
    const unsigned e = params_.ext;
    std::vector<Symbol> padded(rm_.msg_len() * e, 0);
    for (std::size_t i = 0; i < msg.size(); ++i) {
        if (!symbol_field_->contains(msg[i])) throw FieldMismatch("message symbol outside K");
        padded[i] = msg[i];
    }
    std::vector<Symbol> syms(rm_.msg_len());
    for (std::size_t i = 0; i < syms.size(); ++i)
        syms[i] = emb.from_coords(std::span<const Symbol>(padded).subspan(i * e, e));
    Word out;
    out.reserve(length());
    for (Symbol s : rm_.encode(syms)) {
        const auto cw = curve_code_.inner_codeword(s);
        out.insert(out.end(), cw.begin(), cw.end());
    }
    return out;
}

LinearCode LargeLdc::as_linear_code() const {
    const LinearCode outer(field_, rm_.generator(), rm_.systematic_points(), "rm");
    const LinearCode full = concat(outer, inner_);
    linalg::Matrix g(full.code_len(), params_.r);
    for (std::size_t row = 0; row < full.code_len(); ++row)
        for (std::size_t c = 0; c < params_.r; ++c) g.at(row, c) = full.generator().at(row, c);
    std::vector<std::size_t> sys(full.systematic()->begin(),
                                 full.systematic()->begin() + static_cast<std::ptrdiff_t>(params_.r));
    return LinearCode(symbol_field_, std::move(g), std::move(sys), "large-ldc");
}

std::size_t LargeLdc::message_position(std::size_t i) const {
    if (i >= params_.r) throw InvalidArgument("message index out of range");
    const unsigned e = params_.ext;
    return rm_.systematic_points()[i / e] * inner_len() + (*inner_.systematic())[i % e];
}

LargePlan LargeLdc::plan_smooth(std::size_t target, Rng& rng) const {
    if (target >= length()) throw InvalidArgument("codeword index out of range");
    LargePlan plan;
    plan.target = target;
    const std::size_t n_in = inner_len();
    const std::size_t q = params_.q();
    const auto v0 = rm_.point(target / n_in);
    plan.queries.reserve(queries_per_decode());
    std::vector<std::vector<Symbol>> curve(params_.variables, std::vector<Symbol>(3));
    for (unsigned c = 0; c < params_.t; ++c) {
        for (unsigned i = 0; i < params_.variables; ++i) {
            curve[i][0] = v0[i];
            curve[i][1] = static_cast<Symbol>(rng.below(q));
            curve[i][2] = static_cast<Symbol>(rng.below(q));
        }
        for (Symbol lambda = 1; lambda < q; ++lambda) {
            std::size_t idx = 0;
            for (const auto& co : curve) idx = idx * q + poly::eval(*field_, co, lambda);
            for (std::size_t j = 0; j < n_in; ++j) plan.queries.push_back(idx * n_in + j);
        }
    }
    return plan;
}

ConfidenceDist LargeLdc::finish_smooth(const LargePlan& plan, std::span<const Symbol> answers) const {
    if (answers.size() != plan.queries.size()) throw LengthMismatch("answers do not match the query plan");
    const std::size_t per_curve = curve_code_.length();
    const std::size_t a = plan.target % inner_len();
    // half distance hd is in units of 1/2, so 2 delta = hd / L
    std::map<Symbol, std::uint64_t> mass;
    std::uint64_t bot = 0;
    for (unsigned c = 0; c < params_.t; ++c) {
        const auto got = curve_code_.gmd_decode(answers.subspan(c * per_curve, per_curve));
        if (!got) {
            bot += per_curve;
            continue;
        }
        const Symbol s = curve_code_.inner_codeword(got->coeffs[0])[a];
        const std::uint64_t hd = std::min<std::uint64_t>(got->half_distance, per_curve);
        mass[s] += per_curve - hd;
        bot += hd;
    }
    return merge_masses({mass.begin(), mass.end()}, bot, static_cast<std::uint64_t>(per_curve) * params_.t);
}

ConfidenceDist LargeLdc::smooth_correct(const Oracle& w, std::size_t target, Rng& rng) const {
    if (w.size() != length()) throw LengthMismatch("oracle length differs from the code length");
    const auto plan = plan_smooth(target, rng);
    return finish_smooth(plan, read_all(w, plan.queries));
}

QueryLists LargeLdc::gen_qlists(Rng& rng, std::optional<std::size_t> cap) const {
    QueryLists out;
    const std::size_t Q = params_.Q ? params_.Q : queries_per_decode();
    out.cap = cap ? *cap : overlap_cap(params_.r, Q, length());
    if (out.cap == 0) throw InvalidArgument("cap must be positive");
    const std::size_t attempts = Q * Q;
    std::vector<std::uint32_t> count(length(), 0);
    std::vector<std::size_t> distinct;
    for (std::size_t i = 0; i < params_.r; ++i) {
        bool placed = false;
        for (std::size_t attempt = 0; attempt < attempts && !placed; ++attempt) {
            auto plan = plan_smooth(message_position(i), rng);
            distinct = plan.queries;
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            if (std::all_of(distinct.begin(), distinct.end(), [&](std::size_t I) { return count[I] < out.cap; })) {
                for (std::size_t I : distinct) ++count[I];
                out.lists.push_back(std::move(plan));
                placed = true;
            } else {
                ++out.resamples;
            }
        }
        if (!placed) throw ResampleExhausted("query list " + std::to_string(i) + " exceeded Q^2 resamples");
    }
    return out;
}

SmoothnessReport query_smoothness_check(const LargeLdc& ldc, std::size_t target, std::size_t trials, Rng& rng) {
    if (trials == 0) throw InvalidArgument("trials must be positive");
    std::vector<std::uint32_t> hits(ldc.length(), 0);
    std::vector<std::size_t> distinct;
    for (std::size_t t = 0; t < trials; ++t) {
        distinct = ldc.plan_smooth(target, rng).queries;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (std::size_t I : distinct) ++hits[I];
    }
    SmoothnessReport rep;
    rep.max_frequency = static_cast<double>(*std::max_element(hits.begin(), hits.end())) / static_cast<double>(trials);
    rep.bound = 1.1 * static_cast<double>(ldc.queries_per_decode()) / static_cast<double>(ldc.length());
    const double p = std::min(rep.bound, 1.0);
    rep.slack = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return rep;
}

}  // namespace streamcode
