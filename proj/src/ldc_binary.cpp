#include "streamcode/ldc_binary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
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

}  // namespace

std::size_t BinaryLdcParams::points() const {
    std::size_t p = 1;
    for (unsigned i = 0; i < variables; ++i) p *= q();
    return p;
}

BinaryLdcParams BinaryLdcParams::asymptotic(std::size_t n, double eps, std::size_t Q) {
    BinaryLdcParams p;
    p.n = n;
    p.eps = eps;
    p.Q = Q;
    const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(Q))));
    if (root * root != Q || (root & (root - 1)) != 0 || root < 4)
        throw ProfileError("the asymptotic regime needs Q = q^2 with q a power of two");
    p.field_degree = static_cast<unsigned>(std::countr_zero(root));
    p.degree = static_cast<unsigned>(std::floor(std::pow(eps, 6) * static_cast<double>(root) / 4.0));
    if (p.degree == 0) throw ProfileError("eps^6 sqrt(Q)/4 < 1: degree would be zero");
    p.variables = 1;
    while (binomial(p.degree + p.variables, p.variables) * p.field_degree < n) ++p.variables;
    p.t_smooth = static_cast<unsigned>(std::floor(std::cbrt(static_cast<double>(Q)) + 1e-9));
    p.k_adv = static_cast<unsigned>(std::ceil(1.0 / eps - 1e-9));
    p.advice_iterations = static_cast<unsigned>(root);
    return p;
}

void BinaryLdcParams::validate() const {
    auto fail = [](const std::string& why) { throw ProfileError("binary LDC: " + why); };
    if (field_degree < 1 || field_degree > 12) fail("field degree must be 1..12");
    if (!(eps > 0.0 && eps < 1.0)) fail("eps must lie in (0, 1)");
    if (n == 0) fail("n must be positive");
    if (degree >= q()) fail("d must be below q");
    if (t_smooth == 0 || advice_iterations == 0 || k_adv == 0) fail("t, advice iterations and k_adv must be >= 1");
    if (2 * degree + 1 > q() - 1) fail("2d + 1 must not exceed q - 1");
    if (k_adv > q() - 1) fail("k_adv must not exceed q - 1");
    if (static_cast<std::size_t>(k_adv) * degree + 1 > q() - 1) fail("k_adv * d + 1 must not exceed q - 1");
    if (binomial(degree + variables, variables) * field_degree < n) fail("n exceeds C(d+m, m) log2 q");
    if (static_cast<double>(variables) * field_degree > 24) fail("q^m exceeds 2^24 points");
    if (static_cast<double>((static_cast<std::size_t>(k_adv) * degree + 1 - k_adv) * field_degree) > 20)
        fail("advice coset exceeds 2^20 candidates");
    if (!check_query_budget) return;
    if (smooth_queries() > Q) fail("t (q-1) N_inner exceeds Q");
    if (advice_queries() > Q) fail("advice iterations (q-1) N_inner exceeds Q");
    if (u() > Q) fail("u = k_adv N_inner exceeds Q");
}

std::string BinaryLdcParams::describe() const {
    std::ostringstream out;
    out << "binary-ldc n=" << n << " eps=" << eps << " Q=" << Q << " q=" << q() << " d=" << degree
        << " m=" << variables << " t=" << t_smooth << " k_adv=" << k_adv << " advice_iterations=" << advice_iterations
        << " N=" << N() << " u=" << u();
    return out.str();
}

BinaryLdc::BinaryLdc(BinaryLdcParams params)
    : params_((params.validate(), params)),
      field_(Field::standard(params_.field_degree)),
      rm_(field_, params_.variables, params_.degree),
      inner_(simplex_code(params_.field_degree)),
      smooth_code_(field_, nonzero_points(params_.q()), 2 * params_.degree + 1, inner_),
      advice_code_(field_, nonzero_points(params_.q()), static_cast<std::size_t>(params_.k_adv) * params_.degree + 1,
                   inner_) {}

std::vector<Symbol> BinaryLdc::pack(std::span<const Symbol> bits) const {
    if (bits.size() != params_.n) throw LengthMismatch("message must have n bits");
    const unsigned k = params_.field_degree;
    std::vector<Symbol> syms(rm_.msg_len(), 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] > 1) throw InvalidArgument("message bits must be 0 or 1");
        syms[i / k] |= bits[i] << (k - 1 - i % k);
    }
    return syms;
}

Word BinaryLdc::encode(std::span<const Symbol> bits) const {
    const auto evals = rm_.encode(pack(bits));
    Word out;
    out.reserve(length());
    for (Symbol s : evals) {
        const auto cw = smooth_code_.inner_codeword(s);
        out.insert(out.end(), cw.begin(), cw.end());
    }
    return out;
}

LinearCode BinaryLdc::as_linear_code() const {
    const LinearCode outer(field_, rm_.generator(), rm_.systematic_points(), "rm");
    const LinearCode full = concat(outer, inner_);
    linalg::Matrix g(full.code_len(), params_.n);
    for (std::size_t r = 0; r < full.code_len(); ++r)
        for (std::size_t c = 0; c < params_.n; ++c) g.at(r, c) = full.generator().at(r, c);
    std::vector<std::size_t> sys(full.systematic()->begin(),
                                 full.systematic()->begin() + static_cast<std::ptrdiff_t>(params_.n));
    return LinearCode(Field::standard(1), std::move(g), std::move(sys), "binary-ldc");
}

std::size_t BinaryLdc::message_position(std::size_t i) const {
    if (i >= params_.n) throw InvalidArgument("message index out of range");
    const unsigned k = params_.field_degree;
    return rm_.systematic_points()[i / k] * params_.inner_len() + i % k;
}

std::size_t BinaryLdc::curve_point(std::span<const std::vector<Symbol>> coeffs, Symbol lambda) const {
    std::size_t idx = 0;
    for (const auto& c : coeffs) idx = idx * params_.q() + poly::eval(*field_, c, lambda);
    return idx;
}

void BinaryLdc::append_curve_queries(std::span<const std::vector<Symbol>> coeffs, std::vector<std::size_t>& out) const {
    const std::size_t n_in = params_.inner_len();
    for (Symbol lambda = 1; lambda < params_.q(); ++lambda) {
        const std::size_t base = curve_point(coeffs, lambda) * n_in;
        for (std::size_t j = 0; j < n_in; ++j) out.push_back(base + j);
    }
}

SmoothPlan BinaryLdc::plan_smooth(std::size_t target, Rng& rng) const {
    if (target >= length()) throw InvalidArgument("codeword index out of range");
    SmoothPlan plan;
    plan.target = target;
    const auto v0 = rm_.point(target / params_.inner_len());
    plan.queries.reserve(params_.smooth_queries());
    std::vector<std::vector<Symbol>> curve(params_.variables, std::vector<Symbol>(3));
    for (unsigned c = 0; c < params_.t_smooth; ++c) {
        for (unsigned i = 0; i < params_.variables; ++i) {
            curve[i][0] = v0[i];
            curve[i][1] = static_cast<Symbol>(rng.below(params_.q()));
            curve[i][2] = static_cast<Symbol>(rng.below(params_.q()));
            plan.curves.insert(plan.curves.end(), curve[i].begin(), curve[i].end());
        }
        append_curve_queries(curve, plan.queries);
    }
    return plan;
}

Confidence BinaryLdc::finish_smooth(const SmoothPlan& plan, std::span<const Symbol> answers) const {
    if (answers.size() != plan.queries.size()) throw LengthMismatch("answers do not match the query plan");
    const std::size_t per_curve = smooth_code_.length();
    const std::uint64_t two_l = 2 * per_curve;
    const std::size_t a = plan.target % params_.inner_len();
    Confidence conf;
    conf.den = two_l * params_.t_smooth;
    // per curve: p(b) = 1 - hd/L and p(1-b) = hd/L, on the common denominator 2L
    for (unsigned c = 0; c < params_.t_smooth; ++c) {
        const auto got = smooth_code_.gmd_decode(answers.subspan(c * per_curve, per_curve));
        if (!got) {
            conf.num0 += per_curve;
            conf.num1 += per_curve;
            continue;
        }
        const Symbol b = smooth_code_.inner_codeword(got->coeffs[0])[a];
        const std::uint64_t wrong = 2 * static_cast<std::uint64_t>(got->half_distance);
        (b ? conf.num1 : conf.num0) += two_l - wrong;
        (b ? conf.num0 : conf.num1) += wrong;
    }
    return conf;
}

Confidence BinaryLdc::smooth_correct(const Oracle& w, std::size_t target, Rng& rng) const {
    if (w.size() != length()) throw LengthMismatch("oracle length differs from N");
    const auto plan = plan_smooth(target, rng);
    return finish_smooth(plan, read_all(w, plan.queries));
}

AdvicePositions BinaryLdc::sample_advice(Rng& rng) const {
    AdvicePositions adv;
    for (unsigned l = 0; l < params_.k_adv; ++l) {
        const std::size_t p = rng.below(params_.points());
        adv.rm_points.push_back(p);
        for (std::size_t j = 0; j < params_.inner_len(); ++j) adv.positions.push_back(p * params_.inner_len() + j);
    }
    return adv;
}

AdvicePlan BinaryLdc::plan_advice(std::size_t target, const AdvicePositions& adv, Rng& rng) const {
    if (target >= length()) throw InvalidArgument("codeword index out of range");
    if (adv.rm_points.size() != params_.k_adv) throw InvalidArgument("advice must carry k_adv points");
    AdvicePlan plan;
    plan.target = target;
    const auto v0 = rm_.point(target / params_.inner_len());
    std::vector<std::vector<Symbol>> anchors;
    for (std::size_t p : adv.rm_points) anchors.push_back(rm_.point(p));

    std::vector<Symbol> pool = nonzero_points(params_.q());
    std::vector<std::vector<Symbol>> curve(params_.variables);
    for (unsigned it = 0; it < params_.advice_iterations; ++it) {
        // k distinct nonzero parameters by a partial shuffle
        for (unsigned l = 0; l < params_.k_adv; ++l) std::swap(pool[l], pool[l + rng.below(pool.size() - l)]);
        std::vector<Symbol> js(pool.begin(), pool.begin() + params_.k_adv);
        std::vector<Symbol> xs{0};
        xs.insert(xs.end(), js.begin(), js.end());
        for (unsigned i = 0; i < params_.variables; ++i) {
            std::vector<Symbol> ys{v0[i]};
            for (const auto& a : anchors) ys.push_back(a[i]);
            curve[i] = poly::interpolate(*field_, xs, ys);
        }
        append_curve_queries(curve, plan.queries);
        plan.lambdas.push_back(std::move(js));
    }
    return plan;
}

std::optional<Symbol> BinaryLdc::symbol_of_block(std::span<const Symbol> bits) const {
    Symbol s = 0;
    for (unsigned j = 0; j < params_.field_degree; ++j) {
        if (bits[j] > 1) return std::nullopt;
        s = (s << 1) | bits[j];
    }
    const auto cw = smooth_code_.inner_codeword(s);
    if (!std::equal(cw.begin(), cw.end(), bits.begin())) return std::nullopt;
    return s;
}

AdviceOutcome BinaryLdc::finish_advice(const AdvicePlan& plan, const AdvicePositions& adv,
                                       std::span<const Symbol> adv_values, std::span<const Symbol> answers) const {
    if (adv_values.size() != adv.positions.size()) throw LengthMismatch("advice values do not match positions");
    if (answers.size() != plan.queries.size()) throw LengthMismatch("answers do not match the query plan");
    const std::size_t n_in = params_.inner_len();
    const std::size_t per_iter = advice_code_.length();
    const std::size_t a = plan.target % n_in;
    const auto radius =
        static_cast<std::size_t>(std::floor((1.0 - params_.eps) * static_cast<double>(per_iter) + 1e-9));

    AdviceOutcome out;
    std::vector<Symbol> anchor_syms;
    for (std::size_t l = 0; l < adv.rm_points.size(); ++l) {
        const auto s = symbol_of_block(adv_values.subspan(l * n_in, n_in));
        if (!s) {
            out.empty = static_cast<unsigned>(plan.lambdas.size());
            out.flagged = true;
            return out;
        }
        anchor_syms.push_back(*s);
    }
    unsigned ones = 0;
    for (std::size_t it = 0; it < plan.lambdas.size(); ++it) {
        std::vector<std::pair<Symbol, Symbol>> fixed;
        for (std::size_t l = 0; l < anchor_syms.size(); ++l) fixed.emplace_back(plan.lambdas[it][l], anchor_syms[l]);
        const auto survivors = advice_code_.list_decode_through(answers.subspan(it * per_iter, per_iter), fixed, radius);
        if (survivors.empty()) {
            ++out.empty;
        } else if (survivors.size() > 1) {
            ++out.ambiguous;
        } else {
            ++out.accepted;
            ones += advice_code_.inner_codeword(survivors[0].coeffs[0])[a];
        }
    }
    out.bit = 2 * ones > out.accepted ? 1 : 0;
    out.flagged = out.accepted == 0;
    return out;
}

AdviceOutcome BinaryLdc::decode_with_advice_detail(const Oracle& w, std::size_t i, const AdvicePositions& adv,
                                                   std::span<const Symbol> adv_values, Rng& rng) const {
    if (w.size() != length()) throw LengthMismatch("oracle length differs from N");
    const auto plan = plan_advice(message_position(i), adv, rng);
    return finish_advice(plan, adv, adv_values, read_all(w, plan.queries));
}

Symbol BinaryLdc::decode_with_advice(const Oracle& w, std::size_t i, const AdvicePositions& adv,
                                     std::span<const Symbol> adv_values, Rng& rng) const {
    const auto out = decode_with_advice_detail(w, i, adv, adv_values, rng);
    if (out.empty == params_.advice_iterations) throw AdviceMismatch("no candidate matched the advice in any iteration");
    return out.bit;
}

}  // namespace streamcode
