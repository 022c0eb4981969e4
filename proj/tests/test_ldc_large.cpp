#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <vector>

#include "streamcode/errors.hpp"
#include "streamcode/ldc_large.hpp"

using namespace streamcode;

namespace {

LargeLdcParams params(unsigned k, unsigned d, unsigned m, std::size_t r, unsigned t, std::size_t Q) {
    LargeLdcParams p;
    p.symbol_degree = k;
    p.degree = d;
    p.variables = m;
    p.r = r;
    p.t = t;
    p.Q = Q;
    p.eps = 0.1;
    return p;
}

// GF(64), univariate, d = 3: per-curve unique radius 57/126.
const LargeLdc& gf64() {
    static const LargeLdc ldc(params(6, 3, 1, 4, 4, 256));
    return ldc;
}

std::vector<Symbol> random_msg(const LargeLdc& ldc, Rng& rng) {
    std::vector<Symbol> x(ldc.params().r);
    for (auto& s : x) s = static_cast<Symbol>(rng.below(ldc.symbol_field()->size()));
    return x;
}

// `flips` random nonzero offsets and `erasures` erasures on distinct positions.
Word corrupt(Word w, std::size_t flips, std::size_t erasures, Symbol field_size, Rng& rng) {
    std::vector<std::size_t> idx(w.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < flips + erasures; ++i) {
        std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
        if (i < flips)
            w[idx[i]] ^= static_cast<Symbol>(1 + rng.below(field_size - 1));
        else
            w[idx[i]] = kErasure;
    }
    return w;
}

}  // namespace

TEST_CASE("zero message and linearity") {
    const auto& ldc = gf64();
    const Field& k = *ldc.symbol_field();
    const std::vector<Symbol> zero(ldc.params().r, 0);
    const auto z = ldc.encode(zero);
    CHECK(std::all_of(z.begin(), z.end(), [](Symbol s) { return s == 0; }));
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_msg(ldc, rng);
        const auto y = random_msg(ldc, rng);
        const auto c = static_cast<Symbol>(rng.below(k.size()));
        std::vector<Symbol> comb(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) comb[i] = k.add(k.mul(c, x[i]), y[i]);
        const auto cx = ldc.encode(x), cy = ldc.encode(y), cc = ldc.encode(comb);
        for (std::size_t j = 0; j < cc.size(); ++j) REQUIRE(cc[j] == k.add(k.mul(c, cx[j]), cy[j]));
        REQUIRE(ldc.as_linear_code().encode(x) == cx);
        for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(cx[ldc.message_position(i)] == x[i]);
    }
}

TEST_CASE("brute-force distance of the GF(16) m=2 d=1 toy") {
    const LargeLdc ldc(params(4, 1, 2, 3, 4, 64));
    CHECK(ldc.length() == 256);
    const auto d = min_distance_bruteforce(ldc.as_linear_code());
    // a nonzero degree-1 polynomial in 2 variables vanishes on at most q^{m-1} points
    CHECK(d == 256 - 16);
    CHECK(static_cast<double>(d) / 256.0 >= 1.0 - 1.0 / 16.0);
}

TEST_CASE("extension inner code: K = GF(4), F = GF(16)") {
    auto p = params(2, 1, 2, 5, 2, 1u << 20);
    p.ext = 2;
    p.eps = 0.25;
    const LargeLdc ldc(p);
    CHECK(ldc.field()->degree() == 4);
    Rng rng(3);
    const auto x = random_msg(ldc, rng);
    const auto cw = ldc.encode(x);
    CHECK(ldc.as_linear_code().encode(x) == cw);
    const WordOracle o(cw);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto conf = ldc.smooth_decode(o, i, rng);
        CHECK(conf.p(x[i]) == doctest::Approx(1.0));
    }
}

TEST_CASE("uncorrupted and all-erased oracles") {
    const auto& ldc = gf64();
    Rng rng(11);
    const auto x = random_msg(ldc, rng);
    const auto cw = ldc.encode(x);
    const WordOracle o(cw);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto conf = ldc.smooth_decode(o, i, rng);
        CHECK(conf.symbol == x[i]);
        CHECK(conf.num_symbol == conf.den);
        CHECK(conf.num_bot == 0);
    }
    const Word bot(ldc.length(), kErasure);
    const WordOracle ob(bot);
    const auto conf = ldc.smooth_decode(ob, 0, rng);
    CHECK(!conf.symbol);
    CHECK(conf.p_bot() == 1.0);
}

TEST_CASE("merge rule keeps at most one symbol and total mass") {
    const auto m = merge_masses({{1, 5}, {2, 3}, {3, 2}}, 0, 10);
    CHECK(m.symbol == 1u);
    CHECK(m.num_symbol == 4);
    CHECK(m.num_bot == 6);
    const auto tie = merge_masses({{1, 3}, {2, 3}}, 4, 10);
    CHECK(!tie.symbol);
    CHECK(tie.num_bot == 10);
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<Symbol, std::uint64_t>> ms;
        std::uint64_t total = 0;
        for (Symbol s = 0; s < 1 + rng.below(5); ++s) {
            ms.emplace_back(s, rng.below(20));
            total += ms.back().second;
        }
        const std::uint64_t bot = rng.below(20);
        const auto out = merge_masses(ms, bot, total + bot);
        REQUIRE(out.num_symbol + out.num_bot == out.den);
        // p(s) + p(bot)/2 never decreases for any symbol
        for (const auto& [s, v] : ms) REQUIRE(2 * out.p(s) * out.den + out.num_bot >= 2 * v + bot);
    }
}

TEST_CASE("delta = 0.3 mixed flips and erasures") {
    const auto& ldc = gf64();
    const double eps = ldc.params().eps;
    Rng rng(2024);
    // 10 flips + 18 erasures on 64 symbols: delta = (10 + 9) / 64
    const double delta = 19.0 / 64.0;
    int good = 0;
    const int trials = 500;
    for (int trial = 0; trial < trials; ++trial) {
        const auto x = random_msg(ldc, rng);
        const auto w = corrupt(ldc.encode(x), 10, 18, ldc.symbol_field()->size(), rng);
        const WordOracle o(w);
        const std::size_t i = rng.below(x.size());
        const auto conf = ldc.smooth_decode(o, i, rng);
        REQUIRE(conf.num_symbol + conf.num_bot == conf.den);
        if (conf.p(x[i]) + 0.5 * conf.p_bot() > 1.0 - delta - eps) ++good;
    }
    MESSAGE("good fraction " << good << "/" << trials);
    CHECK(good >= 475);
}

TEST_CASE("query smoothness") {
    for (unsigned t : {4u, 8u}) {
        const LargeLdc ldc(params(4, 1, 2, 3, t, 1024));
        Rng rng(t);
        const auto rep = query_smoothness_check(ldc, ldc.message_position(0), 10000, rng);
        MESSAGE("t=" << t << " max " << rep.max_frequency << " bound " << rep.bound);
        CHECK(rep.max_frequency <= rep.bound + rep.slack);
    }
}

TEST_CASE("query lists respect the overlap cap") {
    CHECK(overlap_cap(16, 8, 128) == 24);
    CHECK(overlap_cap(1, 2, 12) == 1);
    const LargeLdc ldc(params(4, 3, 3, 16, 1, 64));
    Rng rng(99);
    const auto ql = ldc.gen_qlists(rng);
    CHECK(ql.cap == overlap_cap(16, 64, 4096));
    REQUIRE(ql.lists.size() == 16);
    std::map<std::size_t, std::size_t> count;
    for (const auto& l : ql.lists) {
        auto d = l.queries;
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        for (auto I : d) ++count[I];
    }
    for (const auto& [I, c] : count) REQUIRE(c <= ql.cap);

    // each list is a working decoder plan for its index
    const auto x = random_msg(ldc, rng);
    const auto cw = ldc.encode(x);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(ql.lists[i].target == ldc.message_position(i));
        std::vector<Symbol> ans;
        for (auto I : ql.lists[i].queries) ans.push_back(cw[I]);
        CHECK(ldc.finish_smooth(ql.lists[i], ans).symbol == x[i]);
    }

    const auto rows = parse_qlists(serialize_qlists(ql));
    REQUIRE(rows.size() == 16);
    for (std::size_t i = 0; i < 16; ++i) CHECK(rows[i] == ql.lists[i].queries);
    CHECK_THROWS_AS(parse_qlists("1 2 x\n"), FormatError);
}

TEST_CASE("resampling under a tight cap") {
    const LargeLdc ldc(params(4, 3, 3, 16, 1, 64));
    int ok = 0;
    std::size_t resamples = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Rng rng(seed);
        try {
            const auto ql = ldc.gen_qlists(rng, 2);
            resamples += ql.resamples;
            ++ok;
        } catch (const ResampleExhausted&) {
        }
    }
    MESSAGE("ok " << ok << "/1000, resamples " << resamples);
    CHECK(resamples > 0);
    CHECK(ok >= 990);
    // cap 1 needs 16 disjoint lists of 60 points out of 4096; exhausts
    Rng rng(1);
    auto sp = params(4, 3, 3, 16, 4, 16);
    sp.check_query_budget = false;
    const LargeLdc small(sp);
    CHECK_THROWS_AS(small.gen_qlists(rng, 1), ResampleExhausted);
}

TEST_CASE("parameter validation and derivation") {
    const auto p = LargeLdcParams::asymptotic(4, 0.9, 4096, 4);
    CHECK(p.q() == 16);
    CHECK(p.degree == 2);
    CHECK(p.variables == 2);
    CHECK(p.t == 16);
    CHECK_NOTHROW(LargeLdc{p});
    CHECK_THROWS_AS(LargeLdcParams::asymptotic(4, 0.1, 4096, 4), ProfileError);
    CHECK_THROWS_AS(LargeLdc(params(4, 8, 1, 1, 1, 1000)), ProfileError);
    CHECK_THROWS_AS(LargeLdc(params(4, 1, 1, 3, 1, 1000)), ProfileError);
    CHECK_THROWS_AS(LargeLdc(params(4, 1, 2, 3, 8, 64)), ProfileError);
}
