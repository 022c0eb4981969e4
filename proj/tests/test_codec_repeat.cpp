#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "streamcode/codec_repeat.hpp"
#include "streamcode/errors.hpp"

using namespace streamcode;

namespace {

const BinaryLdc& toy_ldc() {
    static const BinaryLdc ldc(RepeatParams::toy().ldc);
    return ldc;
}

std::vector<Symbol> random_bits(std::size_t n, Rng& rng) {
    std::vector<Symbol> x(n);
    for (auto& b : x) b = static_cast<Symbol>(rng.below(2));
    return x;
}

// Flip `count` distinct positions in [begin, end).
void flip_range(Word& w, std::size_t begin, std::size_t end, std::size_t count, Rng& rng) {
    std::vector<std::size_t> idx(end - begin);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = begin + i;
    for (std::size_t i = 0; i < count; ++i) {
        std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
        w[idx[i]] ^= 1;
    }
}

}  // namespace

TEST_CASE("encoder repeats the LDC codeword") {
    const auto& ldc = toy_ldc();
    auto p = RepeatParams::toy();
    Rng rng(1);
    const auto x = random_bits(p.n, rng);
    const auto y = ldc.encode(x);
    p.copies = 1;
    CHECK(enc_repeat(ldc, p, x) == y);
    p.copies = 3;
    const auto z = enc_repeat(ldc, p, x);
    REQUIRE(z.size() == 3 * ldc.length());
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::equal(y.begin(), y.end(), z.begin() + static_cast<std::ptrdiff_t>(i * y.size())));
    CHECK_THROWS_AS(enc_repeat(ldc, p, std::vector<Symbol>(3)), LengthMismatch);
}

TEST_CASE("clean stream decodes exactly in one pass within budget") {
    const auto& ldc = toy_ldc();
    const auto p = RepeatParams::toy();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        const auto x = random_bits(p.n, rng);
        SymbolStream s(enc_repeat(ldc, p, x));
        const auto res = dec_repeat(ldc, p, s, rng);
        CHECK(res.completed);
        CHECK(res.tape.equals(x));
        CHECK(s.reads() == res.copies_used * ldc.length());
        CHECK(res.peak_bits <= p.budget_bits);
        CHECK_FALSE(res.budget_exceeded);
        MESSAGE("copies " << res.copies_used << " phase1 " << res.phase1_copies << " peak " << res.peak_bits);
    }
}

TEST_CASE("destroyed first copy") {
    const auto& ldc = toy_ldc();
    const auto p = RepeatParams::toy();
    Rng rng(77);
    const auto x = random_bits(p.n, rng);
    auto w = enc_repeat(ldc, p, x);
    for (std::size_t i = 0; i < ldc.length(); ++i) w[i] ^= 1;
    SymbolStream s(std::move(w));
    const auto res = dec_repeat(ldc, p, s, rng);
    CHECK(res.completed);
    CHECK(res.tape.equals(x));
}

TEST_CASE("half the bits flipped is reported as a failure") {
    const auto& ldc = toy_ldc();
    const auto p = RepeatParams::toy();
    Rng rng(5);
    const auto x = random_bits(p.n, rng);
    auto w = enc_repeat(ldc, p, x);
    flip_range(w, 0, w.size(), w.size() / 2, rng);
    SymbolStream s(w);
    const auto res = dec_repeat(ldc, p, s, rng);
    CHECK_FALSE((res.completed && res.tape.equals(x)));
    if (!res.completed) {
        CHECK(res.exhausted);
        SymbolStream s2(w);
        CHECK_THROWS_AS(repeat_decode(ldc, p, s2, rng), StreamExhausted);
    }
}

TEST_CASE("err-count claim with 0.2 planted per copy") {
    const auto& ldc = toy_ldc();
    const auto p = RepeatParams::toy();
    const std::size_t N = ldc.length();
    int bad = 0, checks = 0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(1000 + static_cast<std::uint64_t>(trial));
        const auto x = random_bits(p.n, rng);
        const auto y = ldc.encode(x);
        auto w = enc_repeat(ldc, p, x);
        std::vector<double> errs;
        for (std::size_t c = 0; c < p.copies; ++c) {
            const auto e = static_cast<std::size_t>(0.2 * static_cast<double>(N));
            flip_range(w, c * N, (c + 1) * N, e, rng);
            errs.push_back(static_cast<double>(e));
        }
        SymbolStream s(std::move(w));
        const auto res = dec_repeat(ldc, p, s, rng, true);
        const auto probe = errcount_probe(p, res, y, errs);
        checks += static_cast<int>(probe.checks);
        if (probe.violations) ++bad;
    }
    MESSAGE("violating trials " << bad << "/" << trials << ", checks " << checks);
    CHECK(bad * 20 <= trials);
}

TEST_CASE("profile validation") {
    auto p = RepeatParams::toy();
    CHECK_NOTHROW(p.validate());
    CHECK(p.threshold() == doctest::Approx(0.3 * 16));
    p.loose_threshold = true;
    CHECK(p.threshold() == doctest::Approx(0.4 * 16));
    p.n = 10;
    CHECK_THROWS_AS(p.validate(), ProfileError);
    const auto r = repeat_regime(1u << 16, 1e6);
    CHECK(r.v == doctest::Approx(256.0));
    CHECK(r.Q == doctest::Approx(std::pow(1e6, 0.1)));
}
