#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "streamcode/errors.hpp"
#include "streamcode/gf.hpp"
#include "streamcode/rng.hpp"

using namespace streamcode;

TEST_CASE("addition is xor") {
    auto f2 = Field::standard(1);
    CHECK(f2->add(1, 1) == 0);
    auto f4 = Field::standard(2);
    CHECK(f4->add(0b10, 0b11) == 1);
    for (Symbol a = 0; a < 4; ++a) CHECK(f4->add(a, 0) == a);
}

TEST_CASE("multiplication matches carry-less reduction") {
    auto f4 = Field::standard(2);
    CHECK(f4->mul(0b10, 0b10) == 0b11);
    auto f8 = Field::standard(3);
    CHECK(f8->mul(0b100, 0b010) == 0b011);
    for (unsigned k : {1U, 2U, 3U, 4U, 6U, 8U, 10U, 12U}) {
        auto f = Field::standard(k);
        Rng rng(k);
        for (int i = 0; i < 2000; ++i) {
            const auto a = static_cast<Symbol>(rng.below(f->size()));
            const auto b = static_cast<Symbol>(rng.below(f->size()));
            CHECK(f->mul(a, b) == slow_mul(a, b, k, f->modulus()));
            CHECK(f->mul(a, 1) == a);
        }
    }
}

TEST_CASE("inverse") {
    auto f4 = Field::standard(2);
    CHECK(f4->inv(1) == 1);
    CHECK(f4->inv(0b10) == 0b11);
    auto f8 = Field::standard(3);
    CHECK(f8->inv(0b010) == 0b101);
    CHECK_THROWS_AS(f8->inv(0), ZeroInverse);
    for (unsigned k : {1U, 4U, 8U, 12U}) {
        auto f = Field::standard(k);
        for (Symbol a = 1; a < f->size(); ++a) CHECK(f->mul(a, f->inv(a)) == 1);
    }
}

TEST_CASE("field axioms on sampled triples") {
    for (unsigned k : {2U, 4U, 6U, 8U, 10U, 12U}) {
        auto f = Field::standard(k);
        Rng rng(100 + k);
        for (int i = 0; i < 1000; ++i) {
            const auto a = static_cast<Symbol>(rng.below(f->size()));
            const auto b = static_cast<Symbol>(rng.below(f->size()));
            const auto c = static_cast<Symbol>(rng.below(f->size()));
            CHECK(f->mul(a, b) == f->mul(b, a));
            CHECK(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
            CHECK(f->add(f->add(a, b), c) == f->add(a, f->add(b, c)));
            CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
        }
    }
}

TEST_CASE("construction validates the modulus") {
    CHECK_THROWS_AS(Field(2, 0b101), InvalidArgument);  // x^2+1 = (x+1)^2
    CHECK_THROWS_AS(Field(3, 0b11), InvalidArgument);   // wrong degree
    CHECK(is_irreducible(0b111));
    CHECK_FALSE(is_irreducible(0b1111));
    CHECK_NOTHROW(Field(4, 0b11001));
}

TEST_CASE("field elements refuse mixed fields") {
    FieldElem a(Field::standard(2), 1);
    FieldElem b(Field::standard(3), 1);
    CHECK_THROWS_AS(a + b, FieldMismatch);
    CHECK_THROWS_AS(a * b, FieldMismatch);
    CHECK((a + a).is_zero());
}

TEST_CASE("hex serialization") {
    auto f12 = Field::standard(12);
    CHECK(f12->to_hex(0xab) == "0ab");
    CHECK(f12->from_hex("0ab") == 0xab);
    CHECK(Field::standard(1)->to_hex(1) == "1");
    CHECK_THROWS(f12->from_hex("1000"));
}

TEST_CASE("polynomial evaluation and interpolation") {
    auto f4 = Field::standard(2);
    Poly c(f4, {3});
    for (Symbol x = 0; x < 4; ++x) CHECK(c.eval(x) == 3);

    std::vector<std::pair<Symbol, Symbol>> line = {{0, 0}, {1, 1}};
    CHECK(Poly::interpolate(f4, line) == Poly(f4, {0, 1}));

    auto f16 = Field::standard(4);
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t deg = rng.below(6);
        std::vector<Symbol> coeffs(deg + 1);
        for (auto& v : coeffs) v = static_cast<Symbol>(rng.below(16));
        Poly p(f16, coeffs);
        std::vector<std::pair<Symbol, Symbol>> pts;
        for (Symbol x = 0; x < deg + 1 + rng.below(3); ++x) pts.emplace_back(x, p.eval(x));
        CHECK(Poly::interpolate(f16, pts) == p);
    }
    std::vector<std::pair<Symbol, Symbol>> dup = {{1, 0}, {1, 1}};
    CHECK_THROWS_AS(Poly::interpolate(f4, dup), DuplicateAbscissa);
}

TEST_CASE("polynomial division") {
    auto f = Field::standard(4);
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Symbol> a(1 + rng.below(8)), b(1 + rng.below(4));
        for (auto& v : a) v = static_cast<Symbol>(rng.below(16));
        for (auto& v : b) v = static_cast<Symbol>(rng.below(16));
        b.back() = 1 + static_cast<Symbol>(rng.below(15));
        auto [q, r] = poly::divmod(*f, a, b);
        auto back = poly::mul(*f, q, b);
        back.resize(std::max(back.size(), r.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) back[i] ^= r[i];
        poly::trim(back);
        auto at = a;
        poly::trim(at);
        CHECK(back == at);
        CHECK(r.size() < b.size());
    }
}

TEST_CASE("embedding is a K-linear bijection") {
    for (auto [kb, ke] : {std::pair{1U, 4U}, std::pair{2U, 4U}, std::pair{2U, 6U}, std::pair{4U, 8U}}) {
        Embedding emb(Field::standard(kb), Field::standard(ke));
        const auto& base = *emb.base();
        const auto& ext = *emb.ext();
        CHECK(emb.ratio() == ke / kb);
        for (Symbol v = 0; v < ext.size(); ++v) {
            auto c = emb.coords(v);
            CHECK(emb.from_coords(std::vector<Symbol>(c.begin(), c.end())) == v);
        }
        for (Symbol a = 0; a < base.size(); ++a)
            for (Symbol b = 0; b < base.size(); ++b) CHECK(ext.mul(emb.lift(a), emb.lift(b)) == emb.lift(base.mul(a, b)));
        Rng rng(kb * 100 + ke);
        for (int i = 0; i < 200; ++i) {
            const auto s = static_cast<Symbol>(rng.below(base.size()));
            const auto v = static_cast<Symbol>(rng.below(ext.size()));
            const auto c = emb.coords(ext.mul(emb.lift(s), v));
            const auto cv = emb.coords(v);
            for (unsigned j = 0; j < emb.ratio(); ++j) CHECK(c[j] == base.mul(s, cv[j]));
        }
    }
    Embedding bits(Field::standard(1), Field::standard(4));
    auto c = bits.coords(0b1010);
    CHECK(std::vector<Symbol>(c.begin(), c.end()) == std::vector<Symbol>{1, 0, 1, 0});
}
