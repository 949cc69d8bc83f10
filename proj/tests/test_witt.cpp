#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "npg/structure_polys.hpp"
#include "npg/witt.hpp"

using namespace npg;

namespace {

FqElem random_fq(const FieldPtr& f, std::mt19937_64& rng) {
    std::vector<uint64_t> c(f->m());
    for (auto& v : c) v = rng() % f->p();
    return FqElem(f, std::move(c));
}

WittVector random_witt(const RingPtr& r, std::mt19937_64& rng) {
    std::vector<FqElem> coords;
    for (uint32_t i = 0; i < r->N(); ++i) coords.push_back(random_fq(r->field(), rng));
    return WittVector::from_coords(r, coords);
}

} // namespace

TEST_CASE("make_field picks the deterministic least irreducible modulus") {
    auto f21 = FieldDesc::make(2, 1);
    CHECK(f21->modulus() == std::vector<uint64_t>{0}); // t

    auto f22 = FieldDesc::make(2, 2);
    CHECK(f22->modulus() == std::vector<uint64_t>{1, 1}); // t^2+t+1

    // brute-force oracle: scan monic quadratics over GF(3) ordered by value
    auto f32 = FieldDesc::make(3, 2);
    {
        std::vector<uint64_t> expect;
        for (uint64_t code = 0; code < 9 && expect.empty(); ++code) {
            uint64_t c0 = code % 3, c1 = code / 3;
            bool has_root = false;
            for (uint64_t x = 0; x < 3; ++x)
                if ((x * x + c1 * x + c0) % 3 == 0) has_root = true;
            if (!has_root) expect = {c0, c1};
        }
        CHECK(f32->modulus() == expect);
        CHECK(f32->modulus() == std::vector<uint64_t>{1, 0}); // t^2+1
    }

    CHECK(FieldDesc::make(2, 3)->modulus() == std::vector<uint64_t>{1, 1, 0}); // t^3+t+1

    CHECK_THROWS_AS(FieldDesc::make(4, 1), error);
    CHECK_THROWS_AS(FieldDesc::make(2, 64), error);
}

TEST_CASE("field arithmetic") {
    auto f4 = FieldDesc::make(2, 2);
    FqElem t(f4, {0, 1});
    FqElem t1(f4, {1, 1});
    CHECK(t * t1 == FqElem::one(f4)); // t(t+1) = 1 mod t^2+t+1

    auto f9 = FieldDesc::make(3, 2);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        FqElem a = random_fq(f9, rng);
        // frobenius applied m times is the identity
        CHECK(a.frobenius().frobenius() == a);
        CHECK(a.frobenius().inv_frobenius() == a);
        if (!a.is_zero()) CHECK(a * a.inv() == FqElem::one(f9));
    }
    // frobenius fixes the prime field
    for (uint64_t v = 0; v < 3; ++v) {
        FqElem a = FqElem::from_int(f9, v);
        CHECK(a.frobenius() == a);
    }
    CHECK_THROWS_AS(FqElem::zero(f9).inv(), error);
}

TEST_CASE("structure polynomials: frozen small cases") {
    const auto& t2 = witt_structure_polys(2, 2);
    // S_0 = x0 + y0, P_0 = x0*y0
    CHECK(t2.sum[0].terms().size() == 2);
    CHECK(t2.product[0].terms().size() == 1);
    // p = 2: S_1 = x1 + y1 - x0*y0
    {
        IntPoly expect = IntPoly::variable(4, 1) + IntPoly::variable(4, 3) -
                         IntPoly::variable(4, 0) * IntPoly::variable(4, 2);
        CHECK(t2.sum[1].terms() == expect.terms());
    }
    // p = 2: P_1 = x0^2*y1 + x1*y0^2 + 2*x1*y1
    {
        IntPoly expect = IntPoly::variable(4, 0).pow(2) * IntPoly::variable(4, 3) +
                         IntPoly::variable(4, 1) * IntPoly::variable(4, 2).pow(2) +
                         (IntPoly::variable(4, 1) * IntPoly::variable(4, 3)).scaled(2);
        CHECK(t2.product[1].terms() == expect.terms());
    }
}

TEST_CASE("structure polynomials: integrality over the test grid") {
    // divided_exact throws if any division in the ghost recursion is inexact
    CHECK_NOTHROW(witt_structure_polys(2, 4));
    CHECK_NOTHROW(witt_structure_polys(3, 3));
    CHECK_NOTHROW(witt_structure_polys(5, 2));
}

TEST_CASE("fast backend agrees with the structure-polynomial oracle") {
    std::mt19937_64 rng(11);
    struct Cell {
        uint64_t p;
        uint32_t m, N;
    };
    for (Cell cell : {Cell{2, 1, 4}, Cell{2, 2, 3}, Cell{3, 1, 3}, Cell{3, 2, 2}, Cell{5, 1, 2}}) {
        auto ring = WittRing::make(cell.p, cell.m, cell.N);
        for (int i = 0; i < 40; ++i) {
            WittVector a = random_witt(ring, rng);
            WittVector b = random_witt(ring, rng);
            CHECK((a + b) == witt_add_via_polys(a, b));
            CHECK((a * b) == witt_mul_via_polys(a, b));
        }
    }
}

TEST_CASE("ring axioms across the grid") {
    std::mt19937_64 rng(13);
    for (uint64_t p : {2, 3, 5})
        for (uint32_t m : {1, 2, 3})
            for (uint32_t N : {2, 4, 6}) {
                auto ring = WittRing::make(p, m, N);
                for (int i = 0; i < 25; ++i) {
                    WittVector a = random_witt(ring, rng);
                    WittVector b = random_witt(ring, rng);
                    WittVector c = random_witt(ring, rng);
                    CHECK((a + b) + c == a + (b + c));
                    CHECK((a * b) * c == a * (b * c));
                    CHECK(a * (b + c) == a * b + a * c);
                    CHECK(a + b == b + a);
                    CHECK(a * b == b * a);
                    CHECK(a + (-a) == WittVector::zero(ring));
                    CHECK(a * WittVector::one(ring) == a);
                }
            }
}

TEST_CASE("teichmuller lifts") {
    auto ring = WittRing::make(3, 2, 4);
    auto f = ring->field();
    std::mt19937_64 rng(17);

    CHECK(WittVector::teichmuller(FqElem::zero(f), ring) == WittVector::zero(ring));
    CHECK(WittVector::teichmuller(FqElem::one(f), ring) == WittVector::one(ring));

    for (int i = 0; i < 30; ++i) {
        FqElem x = random_fq(f, rng);
        FqElem y = random_fq(f, rng);
        auto tx = WittVector::teichmuller(x, ring);
        auto ty = WittVector::teichmuller(y, ring);
        CHECK(tx * ty == WittVector::teichmuller(x * y, ring));
        if (!x.is_zero()) {
            CHECK(tx.valuation() == 0);
            // unit group order p^m - 1
            WittVector pw = WittVector::one(ring);
            for (uint64_t e = 0; e < f->order() - 1; ++e) pw = pw * tx;
            CHECK(pw == WittVector::one(ring));
        }
    }
    // teichmuller coordinates are (x, 0, ..., 0)
    FqElem x(f, {2, 1});
    auto coords = WittVector::teichmuller(x, ring).coords();
    CHECK(coords[0] == x);
    for (uint32_t i = 1; i < ring->N(); ++i) CHECK(coords[i].is_zero());
}

TEST_CASE("p as a Witt vector is (0,1,0,...)") {
    for (uint64_t p : {2, 3, 5}) {
        auto ring = WittRing::make(p, 1, 4);
        // teichmuller(1) summed p times
        WittVector sum = WittVector::zero(ring);
        for (uint64_t i = 0; i < p; ++i) sum = sum + WittVector::one(ring);
        auto coords = sum.coords();
        CHECK(coords[0].is_zero());
        CHECK(coords[1] == FqElem::one(ring->field()));
        for (uint32_t i = 2; i < ring->N(); ++i) CHECK(coords[i].is_zero());
        CHECK(sum == WittVector::one(ring).verschiebung());
    }
}

TEST_CASE("sigma, tau, verschiebung") {
    std::mt19937_64 rng(19);
    for (uint64_t p : {2, 3}) {
        for (uint32_t m : {1, 2, 3}) {
            auto ring = WittRing::make(p, m, 4);
            for (int i = 0; i < 20; ++i) {
                WittVector a = random_witt(ring, rng);
                WittVector b = random_witt(ring, rng);
                CHECK(a.sigma().tau() == a);
                CHECK(a.tau().sigma() == a);
                // sigma is a ring automorphism
                CHECK((a + b).sigma() == a.sigma() + b.sigma());
                CHECK((a * b).sigma() == a.sigma() * b.sigma());
                // sigma acts coordinatewise by x -> x^p
                auto cs = a.coords();
                auto ss = a.sigma().coords();
                for (uint32_t k = 0; k < ring->N(); ++k) CHECK(ss[k] == cs[k].frobenius());
                // V shifts coordinates right
                auto vs = a.verschiebung().coords();
                CHECK(vs[0].is_zero());
                for (uint32_t k = 1; k < ring->N(); ++k) CHECK(vs[k] == cs[k - 1]);
                // V(sigma(a)) = sigma(V(a)) = p*a
                WittVector pa = WittVector::from_int(ring, int64_t(p)) * a;
                CHECK(a.sigma().verschiebung() == pa);
                CHECK(a.verschiebung().sigma() == pa);
                // V is additive
                CHECK((a + b).verschiebung() == a.verschiebung() + b.verschiebung());
            }
            // sigma on W_N(GF(p)) is the identity
            if (m == 1) {
                WittVector a = random_witt(ring, rng);
                CHECK(a.sigma() == a);
            }
        }
    }
}

TEST_CASE("valuation") {
    auto ring = WittRing::make(3, 2, 5);
    std::mt19937_64 rng(23);
    CHECK(!WittVector::zero(ring).valuation().has_value());
    CHECK(WittVector::from_int(ring, 3).valuation() == 1);
    CHECK(valuation_or_N(WittVector::zero(ring)) == ring->N());

    for (int i = 0; i < 40; ++i) {
        WittVector a = random_witt(ring, rng);
        WittVector b = random_witt(ring, rng);
        auto va = a.valuation(), vb = b.valuation();
        if (va && vb && *va + *vb < ring->N()) {
            CHECK(*(a * b).valuation() == *va + *vb);
        }
        if (va) {
            WittVector pa = WittVector::from_int(ring, 3) * a;
            uint32_t expect = *va + 1;
            if (expect >= ring->N()) {
                CHECK(!pa.valuation().has_value());
            } else {
                CHECK(*pa.valuation() == expect);
            }
        }
    }
}

TEST_CASE("unit inverse") {
    std::mt19937_64 rng(29);
    auto ring = WittRing::make(2, 3, 5);
    for (int i = 0; i < 30; ++i) {
        WittVector a = random_witt(ring, rng);
        if (!a.is_unit()) {
            if (!a.is_zero()) CHECK_THROWS_AS(a.inv(), error);
            continue;
        }
        CHECK(a * a.inv() == WittVector::one(ring));
    }
    CHECK_THROWS_AS(WittVector::from_int(ring, 2).inv(), error);
}

TEST_CASE("ghost components (m = 1)") {
    std::mt19937_64 rng(31);
    for (uint64_t p : {2, 3, 5}) {
        auto ring = WittRing::make(p, 1, 4);
        const uint32_t N = ring->N();

        // ghost(teichmuller(1)) = (1,1,...,1)
        auto g1 = ghost(WittVector::one(ring));
        for (uint32_t n = 0; n < N; ++n) CHECK(g1[n] == 1);

        // ghost(p) = (0, p, p, ...)
        auto gp = ghost(WittVector::from_int(ring, int64_t(p)));
        CHECK(gp[0] == 0);
        for (uint32_t n = 1; n < N; ++n) CHECK(gp[n] == p);

        // homomorphism mod p^{n+1} at index n
        auto pow_n1 = [&](uint32_t n) {
            uint64_t r = 1;
            for (uint32_t i = 0; i <= n; ++i) r *= p;
            return r;
        };
        for (int i = 0; i < 400; ++i) {
            WittVector a = random_witt(ring, rng);
            WittVector b = random_witt(ring, rng);
            auto ga = ghost(a), gb = ghost(b);
            auto gs = ghost(a + b), gm = ghost(a * b);
            for (uint32_t n = 0; n < N; ++n) {
                uint64_t mod = pow_n1(n);
                CHECK(gs[n] % mod == (ga[n] + gb[n]) % mod);
                CHECK(gm[n] % mod ==
                      uint64_t((unsigned __int128)ga[n] * gb[n] % mod));
            }
        }
    }
    auto ring2 = WittRing::make(2, 2, 3);
    CHECK_THROWS_AS(ghost(WittVector::one(ring2)), error);
}

TEST_CASE("witt coordinate round trip and truncation") {
    std::mt19937_64 rng(37);
    auto ring = WittRing::make(3, 2, 5);
    auto small = WittRing::make(3, 2, 3);
    for (int i = 0; i < 30; ++i) {
        WittVector a = random_witt(ring, rng);
        CHECK(WittVector::from_coords(ring, a.coords()) == a);
        // truncation is a ring homomorphism
        WittVector b = random_witt(ring, rng);
        CHECK((a * b).truncate(small) == a.truncate(small) * b.truncate(small));
        CHECK((a + b).truncate(small) == a.truncate(small) + b.truncate(small));
        // truncation keeps the leading coordinates
        auto cs = a.coords();
        auto ts = a.truncate(small).coords();
        for (uint32_t k = 0; k < small->N(); ++k) CHECK(ts[k] == cs[k]);
    }
}

TEST_CASE("field embedding is a ring map compatible with witt structure") {
    std::mt19937_64 rng(41);
    auto small = WittRing::make(2, 2, 4);
    auto big = WittRing::make(2, 4, 4);
    FieldEmbedding emb(small->field(), big->field());
    for (int i = 0; i < 20; ++i) {
        WittVector a = random_witt(small, rng);
        WittVector b = random_witt(small, rng);
        CHECK((a + b).embed(big, emb) == a.embed(big, emb) + b.embed(big, emb));
        CHECK((a * b).embed(big, emb) == a.embed(big, emb) * b.embed(big, emb));
        CHECK(a.sigma().embed(big, emb) == a.embed(big, emb).sigma());
    }
}

TEST_CASE("div_p") {
    auto ring = WittRing::make(3, 1, 4);
    WittVector a = WittVector::from_int(ring, 9 * 5);
    CHECK(a.div_p(2) == WittVector::from_int(ring, 5));
    CHECK_THROWS_AS(WittVector::one(ring).div_p(), error);
}
