#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "npg/cayley.hpp"

using namespace npg;

namespace {

WittVector random_witt(const RingPtr& r, std::mt19937_64& rng) {
    std::vector<FqElem> coords;
    for (uint32_t i = 0; i < r->N(); ++i) {
        std::vector<uint64_t> c(r->m());
        for (auto& v : c) v = rng() % r->p();
        coords.push_back(FqElem(r->field(), std::move(c)));
    }
    return WittVector::from_coords(r, coords);
}

DisplayMatrix random_normal_form(const RingPtr& r, uint32_t d, uint32_t c, std::mt19937_64& rng) {
    uint32_t h = d + c;
    MatrixW a(r, h, h);
    auto one = WittVector::one(r);
    for (uint32_t i = 0; i + 1 < d; ++i) a.at(i + 1, i) = one;
    a.at(d, d - 1) = one;
    for (uint32_t v = 0; v + 1 < c; ++v) a.at(d + v + 1, d + v) = one;
    for (uint32_t i = 0; i < d; ++i)
        for (uint32_t j = d - 1; j < h; ++j) a.at(i, j) = random_witt(r, rng);
    WittVector corner = random_witt(r, rng);
    while (!corner.is_unit()) corner = random_witt(r, rng);
    a.at(0, h - 1) = corner;
    return DisplayMatrix(r, d, c, std::move(a));
}

} // namespace

TEST_CASE("ch_poly frozen cases") {
    auto ring = WittRing::make(3, 2, 5);
    WittVector p = WittVector::from_int(ring, 3);

    // d=1,h=2, a11=0, a12=1 -> P = p (constant)
    {
        MatrixW a(ring, 2, 2);
        a.at(1, 0) = WittVector::one(ring);
        a.at(0, 1) = WittVector::one(ring);
        auto P = ch_poly(DisplayMatrix(ring, 1, 1, a));
        CHECK(P.coeffs[0] == p);
        CHECK(P.coeffs[1].is_zero());
    }
    // d=1,h=2, a11=u unit, a12=1 -> P = sigma(u) F + p
    {
        std::mt19937_64 rng(3);
        WittVector u = random_witt(ring, rng);
        while (!u.is_unit()) u = random_witt(ring, rng);
        MatrixW a(ring, 2, 2);
        a.at(0, 0) = u;
        a.at(1, 0) = WittVector::one(ring);
        a.at(0, 1) = WittVector::one(ring);
        auto P = ch_poly(DisplayMatrix(ring, 1, 1, a));
        CHECK(P.coeffs[0] == p);
        CHECK(P.coeffs[1] == u.sigma());
    }
    // cyclic normal form -> P = -p^c
    for (uint32_t d = 1; d <= 2; ++d)
        for (uint32_t h = d + 1; h <= 4; ++h) {
            auto P = ch_poly(cyclic_normal_form(d, h, ring));
            WittVector expect = -WittVector::one(ring);
            for (uint32_t k = 0; k < h - d; ++k) expect = expect * p;
            CHECK(P.coeffs[0] == expect);
            for (uint32_t e = 1; e < h; ++e) CHECK(P.coeffs[e].is_zero());
        }

    CHECK_THROWS_AS(ch_poly(DisplayMatrix(ring, 1, 1, MatrixW::identity(ring, 2))), error);
}

TEST_CASE("verify_ch on random normal forms") {
    std::mt19937_64 rng(7);
    for (uint64_t p : {2, 3, 5}) {
        for (uint32_t m : {1u, 2u}) {
            for (int trial = 0; trial < 12; ++trial) {
                uint32_t d = 1 + rng() % 3;
                uint32_t c = 1 + rng() % 3;
                auto ring = WittRing::make(p, m, m * c + 4);
                auto disp = random_normal_form(ring, d, c, rng);
                CHECK(verify_ch(disp));
            }
        }
    }
    // corrupted coefficient: tamper the a_{1,h} cell after computing P
    auto ring = WittRing::make(2, 1, 6);
    auto disp = random_normal_form(ring, 2, 2, rng);
    REQUIRE(verify_ch(disp));
    MatrixW a = disp.a();
    a.at(0, 1) = a.at(0, 1) + WittVector::one(ring); // breaks a free A-column cell
    DisplayMatrix bad(ring, 2, 2, a);
    // the new display is still normal form, but its CH identity must hold for
    // its own polynomial; cross-apply the old polynomial to the new display
    auto P_old = ch_poly(disp);
    auto P_new = ch_poly(bad);
    bool same = true;
    for (uint32_t e = 0; e < P_old.h; ++e)
        if (!(P_old.coeffs[e] == P_new.coeffs[e])) same = false;
    CHECK(!same);
}

TEST_CASE("np_fast") {
    // cyclic -> pure
    for (uint64_t p : {2, 3}) {
        for (uint32_t h = 2; h <= 6; ++h)
            for (uint32_t d = 1; d < h; ++d) {
                auto ring = WittRing::make(p, 1, (h - d) + 2);
                CHECK(np_fast(cyclic_normal_form(d, h, ring)) == pure_np(h, h - d));
            }
    }
    // seed display of an ordinary polygon
    auto ring = WittRing::make(3, 1, 5);
    CHECK(np_fast(np_seed_display(ordinary_np(2, 2), ring)) == ordinary_np(2, 2));

    // np_fast == np_oracle on random normal forms
    std::mt19937_64 rng(11);
    for (uint64_t p : {2, 3, 5}) {
        for (int trial = 0; trial < 25; ++trial) {
            uint32_t d = 1 + rng() % 3;
            uint32_t c = 1 + rng() % 3;
            auto r = WittRing::make(p, 1, c + 4);
            auto disp = random_normal_form(r, d, c, rng);
            CHECK(np_fast(disp) == np_oracle(to_fmodule(disp)));
        }
    }
    // precision gate
    auto tiny = WittRing::make(2, 1, 2);
    CHECK_THROWS_AS(np_fast(cyclic_normal_form(1, 2, tiny)), error);
}

TEST_CASE("np_hull") {
    auto ring = WittRing::make(2, 1, 5);
    // only (1,h) occupied -> pure polygon
    for (uint32_t h = 2; h <= 5; ++h)
        for (uint32_t d = 1; d < h; ++d)
            CHECK(np_hull(cyclic_normal_form(d, h, ring)) == pure_np(h, h - d));

    // d=1,h=2 both cells unit -> ordinary
    {
        MatrixW a(ring, 2, 2);
        a.at(0, 0) = WittVector::one(ring);
        a.at(1, 0) = WittVector::one(ring);
        a.at(0, 1) = WittVector::one(ring);
        CHECK(np_hull(DisplayMatrix(ring, 1, 1, a)) == ordinary_np(1, 1));
    }
    // mixed-valuation entry is rejected
    {
        MatrixW a(ring, 2, 2);
        a.at(0, 0) = WittVector::from_int(ring, 2); // valuation 1, not zero-or-unit
        a.at(1, 0) = WittVector::one(ring);
        a.at(0, 1) = WittVector::one(ring);
        CHECK_THROWS_AS(np_hull(DisplayMatrix(ring, 1, 1, a)), error);
    }

    // np_hull == np_fast exhaustively over zero/unit patterns, h <= 4 here
    for (uint32_t h = 2; h <= 4; ++h)
        for (uint32_t d = 1; d < h; ++d) {
            uint32_t c = h - d;
            auto r = WittRing::make(3, 1, c + 2);
            uint32_t cells = d * (c + 1) - 1; // free cells minus the fixed corner
            for (uint32_t mask = 0; mask < (1u << cells); ++mask) {
                MatrixW a(r, h, h);
                auto one = WittVector::one(r);
                for (uint32_t i = 0; i + 1 < d; ++i) a.at(i + 1, i) = one;
                a.at(d, d - 1) = one;
                for (uint32_t v = 0; v + 1 < c; ++v) a.at(d + v + 1, d + v) = one;
                a.at(0, h - 1) = one;
                uint32_t bit = 0;
                for (uint32_t i = 0; i < d; ++i)
                    for (uint32_t j = d - 1; j < h; ++j) {
                        if (i == 0 && j == h - 1) continue;
                        if (mask & (1u << bit)) a.at(i, j) = one;
                        ++bit;
                    }
                DisplayMatrix disp(r, d, c, std::move(a));
                CHECK(np_hull(disp) == np_fast(disp));
            }
        }
}
