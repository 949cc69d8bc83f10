#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "npg/cayley.hpp"
#include "npg/display.hpp"

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

MatrixW random_invertible(const RingPtr& r, uint32_t n, std::mt19937_64& rng) {
    while (true) {
        MatrixW m(r, n, n);
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t j = 0; j < n; ++j) m.at(i, j) = random_witt(r, rng);
        if (m.det().is_unit()) return m;
    }
}

// random symplectic matrix: product of elementary symplectic transvection-like
// factors that preserve the standard form exactly
MatrixW random_symplectic(const RingPtr& r, uint32_t g, std::mt19937_64& rng) {
    const uint32_t h = 2 * g;
    MatrixW S = GramForm::standard(r, g).S();
    MatrixW U = MatrixW::identity(r, h);
    auto apply = [&](const MatrixW& T) { U = U * T; };
    for (int rounds = 0; rounds < 6; ++rounds) {
        // (I A; 0 I) with A symmetric
        MatrixW A(r, g, g);
        for (uint32_t i = 0; i < g; ++i)
            for (uint32_t j = i; j < g; ++j) {
                WittVector v = random_witt(r, rng);
                A.at(i, j) = v;
                A.at(j, i) = v;
            }
        MatrixW T1 = MatrixW::identity(r, h);
        T1.paste(0, g, A);
        apply(T1);
        // (I 0; B I) with B symmetric
        MatrixW B(r, g, g);
        for (uint32_t i = 0; i < g; ++i)
            for (uint32_t j = i; j < g; ++j) {
                WittVector v = random_witt(r, rng);
                B.at(i, j) = v;
                B.at(j, i) = v;
            }
        MatrixW T2 = MatrixW::identity(r, h);
        T2.paste(g, 0, B);
        apply(T2);
        // (M 0; 0 (M^t)^{-1})
        MatrixW M = random_invertible(r, g, rng);
        MatrixW T3(r, h, h);
        T3.paste(0, 0, M);
        T3.paste(g, g, M.transpose().inverse());
        apply(T3);
    }
    REQUIRE(U.transpose() * S * U == S);
    return U;
}

} // namespace

TEST_CASE("normal_form on an input already in normal form") {
    auto ring = WittRing::make(3, 1, 6);
    auto disp = cyclic_normal_form(2, 5, ring);
    auto res = normal_form(to_fmodule(disp));
    CHECK(is_normal_form(res.disp));
    CHECK(res.effective_N == ring->N() - 1);
    CHECK(np_fast(res.disp) == pure_np(5, 3));
}

TEST_CASE("normal_form recovers a random base change of cyclic(2,5)") {
    std::mt19937_64 rng(17);
    auto ring = WittRing::make(2, 1, 8);
    auto disp = cyclic_normal_form(2, 5, ring);
    FModule mod = to_fmodule(disp);
    for (int trial = 0; trial < 5; ++trial) {
        FModule twisted = base_change(mod, random_invertible(ring, 5, rng));
        auto res = normal_form(twisted);
        CHECK(is_normal_form(res.disp));
        CHECK(np_fast(res.disp) == pure_np(5, 3)); // slope 3/5
    }
}

TEST_CASE("normal_form across seeds and fields") {
    std::mt19937_64 rng(19);
    for (uint64_t p : {2, 3}) {
        for (int64_t h = 2; h <= 5; ++h)
            for (int64_t d = 1; d < h; ++d) {
                for (const auto& np : enumerate_np(h, d)) {
                    if (np.slopes().front() == Rational(0, 1)) continue;      // p-rank > 0
                    if (np.slopes().back() == Rational(1, 1)) continue;       // dual p-rank > 0
                    auto ring = WittRing::make(p, 1, uint32_t(h - d) + 6);
                    auto seed = np_seed_display(np, ring);
                    FModule mod = to_fmodule(seed);
                    FModule twisted = base_change(mod, random_invertible(ring, uint32_t(h), rng));
                    auto res = normal_form(twisted);
                    CHECK(is_normal_form(res.disp));
                    CHECK(np_fast(res.disp) == np);
                }
            }
    }
}

TEST_CASE("normal_form rejects bad inputs") {
    auto ring = WittRing::make(3, 1, 5);
    // ordinary input: p-rank > 0
    {
        MatrixW a(ring, 2, 2);
        a.at(0, 0) = WittVector::one(ring);
        a.at(1, 1) = WittVector::from_int(ring, 3);
        CHECK_THROWS_AS(normal_form(FModule(ring, a)), error);
        try {
            normal_form(FModule(ring, a));
        } catch (const error& e) {
            CHECK(e.code() == errc::not_local_local);
        }
    }
    // a-number 2: direct sum of two supersingular displays
    {
        MatrixW a(ring, 4, 4);
        a.at(0, 2) = WittVector::from_int(ring, 3);
        a.at(2, 0) = WittVector::one(ring);
        a.at(1, 3) = WittVector::from_int(ring, 3);
        a.at(3, 1) = WittVector::one(ring);
        try {
            normal_form(FModule(ring, a));
            CHECK(false);
        } catch (const error& e) {
            CHECK(e.code() == errc::not_cyclic);
        }
    }
}

TEST_CASE("symplectic_normal_form recovers perturbed pqp seeds") {
    std::mt19937_64 rng(23);
    for (uint64_t p : {2, 3}) {
        for (uint32_t g = 1; g <= 2; ++g) {
            auto ring = WittRing::make(p, 1, g + 6);
            auto [disp, gram] = supersingular_pqp(g, ring);
            FModule mod = to_fmodule(disp);
            for (int trial = 0; trial < 3; ++trial) {
                MatrixW U = random_symplectic(ring, g, rng);
                FModule twisted = base_change(mod, U);
                auto res = symplectic_normal_form(twisted, gram);
                CHECK(is_normal_form(res.disp));
                CHECK(np_fast(res.disp) == supersingular_np(g));
                CHECK(pairing_compatible(res.disp, GramForm::standard(res.disp.ring(), g)));
                CHECK(symplectic_block_relation(res.disp, GramForm::standard(res.disp.ring(), g)));
            }
        }
    }
}

TEST_CASE("symplectic_normal_form g=3") {
    std::mt19937_64 rng(29);
    auto ring = WittRing::make(2, 1, 10);
    auto [disp, gram] = supersingular_pqp(3, ring);
    FModule mod = to_fmodule(disp);
    MatrixW U = random_symplectic(ring, 3, rng);
    auto res = symplectic_normal_form(base_change(mod, U), gram);
    CHECK(is_normal_form(res.disp));
    CHECK(np_fast(res.disp) == supersingular_np(3));
    CHECK(pairing_compatible(res.disp, GramForm::standard(res.disp.ring(), 3)));
}

TEST_CASE("symplectic_normal_form precondition checks") {
    auto ring = WittRing::make(3, 1, 6);
    auto [disp, gram] = supersingular_pqp(2, ring);
    // non-symplectic gram is rejected at GramForm construction; a wrong-size
    // one is rejected here
    auto small = GramForm::standard(ring, 1);
    CHECK_THROWS_AS(symplectic_normal_form(to_fmodule(disp), small), error);
    // h != 2d
    auto odd = cyclic_normal_form(1, 3, ring);
    CHECK_THROWS_AS(symplectic_normal_form(to_fmodule(odd), gram), error);
}
