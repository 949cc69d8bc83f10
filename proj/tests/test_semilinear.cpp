#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "npg/semilinear.hpp"

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

MatrixW random_matrix(const RingPtr& r, uint32_t n, std::mt19937_64& rng) {
    MatrixW m(r, n, n);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) m.at(i, j) = random_witt(r, rng);
    return m;
}

MatrixW random_invertible(const RingPtr& r, uint32_t n, std::mt19937_64& rng) {
    while (true) {
        MatrixW m = random_matrix(r, n, rng);
        if (m.det().is_unit()) return m;
    }
}

// supersingular 2x2 seed: F-matrix [[0,p],[1,0]]
MatrixW g11_matrix(const RingPtr& r) {
    MatrixW m(r, 2, 2);
    m.at(0, 1) = WittVector::from_int(r, int64_t(r->p()));
    m.at(1, 0) = WittVector::one(r);
    return m;
}

} // namespace

TEST_CASE("matrix arithmetic basics") {
    auto ring = WittRing::make(3, 1, 4);
    std::mt19937_64 rng(5);
    MatrixW A = random_matrix(ring, 3, rng);
    CHECK(MatrixW::identity(ring, 3) * A == A);
    CHECK(A * MatrixW::identity(ring, 3) == A);

    MatrixW D(ring, 2, 2);
    D.at(0, 0) = WittVector::from_int(ring, 3);
    D.at(1, 1) = WittVector::one(ring);
    CHECK(D.det() == WittVector::from_int(ring, 3));

    // sigma-entrywise over GF(p) is the identity
    CHECK(A.sigma_entrywise(1) == A);

    CHECK_THROWS_AS(A * MatrixW(ring, 2, 2), error);
}

TEST_CASE("inverse with unit pivots, verified by multiplication") {
    std::mt19937_64 rng(7);
    for (uint64_t p : {2, 3}) {
        auto ring = WittRing::make(p, 2, 4);
        for (int i = 0; i < 15; ++i) {
            MatrixW U = random_invertible(ring, 4, rng);
            MatrixW V = U.inverse();
            CHECK(U * V == MatrixW::identity(ring, 4));
            CHECK(V * U == MatrixW::identity(ring, 4));
        }
        // p * I is not invertible
        MatrixW P = MatrixW::identity(ring, 2).scaled(WittVector::from_int(ring, int64_t(p)));
        CHECK_THROWS_AS(P.inverse(), error);
    }
}

TEST_CASE("twisted powers") {
    std::mt19937_64 rng(11);
    auto ring = WittRing::make(2, 2, 4);
    MatrixW phi = random_matrix(ring, 3, rng);

    CHECK(twisted_power(phi, 1) == phi);

    // m = 1: twisted power is the ordinary power
    auto ring1 = WittRing::make(5, 1, 3);
    MatrixW psi = random_matrix(ring1, 3, rng);
    CHECK(twisted_power(psi, 3) == psi * psi * psi);

    // cocycle: tp(phi, a+b) = tp(phi,a) * sigma^a(tp(phi,b))
    for (uint32_t a = 1; a <= 3; ++a)
        for (uint32_t b = 1; b <= 3; ++b)
            CHECK(twisted_power(phi, a + b) ==
                  twisted_power(phi, a) * twisted_power(phi, b).sigma_entrywise(int64_t(a)));

    // matrix-power vs iterated application on a vector
    std::vector<WittVector> e0(3, WittVector::zero(ring));
    e0[0] = WittVector::one(ring);
    auto via_mat = twisted_power(phi, 4).apply_twisted(e0, 0); // sigma^0: plain multiply
    auto via_apply = twisted_apply_pow(phi, e0, 4);
    CHECK(via_mat == via_apply);
}

TEST_CASE("charpoly frozen examples and properties") {
    auto ring = WittRing::make(3, 1, 4);
    MatrixW A = g11_matrix(ring);
    auto cp = A.charpoly(); // ascending
    CHECK(cp[2] == WittVector::one(ring));
    CHECK(cp[1] == WittVector::zero(ring));
    CHECK(cp[0] == -WittVector::from_int(ring, 3)); // lambda^2 - p

    // diagonal(u, p) with u a unit: lambda^2 - (u+p) lambda + u p
    WittVector u = WittVector::from_int(ring, 2);
    WittVector p = WittVector::from_int(ring, 3);
    MatrixW D(ring, 2, 2);
    D.at(0, 0) = u;
    D.at(1, 1) = p;
    auto cd = D.charpoly();
    CHECK(cd[2] == WittVector::one(ring));
    CHECK(cd[1] == -(u + p));
    CHECK(cd[0] == u * p);

    // reduction mod p^j of charpoly = charpoly of reduction
    std::mt19937_64 rng(13);
    auto small = WittRing::make(3, 1, 2);
    for (int i = 0; i < 10; ++i) {
        MatrixW M = random_matrix(ring, 4, rng);
        MatrixW Msmall(small, 4, 4);
        for (uint32_t r = 0; r < 4; ++r)
            for (uint32_t c = 0; c < 4; ++c) Msmall.at(r, c) = M.at(r, c).truncate(small);
        auto big = M.charpoly();
        auto red = Msmall.charpoly();
        for (size_t k = 0; k < big.size(); ++k) CHECK(big[k].truncate(small) == red[k]);
    }
}

TEST_CASE("np_of_polynomial") {
    using OV = std::optional<uint32_t>;
    // lambda^2 - p: points (0,0),(2,1) -> slopes (1/2,1/2)
    {
        auto np = np_of_polynomial({OV(0), std::nullopt, OV(1)});
        CHECK(np == supersingular_np(1));
    }
    // lambda^2 - u lambda + u p: (0,0),(1,0),(2,1) -> slopes (0,1)
    {
        auto np = np_of_polynomial({OV(0), OV(0), OV(1)});
        CHECK(np == ordinary_np(1, 1));
    }
    // all middle valuations unresolved -> straight line
    {
        auto np = np_of_polynomial({OV(0), std::nullopt, std::nullopt, OV(2)});
        CHECK(np == pure_np(3, 2));
    }
    CHECK_THROWS_AS(np_of_polynomial({OV(1), OV(0), OV(1)}), error);
    CHECK_THROWS_AS(np_of_polynomial({OV(0), OV(0), std::nullopt}), error);
}

TEST_CASE("np_oracle on seed matrices") {
    for (uint64_t p : {2, 3, 5}) {
        for (uint32_t m : {1u, 2u}) {
            auto ring = WittRing::make(p, m, m * 1 + 2);
            FModule mod(ring, g11_matrix(ring));
            CHECK(mod.codim() == 1);
            CHECK(np_oracle(mod) == supersingular_np(1));
        }
    }
    // diagonal(1, p): ordinary split
    auto ring = WittRing::make(3, 1, 3);
    MatrixW D = MatrixW::identity(ring, 2);
    D.at(1, 1) = WittVector::from_int(ring, 3);
    CHECK(np_oracle(FModule(ring, D)) == ordinary_np(1, 1));

    // precision gate
    auto tiny = WittRing::make(3, 2, 2);
    CHECK_THROWS_AS(np_oracle(FModule(tiny, g11_matrix(tiny))), error);
}

TEST_CASE("np_oracle is base-change invariant") {
    std::mt19937_64 rng(17);
    // modules come from displays (A pB; C pD) with (A B; C D) invertible, so
    // slopes stay in [0,1] and the oracle applies
    for (uint64_t p : {2, 3}) {
        for (uint32_t m : {1u, 2u}) {
            for (uint32_t h : {2u, 3u}) {
                for (uint32_t d = 1; d < h; ++d) {
                    auto ring = WittRing::make(p, m, m * (h - d) + 2);
                    WittVector pw = WittVector::from_int(ring, int64_t(p));
                    int done = 0;
                    while (done < 12) {
                        MatrixW a = random_invertible(ring, h, rng);
                        MatrixW phi = a;
                        for (uint32_t i = 0; i < h; ++i)
                            for (uint32_t j = d; j < h; ++j) phi.at(i, j) = phi.at(i, j) * pw;
                        FModule mod(ring, phi);
                        NewtonPolygon np = np_oracle(mod);
                        MatrixW U = random_invertible(ring, h, rng);
                        CHECK(np_oracle(base_change(mod, U)) == np);
                        ++done;
                    }
                }
            }
        }
    }
}

TEST_CASE("base_change conventions") {
    std::mt19937_64 rng(19);
    auto ring = WittRing::make(2, 2, 4);
    MatrixW phi = random_matrix(ring, 3, rng);
    auto dv = phi.det().valuation();
    while (!dv || *dv > 2) {
        phi = random_matrix(ring, 3, rng);
        dv = phi.det().valuation();
    }
    FModule mod(ring, phi);
    CHECK(base_change(mod, MatrixW::identity(ring, 3)).phi == phi);

    // scalar unit u: phi' = u^{-1} phi sigma(u)
    WittVector u = random_witt(ring, rng);
    while (!u.is_unit()) u = random_witt(ring, rng);
    MatrixW U = MatrixW::identity(ring, 3).scaled(u);
    MatrixW expect = phi.scaled(u.inv() * u.sigma());
    CHECK(base_change(mod, U).phi == expect);

    CHECK_THROWS_AS(base_change(mod, MatrixW::zero(ring, 3, 3)), error);
}

TEST_CASE("oracle endpoints and duality cross-check") {
    std::mt19937_64 rng(23);
    auto ring = WittRing::make(3, 1, 8);
    // display-backed module: dual of the F-matrix is p * sigma(phi^{-1})^t,
    // computed via p^{c} phi^{-1} which is integral for these inputs
    MatrixW phi = g11_matrix(ring);
    FModule mod(ring, phi);
    NewtonPolygon np = np_oracle(mod);
    CHECK(np.breakpoints().front() == LatticePoint{0, 0});
    CHECK(np.breakpoints().back() == LatticePoint{2, 1});

    // height-3 cyclic module: F e1 = e2, F e2 = p e3, F e3 = -p e1
    MatrixW cyc(ring, 3, 3);
    cyc.at(0, 2) = -WittVector::from_int(ring, 3);
    cyc.at(1, 0) = WittVector::one(ring);
    cyc.at(2, 1) = WittVector::from_int(ring, 3);
    FModule mc(ring, cyc);
    CHECK(mc.codim() == 2);
    CHECK(np_oracle(mc) == pure_np(3, 2));
    CHECK(pure_np(3, 2).dual() == pure_np(3, 1));
}

TEST_CASE("slope zero multiplicity") {
    auto ring = WittRing::make(2, 1, 4);
    MatrixW D = MatrixW::identity(ring, 3);
    D.at(1, 1) = WittVector::from_int(ring, 2);
    D.at(2, 2) = WittVector::from_int(ring, 2);
    CHECK(slope_zero_multiplicity(FModule(ring, D)) == 1);
    CHECK(slope_zero_multiplicity(FModule(ring, g11_matrix(ring))) == 0);
    CHECK(slope_zero_multiplicity(FModule(ring, MatrixW::identity(ring, 3))) == 3);
}
