#include "npg/cayley.hpp"

namespace npg {

CHPolynomial ch_poly(const DisplayMatrix& disp) {
    require(is_normal_form(disp), errc::not_normal_form, "ch_poly needs a normal-form display");
    const auto& ring = disp.ring();
    const uint32_t d = disp.d(), h = disp.h();
    CHPolynomial P;
    P.h = h;
    P.coeffs.assign(h, WittVector::zero(ring));
    WittVector p = WittVector::from_int(ring, int64_t(ring->p()));
    // cells (i,j), 1 <= i <= d, d <= j <= h contribute p^{j-d} a_{i,j}^{sigma^{h-j}}
    for (uint32_t i = 1; i <= d; ++i) {
        for (uint32_t j = d; j <= h; ++j) {
            const WittVector& a = disp.a().at(i - 1, j - 1);
            if (a.is_zero()) continue;
            uint32_t e = h + i - j - 1;
            WittVector term = a.sigma_pow(int64_t(h) - int64_t(j));
            for (uint32_t k = d; k < j; ++k) term = term * p;
            P.coeffs[e] = P.coeffs[e] + term;
        }
    }
    return P;
}

bool verify_ch(const DisplayMatrix& disp) {
    CHPolynomial P = ch_poly(disp);
    const auto& ring = disp.ring();
    const uint32_t h = disp.h();
    MatrixW f = f_matrix(disp);
    // iterates F^e e_1 for e = 0..h
    std::vector<WittVector> x(h, WittVector::zero(ring));
    x[0] = WittVector::one(ring);
    std::vector<std::vector<WittVector>> iterates{x};
    for (uint32_t e = 1; e <= h; ++e) iterates.push_back(f.apply_twisted(iterates.back(), 1));
    std::vector<WittVector> rhs(h, WittVector::zero(ring));
    for (uint32_t e = 0; e < h; ++e)
        for (uint32_t i = 0; i < h; ++i) rhs[i] = rhs[i] + P.coeffs[e] * iterates[e][i];
    return iterates[h] == rhs;
}

NewtonPolygon np_fast(const DisplayMatrix& disp) {
    require(disp.ring()->N() >= disp.c() + 2, errc::precision_too_low, "np_fast needs N >= c+2");
    CHPolynomial P = ch_poly(disp);
    const uint32_t h = disp.h();
    // valuation sequence indexed by i = h - e (the polynomial F^h - sum q_e F^e)
    std::vector<std::optional<uint32_t>> vals(h + 1);
    vals[0] = 0;
    for (uint32_t e = 0; e < h; ++e) {
        auto v = P.coeffs[e].valuation();
        vals[h - e] = v ? std::optional<uint32_t>(*v) : std::nullopt;
    }
    return np_of_polynomial(vals);
}

NewtonPolygon np_hull(const DisplayMatrix& disp) {
    require(is_normal_form(disp), errc::not_normal_form, "np_hull needs a normal-form display");
    const uint32_t d = disp.d(), h = disp.h();
    std::vector<LatticePoint> pts{{0, 0}};
    for (uint32_t i = 1; i <= d; ++i)
        for (uint32_t j = d; j <= h; ++j) {
            const WittVector& a = disp.a().at(i - 1, j - 1);
            if (a.is_zero()) continue;
            require(a.is_unit(), errc::entries_not_zero_or_unit,
                    "free entry at (" + std::to_string(i) + "," + std::to_string(j) +
                        ") is neither zero nor a unit");
            pts.push_back({int64_t(j) + 1 - int64_t(i), int64_t(j) - int64_t(d)});
        }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    // lower hull
    std::vector<LatticePoint> hull;
    for (const auto& p : pts) {
        if (!hull.empty() && hull.back().x == p.x) continue; // keep lowest y per x
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            if ((b.y - a.y) * (p.x - a.x) >= (p.y - a.y) * (b.x - a.x))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    return NewtonPolygon::from_breakpoints(hull);
}

} // namespace npg
