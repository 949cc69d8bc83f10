#include "npg/semilinear.hpp"

namespace npg {

FModule::FModule(RingPtr r, MatrixW m) : ring(std::move(r)), phi(std::move(m)) {
    require(phi.rows() == phi.cols(), errc::shape_mismatch, "F-matrix must be square");
    require(phi.ring()->same(*ring), errc::ring_mismatch, "F-matrix ring");
    auto v = phi.det().valuation();
    require(v.has_value(), errc::precision_too_low,
            "det(phi) vanishes in W_N: codimension unresolved");
    require(*v <= phi.rows(), errc::shape_mismatch,
            "det valuation exceeds the height: not an F-module matrix");
    c_ = *v;
}

namespace {

// lower convex hull (monotone chain) of (i, v(b_i)); unresolved entries excluded
std::vector<LatticePoint> valuation_hull(const std::vector<std::optional<uint32_t>>& valuations) {
    require(valuations.size() >= 2, errc::shape_mismatch, "need degree >= 1");
    require(valuations[0].has_value() && *valuations[0] == 0, errc::not_integral_breakpoints,
            "leading coefficient must have valuation 0");
    const int64_t h = int64_t(valuations.size()) - 1;
    require(valuations[h].has_value(), errc::endpoint_unresolved,
            "constant-term valuation is >= the truncation length");
    std::vector<LatticePoint> hull;
    for (int64_t i = 0; i <= h; ++i) {
        if (!valuations[i]) continue;
        LatticePoint p{i, int64_t(*valuations[i])};
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            // pop b when it lies on or above the segment a-p
            if ((b.y - a.y) * (p.x - a.x) >= (p.y - a.y) * (b.x - a.x))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    return hull;
}

} // namespace

NewtonPolygon np_of_polynomial(const std::vector<std::optional<uint32_t>>& valuations) {
    return NewtonPolygon::from_breakpoints(valuation_hull(valuations));
}

namespace {

std::vector<std::optional<uint32_t>> charpoly_valuations(const FModule& module, uint32_t twists) {
    MatrixW power = twisted_power(module.phi, twists);
    std::vector<WittVector> cp = power.charpoly(); // ascending c_0..c_h
    const uint32_t h = module.height();
    std::vector<std::optional<uint32_t>> vals(h + 1);
    for (uint32_t i = 0; i <= h; ++i) {
        // b_i = coefficient of lambda^{h-i}
        auto v = cp[h - i].valuation();
        vals[i] = v ? std::optional<uint32_t>(*v) : std::nullopt;
    }
    return vals;
}

} // namespace

NewtonPolygon np_oracle(const FModule& module) {
    const uint32_t m = module.ring->m();
    const uint32_t c = module.codim();
    require(module.ring->N() >= m * c + 2, errc::precision_too_low,
            "oracle needs N >= m*c + 2 = " + std::to_string(m * c + 2));
    auto hull = valuation_hull(charpoly_valuations(module, m));
    // the hull of the m-twisted charpoly has slopes in [0, m]; dividing by m
    // gives the module's polygon, whose breakpoint integrality is guaranteed
    // by Dieudonne-Manin and revalidated by the constructor
    std::vector<Rational> slopes;
    for (size_t i = 1; i < hull.size(); ++i) {
        int64_t dx = hull[i].x - hull[i - 1].x;
        int64_t dy = hull[i].y - hull[i - 1].y;
        for (int64_t k = 0; k < dx; ++k) slopes.push_back(Rational(dy, dx * int64_t(m)));
    }
    NewtonPolygon out = NewtonPolygon::from_slopes(slopes);
    require(out.height() == int64_t(module.height()) && out.end_height() == int64_t(c),
            errc::internal_inconsistency, "oracle polygon has wrong endpoints");
    return out;
}

uint32_t slope_zero_multiplicity(const FModule& module) {
    auto vals = charpoly_valuations(module, module.ring->m());
    uint32_t f = 0;
    for (uint32_t i = 0; i < vals.size(); ++i)
        if (vals[i] && *vals[i] == 0) f = i;
    return f;
}

FModule base_change(const FModule& module, const MatrixW& U) {
    MatrixW phi2 = U.inverse() * module.phi * U.sigma_entrywise(1);
    return FModule(module.ring, std::move(phi2));
}

} // namespace npg
