#pragma once

#include "npg/matrix.hpp"
#include "npg/newton.hpp"

namespace npg {

/// Free W_N-module of rank h with a sigma-linear F given by an h x h matrix.
/// c = valuation of det(phi) must be finite (< N); d = h - c.
struct FModule {
    RingPtr ring;
    MatrixW phi;

    FModule(RingPtr r, MatrixW m);
    uint32_t height() const { return phi.rows(); }
    /// c = valuation(det phi).
    uint32_t codim() const { return c_; }
    uint32_t dim() const { return height() - c_; }

private:
    uint32_t c_;
};

/// p-adic Newton polygon of a monic polynomial from its coefficient valuation
/// sequence: index i = 0..h holds v(b_i) where b_i is the coefficient of
/// lambda^{h-i}; entries >= N mean "unresolved" and are passed as nullopt.
/// The hull starts at (0,0) (v(b_0) must be 0) and ends at (h, v(b_h));
/// EndpointUnresolved if v(b_h) is unresolved.
NewtonPolygon np_of_polynomial(const std::vector<std::optional<uint32_t>>& valuations);

/// Dieudonne-Manin slope oracle: over GF(p^m) the m-fold twisted power of phi
/// is a linear endomorphism whose charpoly's p-adic Newton polygon, scaled by
/// 1/m, is the Newton polygon of the F-module. Needs N >= m*c + 2.
NewtonPolygon np_oracle(const FModule& module);

/// Slope-zero multiplicity of the module (the p-rank side computation): the
/// largest i with v(b_i) = 0 in the twisted-power charpoly. Valid at any N.
uint32_t slope_zero_multiplicity(const FModule& module);

/// phi' = U^{-1} * phi * sigma(U); NotInvertible if U is not.
FModule base_change(const FModule& module, const MatrixW& U);

} // namespace npg
