#pragma once

#include "npg/display.hpp"

namespace npg {

/// The polynomial P with F^h X = P X on the first basis vector of a
/// normal-form display: coefficient q_e of F^e aggregates the cells (i,j) with
/// h+i-j-1 = e, each contributing p^{j-d} sigma^{h-j}(a_{i,j}).
struct CHPolynomial {
    uint32_t h = 0;
    std::vector<WittVector> coeffs; // q_0..q_{h-1}
};

CHPolynomial ch_poly(const DisplayMatrix& disp);

/// Checks F^h e_1 = sum q_e F^e e_1 exactly in W_N.
bool verify_ch(const DisplayMatrix& disp);

/// Newton polygon of the display from the polynomial P: hull of
/// {(h - e, val(q_e))} with (0,0) adjoined. Needs N >= c + 2.
NewtonPolygon np_fast(const DisplayMatrix& disp);

/// Cor.-2.8 route: hull of the images of nonzero free cells under
/// (i,j) -> (j+1-i, j-d); requires every free entry zero or a unit.
NewtonPolygon np_hull(const DisplayMatrix& disp);

} // namespace npg
