#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "npg/witt.hpp"

namespace npg {

/// Sparse integer multivariate polynomial in x_0..x_{N-1}, y_0..y_{N-1}.
/// Coefficients are checked 64-bit integers; the ghost recursion only needs
/// modest sizes on the supported (p, N) grid and aborts loudly on overflow.
class IntPoly {
public:
    using Monomial = std::vector<uint32_t>; // exponent per variable
    using Terms = std::map<Monomial, int64_t>;

    explicit IntPoly(uint32_t nvars) : nvars_(nvars) {}
    static IntPoly constant(uint32_t nvars, int64_t c);
    static IntPoly variable(uint32_t nvars, uint32_t index);

    uint32_t nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;
    IntPoly pow(uint64_t e) const;
    IntPoly scaled(int64_t c) const;
    /// Exact division by an integer; throws InternalInconsistency when a
    /// coefficient is not divisible (the ghost recursion guarantees it is).
    IntPoly divided_exact(int64_t d) const;

    /// Evaluate with x-variables bound to xs and y-variables to ys, with
    /// coefficients reduced into the field.
    FqElem eval(const std::vector<FqElem>& xs, const std::vector<FqElem>& ys) const;

private:
    void add_term(const Monomial& m, int64_t c);

    uint32_t nvars_;
    Terms terms_;
};

struct WittStructurePolys {
    uint64_t p;
    uint32_t N;
    std::vector<IntPoly> sum;     // S_0..S_{N-1}
    std::vector<IntPoly> product; // P_0..P_{N-1}
};

/// Integer structure polynomials for W_N in characteristic-0 form, memoized
/// per (p, N). Exactness of every division in the recursion is checked.
const WittStructurePolys& witt_structure_polys(uint64_t p, uint32_t N);

/// Test-oracle addition/multiplication evaluating the structure polynomials
/// on the Witt coordinates. Slow; used to cross-check the fast backend.
WittVector witt_add_via_polys(const WittVector& a, const WittVector& b);
WittVector witt_mul_via_polys(const WittVector& a, const WittVector& b);

} // namespace npg
