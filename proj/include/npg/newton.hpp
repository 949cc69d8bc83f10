#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "npg/errors.hpp"

namespace npg {

/// Reduced fraction with a positive denominator; only needs to hold slopes in
/// [0,1] and small polygon evaluations.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n, int64_t d);
    static Rational of(int64_t n) { return Rational(n, 1); }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    bool is_integer() const { return den == 1; }
    std::string to_string() const;
};

struct LatticePoint {
    int64_t x = 0, y = 0;
    bool operator==(const LatticePoint& o) const { return x == o.x && y == o.y; }
    bool operator<(const LatticePoint& o) const { return x != o.x ? x < o.x : y < o.y; }
};

using LatticePointSet = std::set<LatticePoint>;

/// Isogeny type: multiset of coprime pairs (m, n), slope n/(m+n) with
/// multiplicity m+n each, sorted by slope.
struct IsotypeEntry {
    int64_t m = 0, n = 0;
    int64_t mult = 1;
    Rational slope() const { return Rational(n, m + n); }
    bool operator==(const IsotypeEntry& o) const { return m == o.m && n == o.n && mult == o.mult; }
};
using Isotype = std::vector<IsotypeEntry>;

/// Lower-convex integral polygon from (0,0) to (h,c), canonical form: strictly
/// increasing slopes between consecutive breakpoints, no collinear interior
/// breakpoint, every slope in [0,1].
class NewtonPolygon {
public:
    NewtonPolygon() = default;

    static NewtonPolygon from_slopes(const std::vector<Rational>& slopes);
    static NewtonPolygon from_breakpoints(const std::vector<LatticePoint>& points);
    static NewtonPolygon from_isotype(const Isotype& iso);
    /// Parses both the canonical "(m,n)^mult+..." form and "slopes:a,b,c,...".
    static NewtonPolygon parse(const std::string& text);

    int64_t height() const { return h_; }
    int64_t dim() const { return h_ - c_; }       // d
    int64_t end_height() const { return c_; }     // c
    const std::vector<LatticePoint>& breakpoints() const { return breakpoints_; }

    std::vector<Rational> slopes() const;
    Isotype isotype() const;
    NewtonPolygon dual() const;
    bool symmetric() const;

    /// Value of the piecewise-linear function at integer x in [0,h].
    Rational value_at(int64_t x) const;
    /// (x,y) is on or above the polygon.
    bool point_on_or_above(int64_t x, int64_t y) const;

    bool operator==(const NewtonPolygon& o) const { return breakpoints_ == o.breakpoints_; }
    bool operator!=(const NewtonPolygon& o) const { return !(*this == o); }
    bool operator<(const NewtonPolygon& o) const { return breakpoints_ < o.breakpoints_; }

    std::string to_string() const; // canonical "(m,n)^mult+..." text

private:
    int64_t h_ = 0, c_ = 0;
    std::vector<LatticePoint> breakpoints_;
};

/// beta lying above gamma (the paper's beta < gamma in its reversed order):
/// same endpoints and beta(x) >= gamma(x) everywhere. Throws Incomparable when
/// the endpoints differ.
bool is_above(const NewtonPolygon& beta, const NewtonPolygon& gamma);

/// Diamond(beta) = {(x,y) : y < c, y < x, (x,y) on or above beta}.
LatticePointSet diamond(const NewtonPolygon& beta);
int64_t np_dim(const NewtonPolygon& beta);

/// Delta(xi) = {(x,y) : y < g, y < x <= g, (x,y) on or above xi} for symmetric
/// xi of height 2g.
LatticePointSet delta(const NewtonPolygon& xi);
int64_t np_sdim(const NewtonPolygon& xi);

/// All canonical polygons from (0,0) to (h, h-d), optionally only symmetric
/// ones (requires h = 2d). Sorted by an is_above-compatible linear extension:
/// ascending total lattice height, so the ordinary polygon comes first and the
/// pure one last.
std::vector<NewtonPolygon> enumerate_np(int64_t h, int64_t d, bool symmetric = false);

/// Hasse diagram (cover relation) of is_above on a set of same-endpoint
/// polygons: edge u -> v when v is above u with nothing strictly between.
using CoverRelation = std::vector<std::pair<size_t, size_t>>;
CoverRelation poset_covers(const std::vector<NewtonPolygon>& polygons);

/// All maximal chains of the cover relation, each listed bottom (ordinary) to
/// top (pure).
std::vector<std::vector<size_t>> maximal_chains(const std::vector<NewtonPolygon>& polygons);

NewtonPolygon ordinary_np(int64_t d, int64_t c);
NewtonPolygon pure_np(int64_t h, int64_t c);
NewtonPolygon supersingular_np(int64_t g);

/// DOT rendering of the poset (nodes labeled with canonical strings, edges
/// along covers).
std::string poset_dot(const std::vector<NewtonPolygon>& polygons);

} // namespace npg
