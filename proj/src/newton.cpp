#include "npg/newton.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace npg {

Rational::Rational(int64_t n, int64_t d) {
    require(d != 0, errc::internal_inconsistency, "zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}

bool Rational::operator<(const Rational& o) const { return num * o.den < o.num * den; }

std::string Rational::to_string() const {
    std::ostringstream os;
    os << num;
    if (den != 1) os << "/" << den;
    return os.str();
}

NewtonPolygon NewtonPolygon::from_breakpoints(const std::vector<LatticePoint>& points) {
    require(!points.empty() && points.front() == LatticePoint{0, 0}, errc::not_integral_breakpoints,
            "polygon must start at (0,0)");
    NewtonPolygon np;
    // normalize: drop collinear interior points, check convexity and slope range
    std::vector<LatticePoint> canon;
    canon.push_back(points.front());
    for (size_t i = 1; i < points.size(); ++i) {
        const auto& p = points[i];
        require(p.x > canon.back().x, errc::not_integral_breakpoints, "x must strictly increase");
        while (canon.size() >= 2) {
            // drop middle point if collinear with new one
            const auto& a = canon[canon.size() - 2];
            const auto& b = canon.back();
            if ((b.y - a.y) * (p.x - b.x) == (p.y - b.y) * (b.x - a.x))
                canon.pop_back();
            else
                break;
        }
        canon.push_back(p);
    }
    // convexity: slopes strictly increasing; range [0,1]
    for (size_t i = 1; i < canon.size(); ++i) {
        int64_t dx = canon[i].x - canon[i - 1].x;
        int64_t dy = canon[i].y - canon[i - 1].y;
        require(dy >= 0 && dy <= dx, errc::slope_out_of_range, "slope outside [0,1]");
        if (i >= 2) {
            int64_t pdx = canon[i - 1].x - canon[i - 2].x;
            int64_t pdy = canon[i - 1].y - canon[i - 2].y;
            require(pdy * dx < dy * pdx, errc::not_convex, "slopes must strictly increase");
        }
    }
    np.breakpoints_ = std::move(canon);
    np.h_ = np.breakpoints_.back().x;
    np.c_ = np.breakpoints_.back().y;
    return np;
}

NewtonPolygon NewtonPolygon::from_slopes(const std::vector<Rational>& slopes) {
    for (size_t i = 0; i < slopes.size(); ++i) {
        require(Rational(0, 1) <= slopes[i] && slopes[i] <= Rational(1, 1), errc::slope_out_of_range,
                "slope " + slopes[i].to_string());
        if (i) require(slopes[i - 1] <= slopes[i], errc::not_convex, "slopes must be sorted");
    }
    std::vector<LatticePoint> pts{{0, 0}};
    Rational y(0, 1);
    int64_t x = 0;
    for (size_t i = 0; i < slopes.size(); ++i) {
        y = y + slopes[i];
        ++x;
        bool slope_changes = (i + 1 == slopes.size()) || slopes[i] != slopes[i + 1];
        if (slope_changes) {
            require(y.is_integer(), errc::not_integral_breakpoints,
                    "partial sum at slope change is not integral");
            pts.push_back({x, y.num});
        }
    }
    return from_breakpoints(pts);
}

NewtonPolygon NewtonPolygon::from_isotype(const Isotype& iso) {
    std::vector<Rational> slopes;
    Isotype sorted = iso;
    std::sort(sorted.begin(), sorted.end(), [](const IsotypeEntry& a, const IsotypeEntry& b) {
        return a.slope() < b.slope();
    });
    for (const auto& e : sorted) {
        require(e.m >= 0 && e.n >= 0 && e.mult >= 1 && (e.m > 0 || e.n > 0),
                errc::not_integral_breakpoints, "bad isotype entry");
        require(std::gcd(e.m, e.n) <= 1, errc::not_integral_breakpoints, "isotype pair not coprime");
        for (int64_t k = 0; k < e.mult * (e.m + e.n); ++k) slopes.push_back(e.slope());
    }
    return from_slopes(slopes);
}

std::vector<Rational> NewtonPolygon::slopes() const {
    std::vector<Rational> out;
    for (size_t i = 1; i < breakpoints_.size(); ++i) {
        int64_t dx = breakpoints_[i].x - breakpoints_[i - 1].x;
        int64_t dy = breakpoints_[i].y - breakpoints_[i - 1].y;
        Rational s(dy, dx);
        for (int64_t k = 0; k < dx; ++k) out.push_back(s);
    }
    return out;
}

Isotype NewtonPolygon::isotype() const {
    Isotype iso;
    for (size_t i = 1; i < breakpoints_.size(); ++i) {
        int64_t dx = breakpoints_[i].x - breakpoints_[i - 1].x;
        int64_t dy = breakpoints_[i].y - breakpoints_[i - 1].y;
        int64_t g = std::gcd(dx, dy);
        int64_t n = dy / g, mpn = dx / g; // slope n/(m+n) with m+n = dx/g
        IsotypeEntry e;
        e.n = n;
        e.m = mpn - n;
        e.mult = g;
        iso.push_back(e);
    }
    return iso;
}

NewtonPolygon NewtonPolygon::dual() const {
    Isotype iso = isotype();
    for (auto& e : iso) std::swap(e.m, e.n);
    return from_isotype(iso);
}

bool NewtonPolygon::symmetric() const { return h_ == 2 * c_ && dual() == *this; }

Rational NewtonPolygon::value_at(int64_t x) const {
    require(0 <= x && x <= h_, errc::out_of_parallelogram, "evaluation outside [0,h]");
    for (size_t i = 1; i < breakpoints_.size(); ++i) {
        if (x <= breakpoints_[i].x) {
            const auto& a = breakpoints_[i - 1];
            const auto& b = breakpoints_[i];
            return Rational(a.y * (b.x - a.x) + (b.y - a.y) * (x - a.x), b.x - a.x);
        }
    }
    return Rational(c_, 1); // x == h == 0 edge case
}

bool NewtonPolygon::point_on_or_above(int64_t x, int64_t y) const {
    if (x < 0 || x > h_) return false;
    return value_at(x) <= Rational(y, 1);
}

std::string NewtonPolygon::to_string() const {
    Isotype iso = isotype();
    if (iso.empty()) return "()";
    std::ostringstream os;
    for (size_t i = 0; i < iso.size(); ++i) {
        if (i) os << "+";
        os << "(" << iso[i].m << "," << iso[i].n << ")^" << iso[i].mult;
    }
    return os.str();
}

NewtonPolygon NewtonPolygon::parse(const std::string& text) {
    auto bad = [&](const std::string& why) {
        fail(errc::malformed_file, "cannot parse polygon '" + text + "': " + why);
    };
    if (text.rfind("slopes:", 0) == 0) {
        std::vector<Rational> slopes;
        std::string rest = text.substr(7);
        std::istringstream is(rest);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (tok.empty()) bad("empty slope");
            size_t slash = tok.find('/');
            try {
                if (slash == std::string::npos)
                    slopes.push_back(Rational(std::stoll(tok), 1));
                else
                    slopes.push_back(
                        Rational(std::stoll(tok.substr(0, slash)), std::stoll(tok.substr(slash + 1))));
            } catch (const std::logic_error&) {
                bad("bad slope token '" + tok + "'");
            }
        }
        std::sort(slopes.begin(), slopes.end());
        return from_slopes(slopes);
    }
    // (m,n)^mult+...
    Isotype iso;
    size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] != '(') bad("expected '('");
        size_t close = text.find(')', pos);
        if (close == std::string::npos) bad("missing ')'");
        size_t comma = text.find(',', pos);
        if (comma == std::string::npos || comma > close) bad("missing ','");
        IsotypeEntry e;
        try {
            e.m = std::stoll(text.substr(pos + 1, comma - pos - 1));
            e.n = std::stoll(text.substr(comma + 1, close - comma - 1));
        } catch (const std::logic_error&) {
            bad("bad pair");
        }
        pos = close + 1;
        e.mult = 1;
        if (pos < text.size() && text[pos] == '^') {
            size_t end = text.find('+', pos);
            if (end == std::string::npos) end = text.size();
            try {
                e.mult = std::stoll(text.substr(pos + 1, end - pos - 1));
            } catch (const std::logic_error&) {
                bad("bad multiplicity");
            }
            pos = end;
        }
        if (pos < text.size()) {
            if (text[pos] != '+') bad("expected '+'");
            ++pos;
        }
        iso.push_back(e);
    }
    if (iso.empty()) bad("empty");
    return from_isotype(iso);
}

bool is_above(const NewtonPolygon& beta, const NewtonPolygon& gamma) {
    require(beta.height() == gamma.height() && beta.end_height() == gamma.end_height(),
            errc::incomparable, "different endpoints");
    // integral breakpoints + piecewise linearity: checking integer x suffices
    for (int64_t x = 0; x <= beta.height(); ++x)
        if (beta.value_at(x) < gamma.value_at(x)) return false;
    return true;
}

LatticePointSet diamond(const NewtonPolygon& beta) {
    LatticePointSet out;
    const int64_t c = beta.end_height();
    for (int64_t x = 0; x <= beta.height(); ++x)
        for (int64_t y = 0; y < c; ++y)
            if (y < x && beta.point_on_or_above(x, y)) out.insert({x, y});
    return out;
}

int64_t np_dim(const NewtonPolygon& beta) { return int64_t(diamond(beta).size()); }

LatticePointSet delta(const NewtonPolygon& xi) {
    require(xi.symmetric(), errc::not_symmetric, "delta needs a symmetric polygon");
    const int64_t g = xi.end_height();
    LatticePointSet out;
    for (int64_t x = 1; x <= g; ++x)
        for (int64_t y = 0; y < g; ++y)
            if (y < x && xi.point_on_or_above(x, y)) out.insert({x, y});
    return out;
}

int64_t np_sdim(const NewtonPolygon& xi) { return int64_t(delta(xi).size()); }

namespace {

// all convex integral lattice paths (0,0) -> (h,c) with slopes in [0,1]
void enumerate_rec(int64_t h, int64_t c, std::vector<LatticePoint>& prefix,
                   std::vector<NewtonPolygon>& out) {
    const LatticePoint last = prefix.back(); // by value: prefix reallocates below
    if (last.x == h) {
        if (last.y == c) out.push_back(NewtonPolygon::from_breakpoints(prefix));
        return;
    }
    // previous slope as a fraction (strictly increasing along the path)
    int64_t pnum = -1, pden = 1;
    if (prefix.size() >= 2) {
        const auto& a = prefix[prefix.size() - 2];
        pnum = last.y - a.y;
        pden = last.x - a.x;
    }
    for (int64_t nx = last.x + 1; nx <= h; ++nx)
        for (int64_t ny = last.y; ny <= c; ++ny) {
            int64_t dx = nx - last.x, dy = ny - last.y;
            if (dy > dx) continue;                   // slope <= 1
            if (dy * pden <= pnum * dx) continue;    // strictly increasing slope
            // remaining stretch must be reachable with slopes <= 1 and convexity
            if (c - ny > h - nx) continue;
            if (nx < h && (c - ny) * dx <= dy * (h - nx)) continue; // next slopes must exceed this one
            prefix.push_back({nx, ny});
            enumerate_rec(h, c, prefix, out);
            prefix.pop_back();
        }
}

} // namespace

std::vector<NewtonPolygon> enumerate_np(int64_t h, int64_t d, bool symmetric) {
    require(0 <= d && d <= h, errc::shape_mismatch, "need 0 <= d <= h");
    if (symmetric) require(h == 2 * d, errc::not_symmetric, "symmetric enumeration needs h = 2d");
    const int64_t c = h - d;
    std::vector<NewtonPolygon> out;
    if (h == 0) return out;
    std::vector<LatticePoint> prefix{{0, 0}};
    enumerate_rec(h, c, prefix, out);
    if (symmetric) {
        out.erase(std::remove_if(out.begin(), out.end(),
                                 [](const NewtonPolygon& np) { return !np.symmetric(); }),
                  out.end());
    }
    std::sort(out.begin(), out.end(), [](const NewtonPolygon& a, const NewtonPolygon& b) {
        // ascending total height: an is_above-compatible linear extension
        Rational sa(0, 1), sb(0, 1);
        for (int64_t x = 0; x <= a.height(); ++x) sa = sa + a.value_at(x);
        for (int64_t x = 0; x <= b.height(); ++x) sb = sb + b.value_at(x);
        if (sa != sb) return sa < sb;
        return a.breakpoints() < b.breakpoints();
    });
    return out;
}

CoverRelation poset_covers(const std::vector<NewtonPolygon>& polygons) {
    const size_t n = polygons.size();
    std::vector<std::vector<bool>> above(n, std::vector<bool>(n, false));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (i != j) above[i][j] = is_above(polygons[j], polygons[i]); // j above i
    CoverRelation covers;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (!above[i][j]) continue;
            bool direct = true;
            for (size_t k = 0; k < n && direct; ++k)
                if (k != i && k != j && above[i][k] && above[k][j]) direct = false;
            if (direct) covers.emplace_back(i, j);
        }
    return covers;
}

std::vector<std::vector<size_t>> maximal_chains(const std::vector<NewtonPolygon>& polygons) {
    CoverRelation covers = poset_covers(polygons);
    const size_t n = polygons.size();
    std::vector<std::vector<size_t>> up(n);
    std::vector<bool> has_pred(n, false);
    for (auto [lo, hi] : covers) {
        up[lo].push_back(hi);
        has_pred[hi] = true;
    }
    std::vector<std::vector<size_t>> chains;
    std::vector<size_t> cur;
    std::function<void(size_t)> dfs = [&](size_t v) {
        cur.push_back(v);
        if (up[v].empty()) {
            chains.push_back(cur);
        } else {
            for (size_t w : up[v]) dfs(w);
        }
        cur.pop_back();
    };
    for (size_t v = 0; v < n; ++v)
        if (!has_pred[v]) dfs(v);
    return chains;
}

NewtonPolygon ordinary_np(int64_t d, int64_t c) {
    Isotype iso;
    if (d > 0) iso.push_back({1, 0, d});
    if (c > 0) iso.push_back({0, 1, c});
    require(!iso.empty(), errc::shape_mismatch, "empty polygon");
    return NewtonPolygon::from_isotype(iso);
}

NewtonPolygon pure_np(int64_t h, int64_t c) {
    require(h > 0 && 0 <= c && c <= h, errc::shape_mismatch, "pure polygon parameters");
    int64_t g = std::gcd(h, c);
    IsotypeEntry e;
    e.n = c / g;
    e.m = (h - c) / g;
    e.mult = g;
    return NewtonPolygon::from_isotype({e});
}

NewtonPolygon supersingular_np(int64_t g) { return pure_np(2 * g, g); }

std::string poset_dot(const std::vector<NewtonPolygon>& polygons) {
    CoverRelation covers = poset_covers(polygons);
    std::ostringstream os;
    os << "digraph newton_poset {\n";
    for (size_t i = 0; i < polygons.size(); ++i)
        os << "  n" << i << " [label=\"" << polygons[i].to_string() << "\"];\n";
    for (auto [lo, hi] : covers) os << "  n" << lo << " -> n" << hi << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace npg
