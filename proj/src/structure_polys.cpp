#include "npg/structure_polys.hpp"

#include <mutex>

namespace npg {

namespace {

int64_t checked_add(int64_t a, int64_t b) {
    int64_t r;
    require(!__builtin_add_overflow(a, b, &r), errc::internal_inconsistency,
            "structure polynomial coefficient overflow (add)");
    return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
    int64_t r;
    require(!__builtin_mul_overflow(a, b, &r), errc::internal_inconsistency,
            "structure polynomial coefficient overflow (mul)");
    return r;
}

} // namespace

IntPoly IntPoly::constant(uint32_t nvars, int64_t c) {
    IntPoly p(nvars);
    if (c != 0) p.terms_[Monomial(nvars, 0)] = c;
    return p;
}

IntPoly IntPoly::variable(uint32_t nvars, uint32_t index) {
    IntPoly p(nvars);
    Monomial m(nvars, 0);
    m[index] = 1;
    p.terms_[m] = 1;
    return p;
}

void IntPoly::add_term(const Monomial& m, int64_t c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_[m] = c;
    } else {
        it->second = checked_add(it->second, c);
        if (it->second == 0) terms_.erase(it);
    }
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    IntPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
    IntPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
    IntPoly r(nvars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m(nvars_);
            for (uint32_t i = 0; i < nvars_; ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, checked_mul(ca, cb));
        }
    return r;
}

IntPoly IntPoly::pow(uint64_t e) const {
    IntPoly r = constant(nvars_, 1);
    IntPoly base = *this;
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

IntPoly IntPoly::scaled(int64_t c) const {
    IntPoly r(nvars_);
    if (c == 0) return r;
    for (const auto& [m, coeff] : terms_) r.terms_[m] = checked_mul(coeff, c);
    return r;
}

IntPoly IntPoly::divided_exact(int64_t d) const {
    IntPoly r(nvars_);
    for (const auto& [m, coeff] : terms_) {
        require(coeff % d == 0, errc::internal_inconsistency,
                "ghost recursion division is not exact");
        r.terms_[m] = coeff / d;
    }
    return r;
}

FqElem IntPoly::eval(const std::vector<FqElem>& xs, const std::vector<FqElem>& ys) const {
    const auto field = xs.at(0).field();
    const uint32_t half = nvars_ / 2;
    FqElem acc = FqElem::zero(field);
    for (const auto& [m, coeff] : terms_) {
        int64_t cred = coeff % int64_t(field->p());
        if (cred < 0) cred += int64_t(field->p());
        if (cred == 0) continue;
        FqElem term = FqElem::from_int(field, uint64_t(cred));
        for (uint32_t i = 0; i < nvars_; ++i) {
            if (m[i] == 0) continue;
            const FqElem& base = i < half ? xs[i] : ys[i - half];
            term = term * base.pow(m[i]);
        }
        acc = acc + term;
    }
    return acc;
}

namespace {

WittStructurePolys build_polys(uint64_t p, uint32_t N) {
    WittStructurePolys out;
    out.p = p;
    out.N = N;
    const uint32_t nvars = 2 * N;
    auto x = [&](uint32_t i) { return IntPoly::variable(nvars, i); };
    auto y = [&](uint32_t i) { return IntPoly::variable(nvars, N + i); };

    // ghost polynomial w_n(z_0..z_n) = sum p^i z_i^{p^(n-i)}
    auto ghost_of = [&](uint32_t n, auto var) {
        IntPoly acc = IntPoly::constant(nvars, 0);
        int64_t pi = 1;
        for (uint32_t i = 0; i <= n; ++i) {
            uint64_t e = 1;
            for (uint32_t k = 0; k < n - i; ++k) e *= p;
            acc = acc + var(i).pow(e).scaled(pi);
            pi = checked_mul(pi, int64_t(p));
        }
        return acc;
    };

    for (uint32_t n = 0; n < N; ++n) {
        IntPoly target_sum = ghost_of(n, x) + ghost_of(n, y);
        IntPoly target_prod = ghost_of(n, x) * ghost_of(n, y);
        int64_t pi = 1;
        for (uint32_t i = 0; i < n; ++i) {
            uint64_t e = 1;
            for (uint32_t k = 0; k < n - i; ++k) e *= p;
            target_sum = target_sum - out.sum[i].pow(e).scaled(pi);
            target_prod = target_prod - out.product[i].pow(e).scaled(pi);
            pi = checked_mul(pi, int64_t(p));
        }
        out.sum.push_back(target_sum.divided_exact(pi));
        out.product.push_back(target_prod.divided_exact(pi));
    }
    return out;
}

} // namespace

const WittStructurePolys& witt_structure_polys(uint64_t p, uint32_t N) {
    require(N >= 1, errc::precision_too_low, "N must be >= 1");
    static std::map<std::pair<uint64_t, uint32_t>, WittStructurePolys> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, N);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_polys(p, N)).first;
    return it->second;
}

namespace {

WittVector eval_polys(const WittVector& a, const WittVector& b, bool product) {
    require(a.ring()->same(*b.ring()), errc::ring_mismatch, "structure poly oracle");
    const auto& tables = witt_structure_polys(a.ring()->p(), a.ring()->N());
    auto xs = a.coords();
    auto ys = b.coords();
    std::vector<FqElem> out;
    out.reserve(a.ring()->N());
    for (uint32_t n = 0; n < a.ring()->N(); ++n)
        out.push_back((product ? tables.product[n] : tables.sum[n]).eval(xs, ys));
    return WittVector::from_coords(a.ring(), out);
}

} // namespace

WittVector witt_add_via_polys(const WittVector& a, const WittVector& b) {
    return eval_polys(a, b, false);
}

WittVector witt_mul_via_polys(const WittVector& a, const WittVector& b) {
    return eval_polys(a, b, true);
}

} // namespace npg
