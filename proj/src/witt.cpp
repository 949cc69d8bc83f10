#include "npg/witt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace npg {

namespace {

constexpr uint64_t kMaxModulusBits = 62;

uint64_t pow_u64(uint64_t base, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= base;
    return r;
}

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t mod) {
    return uint64_t((unsigned __int128)a * b % mod);
}

uint64_t powmod_u64(uint64_t base, uint64_t e, uint64_t mod) {
    uint64_t r = 1 % mod;
    base %= mod;
    while (e) {
        if (e & 1) r = mulmod(r, base, mod);
        base = mulmod(base, base, mod);
        e >>= 1;
    }
    return r;
}

} // namespace

WittRing::WittRing(FieldPtr field, uint32_t N) : field_(std::move(field)), N_(N) {
    require(N >= 1, errc::precision_too_low, "truncation length must be >= 1");
    double bits = N * std::log2(double(field_->p()));
    require(bits <= kMaxModulusBits, errc::precision_too_low,
            "p^N exceeds the 62-bit coefficient bound");
    pN_ = pow_u64(field_->p(), N);
    build_tables();
}

std::shared_ptr<const WittRing> WittRing::make(const FieldPtr& field, uint32_t N) {
    static std::map<std::tuple<uint64_t, uint32_t, uint32_t>, std::shared_ptr<const WittRing>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(field->p(), field->m(), N);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto ring = std::make_shared<const WittRing>(field, N);
    cache[key] = ring;
    return ring;
}

std::shared_ptr<const WittRing> WittRing::make(uint64_t p, uint32_t m, uint32_t N) {
    return make(FieldDesc::make(p, m), N);
}

WittRing::Rep WittRing::reduce_poly(std::vector<uint64_t> prod) const {
    const uint32_t m = field_->m();
    // modulus lift: t^m = -sum c_i t^i mod p^N
    while (prod.size() > m) {
        uint64_t lead = prod.back();
        prod.pop_back();
        if (lead == 0) continue;
        size_t shift = prod.size() - m;
        for (uint32_t i = 0; i < m; ++i) {
            uint64_t sub = mulmod(lead, field_->modulus()[i] % pN_, pN_);
            uint64_t& c = prod[shift + i];
            c = (c + pN_ - sub) % pN_;
        }
    }
    prod.resize(m, 0);
    return prod;
}

WittRing::Rep WittRing::add(const Rep& a, const Rep& b) const {
    Rep r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) % pN_;
    return r;
}

WittRing::Rep WittRing::sub(const Rep& a, const Rep& b) const {
    Rep r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + pN_ - b[i]) % pN_;
    return r;
}

WittRing::Rep WittRing::neg(const Rep& a) const {
    Rep r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = (pN_ - a[i]) % pN_;
    return r;
}

WittRing::Rep WittRing::mul(const Rep& a, const Rep& b) const {
    const uint32_t m = field_->m();
    std::vector<uint64_t> prod(2 * m - 1, 0);
    for (uint32_t i = 0; i < m; ++i) {
        if (a[i] == 0) continue;
        for (uint32_t j = 0; j < m; ++j)
            prod[i + j] = (prod[i + j] + mulmod(a[i], b[j], pN_)) % pN_;
    }
    return reduce_poly(std::move(prod));
}

FqElem WittRing::residue(const Rep& a) const {
    std::vector<uint64_t> c(field_->m());
    for (uint32_t i = 0; i < field_->m(); ++i) c[i] = a[i] % field_->p();
    return FqElem(field_, std::move(c));
}

WittRing::Rep WittRing::teichmuller_rep(const FqElem& x) const {
    // The unique lift fixed by z -> z^{p^m}: iterate the q-power map, which
    // gains one p-adic digit per step.
    const uint32_t m = field_->m();
    Rep z(m, 0);
    for (uint32_t i = 0; i < m; ++i) z[i] = x.coeffs()[i] % pN_;
    auto pth_power = [&](Rep v) {
        Rep acc = std::move(v);
        Rep r(m, 0);
        r[0] = 1;
        uint64_t e = field_->p();
        while (e) {
            if (e & 1) r = mul(r, acc);
            acc = mul(acc, acc);
            e >>= 1;
        }
        return r;
    };
    for (uint32_t step = 0; step + 1 < N_; ++step)
        for (uint32_t i = 0; i < m; ++i) z = pth_power(std::move(z));
    return z;
}

void WittRing::build_tables() {
    const uint32_t m = field_->m();
    sigma_mat_.assign(m, Rep(m, 0));
    tau_mat_.assign(m, Rep(m, 0));
    if (m == 1) {
        sigma_mat_[0][0] = 1;
        tau_mat_[0][0] = 1;
        return;
    }
    // sigma(t) = the root of the lifted modulus congruent to t^p mod p,
    // found by Newton iteration (f separable mod p so f'(root) is a unit).
    auto eval = [&](const Rep& z) {
        Rep acc(m, 0);
        Rep pw(m, 0);
        pw[0] = 1;
        for (uint32_t i = 0; i < m; ++i) {
            for (uint32_t j = 0; j < m; ++j)
                acc[j] = (acc[j] + mulmod(field_->modulus()[i] % pN_, pw[j], pN_)) % pN_;
            pw = mul(pw, z);
        }
        for (uint32_t j = 0; j < m; ++j) acc[j] = (acc[j] + pw[j]) % pN_;
        return acc;
    };
    auto eval_deriv = [&](const Rep& z) {
        Rep acc(m, 0);
        Rep pw(m, 0);
        pw[0] = 1;
        for (uint32_t i = 1; i <= m; ++i) {
            uint64_t coeff = (i == m) ? 1 : field_->modulus()[i] % pN_;
            uint64_t ci = mulmod(coeff, i % pN_, pN_);
            for (uint32_t j = 0; j < m; ++j) acc[j] = (acc[j] + mulmod(ci, pw[j], pN_)) % pN_;
            if (i < m) pw = mul(pw, z);
        }
        return acc;
    };
    auto inv_unit = [&](Rep a) {
        // Hensel lift of the residue inverse: x -> x(2 - a x).
        FqElem r0 = residue(a).inv();
        Rep x(m, 0);
        for (uint32_t i = 0; i < m; ++i) x[i] = r0.coeffs()[i];
        for (uint32_t it = 0; it < N_; ++it) {
            Rep ax = mul(a, x);
            Rep two_minus(m, 0);
            two_minus[0] = 2 % pN_;
            two_minus = sub(two_minus, ax);
            x = mul(x, two_minus);
        }
        return x;
    };

    auto newton_root = [&](Rep z) {
        for (uint32_t it = 0; it < N_ + 2; ++it) {
            Rep f = eval(z);
            Rep df = eval_deriv(z);
            Rep step = mul(f, inv_unit(df));
            z = sub(z, step);
        }
        return z;
    };

    // start from t^p mod (p, f)
    Rep t(m, 0);
    t[1] = 1;
    Rep tp(m, 0);
    tp[0] = 1;
    for (uint64_t i = 0; i < field_->p(); ++i) tp = mul(tp, t);
    Rep sigma_t = newton_root(tp);

    // tau(t): root congruent to t^{p^{m-1}} mod p
    Rep tq = t;
    for (uint32_t i = 0; i + 1 < m; ++i) {
        Rep r(m, 0);
        r[0] = 1;
        for (uint64_t e = 0; e < field_->p(); ++e) r = mul(r, tq);
        tq = r;
    }
    Rep tau_t = newton_root(tq);

    auto fill = [&](std::vector<Rep>& mat, const Rep& image_t) {
        Rep pw(m, 0);
        pw[0] = 1;
        for (uint32_t j = 0; j < m; ++j) {
            mat[j] = pw;
            pw = mul(pw, image_t);
        }
    };
    fill(sigma_mat_, sigma_t);
    fill(tau_mat_, tau_t);
}

WittRing::Rep WittRing::sigma(const Rep& a) const {
    const uint32_t m = field_->m();
    if (m == 1) return a;
    Rep r(m, 0);
    for (uint32_t j = 0; j < m; ++j) {
        if (a[j] == 0) continue;
        for (uint32_t i = 0; i < m; ++i)
            r[i] = (r[i] + mulmod(a[j], sigma_mat_[j][i], pN_)) % pN_;
    }
    return r;
}

WittRing::Rep WittRing::tau(const Rep& a) const {
    const uint32_t m = field_->m();
    if (m == 1) return a;
    Rep r(m, 0);
    for (uint32_t j = 0; j < m; ++j) {
        if (a[j] == 0) continue;
        for (uint32_t i = 0; i < m; ++i)
            r[i] = (r[i] + mulmod(a[j], tau_mat_[j][i], pN_)) % pN_;
    }
    return r;
}

WittVector::WittVector(RingPtr ring, WittRing::Rep rep) : ring_(std::move(ring)), rep_(std::move(rep)) {
    require(rep_.size() == ring_->m(), errc::ring_mismatch, "representation size");
}

WittVector WittVector::zero(const RingPtr& ring) {
    return WittVector(ring, WittRing::Rep(ring->m(), 0));
}

WittVector WittVector::one(const RingPtr& ring) { return from_int(ring, 1); }

WittVector WittVector::from_int(const RingPtr& ring, int64_t value) {
    WittRing::Rep r(ring->m(), 0);
    int64_t v = value % int64_t(ring->pN());
    if (v < 0) v += int64_t(ring->pN());
    r[0] = uint64_t(v);
    return WittVector(ring, std::move(r));
}

WittVector WittVector::teichmuller(const FqElem& x, const RingPtr& ring) {
    require(x.field()->same(*ring->field()), errc::field_mismatch, "teichmuller");
    return WittVector(ring, ring->teichmuller_rep(x));
}

WittVector WittVector::from_coords(const RingPtr& ring, const std::vector<FqElem>& coords) {
    require(coords.size() == ring->N(), errc::ring_mismatch, "coordinate count");
    WittRing::Rep acc(ring->m(), 0);
    uint64_t pk = 1;
    for (uint32_t i = 0; i < ring->N(); ++i) {
        require(coords[i].field()->same(*ring->field()), errc::field_mismatch, "coordinate field");
        FqElem digit = coords[i];
        for (uint32_t k = 0; k < i; ++k) digit = digit.inv_frobenius(); // tau^i
        WittRing::Rep t = ring->teichmuller_rep(digit);
        for (uint32_t j = 0; j < ring->m(); ++j)
            acc[j] = (acc[j] + mulmod(t[j], pk, ring->pN())) % ring->pN();
        pk *= ring->p();
    }
    return WittVector(ring, std::move(acc));
}

std::vector<FqElem> WittVector::coords() const {
    std::vector<FqElem> out;
    out.reserve(ring_->N());
    WittRing::Rep z = rep_;
    uint64_t pk = ring_->pN();
    for (uint32_t i = 0; i < ring_->N(); ++i) {
        FqElem digit = ring_->residue(z);
        WittRing::Rep t = ring_->teichmuller_rep(digit);
        for (uint32_t j = 0; j < ring_->m(); ++j) {
            uint64_t diff = (z[j] + ring_->pN() - t[j]) % ring_->pN();
            z[j] = diff / ring_->p(); // exact: z - [digit] is divisible by p
        }
        pk /= ring_->p();
        FqElem w = digit;
        for (uint32_t k = 0; k < i; ++k) w = w.frobenius(); // sigma^i
        out.push_back(w);
    }
    return out;
}

std::optional<uint32_t> WittVector::valuation() const {
    // val = largest k with p^k dividing every O-coefficient.
    if (std::all_of(rep_.begin(), rep_.end(), [](uint64_t c) { return c == 0; }))
        return std::nullopt;
    uint32_t v = 0;
    uint64_t pk = ring_->p();
    for (; v < ring_->N(); ++v) {
        bool divisible = true;
        for (uint64_t c : rep_)
            if (c % pk != 0) {
                divisible = false;
                break;
            }
        if (!divisible) break;
        pk *= ring_->p();
    }
    return v;
}

uint32_t valuation_or_N(const WittVector& a) {
    auto v = a.valuation();
    return v ? *v : a.ring()->N();
}

bool WittVector::is_zero() const {
    return std::all_of(rep_.begin(), rep_.end(), [](uint64_t c) { return c == 0; });
}

bool WittVector::is_unit() const {
    auto v = valuation();
    return v && *v == 0;
}

bool WittVector::operator==(const WittVector& other) const {
    return ring_->same(*other.ring_) && rep_ == other.rep_;
}

void WittVector::check_same_ring(const WittVector& other) const {
    require(ring_->same(*other.ring_), errc::ring_mismatch, "operands in different Witt rings");
}

WittVector WittVector::operator+(const WittVector& other) const {
    check_same_ring(other);
    return WittVector(ring_, ring_->add(rep_, other.rep_));
}

WittVector WittVector::operator-(const WittVector& other) const {
    check_same_ring(other);
    return WittVector(ring_, ring_->sub(rep_, other.rep_));
}

WittVector WittVector::operator*(const WittVector& other) const {
    check_same_ring(other);
    return WittVector(ring_, ring_->mul(rep_, other.rep_));
}

WittVector WittVector::operator-() const { return WittVector(ring_, ring_->neg(rep_)); }

WittVector WittVector::inv() const {
    require(is_unit(), errc::not_a_unit, "inverse requires valuation 0");
    // Hensel from the residue inverse.
    FqElem r0 = residue().inv();
    WittVector x = teichmuller(r0, ring_);
    for (uint32_t it = 0; it < ring_->N(); ++it) {
        WittVector ax = (*this) * x;
        x = x * (from_int(ring_, 2) - ax);
    }
    return x;
}

WittVector WittVector::sigma() const { return WittVector(ring_, ring_->sigma(rep_)); }

WittVector WittVector::tau() const { return WittVector(ring_, ring_->tau(rep_)); }

WittVector WittVector::sigma_pow(int64_t k) const {
    int64_t m = ring_->m();
    int64_t r = ((k % m) + m) % m;
    WittVector out = *this;
    for (int64_t i = 0; i < r; ++i) out = out.sigma();
    return out;
}

WittVector WittVector::verschiebung() const {
    WittVector t = tau();
    WittRing::Rep r(ring_->m());
    for (uint32_t j = 0; j < ring_->m(); ++j) r[j] = mulmod(t.rep_[j], ring_->p(), ring_->pN());
    return WittVector(ring_, std::move(r));
}

WittVector WittVector::div_p(uint32_t k) const {
    uint64_t pk = pow_u64(ring_->p(), k);
    WittRing::Rep r(ring_->m());
    for (uint32_t j = 0; j < ring_->m(); ++j) {
        require(rep_[j] % pk == 0, errc::not_local_local,
                "division by p^" + std::to_string(k) + " is not exact");
        r[j] = rep_[j] / pk;
    }
    return WittVector(ring_, std::move(r));
}

WittVector WittVector::truncate(const RingPtr& smaller) const {
    require(smaller->field()->same(*ring_->field()) && smaller->N() <= ring_->N(),
            errc::ring_mismatch, "truncate target");
    WittRing::Rep r(ring_->m());
    for (uint32_t j = 0; j < ring_->m(); ++j) r[j] = rep_[j] % smaller->pN();
    return WittVector(smaller, std::move(r));
}

WittVector WittVector::embed(const RingPtr& bigger, const FieldEmbedding& emb) const {
    require(bigger->p() == ring_->p() && bigger->N() == ring_->N(), errc::ring_mismatch,
            "embedding target must share p and N");
    auto cs = coords();
    std::vector<FqElem> mapped;
    mapped.reserve(cs.size());
    for (const auto& c : cs) mapped.push_back(emb(c));
    return from_coords(bigger, mapped);
}

std::string WittVector::to_string() const {
    std::ostringstream os;
    os << "(";
    auto cs = coords();
    for (size_t i = 0; i < cs.size(); ++i) {
        if (i) os << ",";
        os << cs[i].to_string();
    }
    os << ")";
    return os.str();
}

std::vector<uint64_t> ghost(const WittVector& a) {
    require(a.ring()->m() == 1, errc::wrong_field, "ghost components need m = 1");
    const uint64_t p = a.ring()->p();
    const uint64_t pN = a.ring()->pN();
    auto cs = a.coords();
    std::vector<uint64_t> out(a.ring()->N());
    for (uint32_t n = 0; n < a.ring()->N(); ++n) {
        uint64_t acc = 0;
        uint64_t pi = 1;
        for (uint32_t i = 0; i <= n; ++i) {
            uint64_t xi = cs[i].coeffs()[0];
            uint64_t e = pow_u64(p, n - i);
            acc = (acc + mulmod(pi % pN, powmod_u64(xi, e, pN), pN)) % pN;
            pi *= p;
        }
        out[n] = acc;
    }
    return out;
}

} // namespace npg
