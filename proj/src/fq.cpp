#include "npg/fq.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace npg {

const char* errc_name(errc c) {
    switch (c) {
        case errc::not_prime: return "NotPrime";
        case errc::degree_too_large: return "DegreeTooLarge";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::field_mismatch: return "FieldMismatch";
        case errc::not_a_unit: return "NotAUnit";
        case errc::ring_mismatch: return "RingMismatch";
        case errc::wrong_field: return "WrongField";
        case errc::shape_mismatch: return "ShapeMismatch";
        case errc::not_invertible: return "NotInvertible";
        case errc::precision_too_low: return "PrecisionTooLow";
        case errc::endpoint_unresolved: return "EndpointUnresolved";
        case errc::incomparable: return "Incomparable";
        case errc::not_symmetric: return "NotSymmetric";
        case errc::not_integral_breakpoints: return "NotIntegralBreakpoints";
        case errc::not_convex: return "NotConvex";
        case errc::slope_out_of_range: return "SlopeOutOfRange";
        case errc::not_normal_form: return "NotNormalForm";
        case errc::entries_not_zero_or_unit: return "EntriesNotZeroOrUnit";
        case errc::not_cyclic: return "NotCyclic";
        case errc::not_local_local: return "NotLocalLocal";
        case errc::field_too_small: return "FieldTooSmall";
        case errc::stage_validation_failed: return "StageValidationFailed";
        case errc::degenerate_dimensions: return "DegenerateDimensions";
        case errc::out_of_parallelogram: return "OutOfParallelogram";
        case errc::symmetry_violated: return "SymmetryViolated";
        case errc::field_embedding_failed: return "FieldEmbeddingFailed";
        case errc::precondition_not_above: return "PreconditionNotAbove";
        case errc::realization_exhausted: return "RealizationExhausted";
        case errc::chain_broken: return "ChainBroken";
        case errc::internal_inconsistency: return "InternalInconsistency";
        case errc::schema_version_mismatch: return "SchemaVersionMismatch";
        case errc::malformed_file: return "MalformedFile";
    }
    return "UnknownError";
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

constexpr uint64_t kMaxFieldOrder = 1u << 20;

// Dense polynomial arithmetic over GF(p), coefficients in [0, p).
using Poly = std::vector<uint64_t>;

Poly poly_mod(Poly a, const Poly& mod, uint64_t p) {
    // mod is monic of degree m given by its full coefficient vector (size m+1).
    const size_t m = mod.size() - 1;
    while (a.size() > m) {
        uint64_t lead = a.back();
        size_t shift = a.size() - 1 - m;
        if (lead != 0) {
            for (size_t i = 0; i <= m; ++i) {
                uint64_t sub = (lead * mod[i]) % p;
                uint64_t& c = a[shift + i];
                c = (c + p - sub) % p;
            }
        }
        a.pop_back();
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& mod, uint64_t p) {
    Poly prod(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
    return poly_mod(std::move(prod), mod, p);
}

Poly poly_powmod(Poly base, uint64_t e, const Poly& mod, uint64_t p) {
    Poly result{1};
    while (e) {
        if (e & 1) result = poly_mulmod(result, base, mod, p);
        base = poly_mulmod(base, base, mod, p);
        e >>= 1;
    }
    return result;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
    auto normalize = [&](Poly& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    normalize(a);
    normalize(b);
    while (!b.empty()) {
        // a mod b with b made monic on the fly
        uint64_t inv_lead = 1;
        {
            // Fermat inverse mod p
            uint64_t base = b.back() % p, e = p - 2, r = 1;
            while (e) {
                if (e & 1) r = (r * base) % p;
                base = (base * base) % p;
                e >>= 1;
            }
            inv_lead = r;
        }
        Poly rem = a;
        while (rem.size() >= b.size()) {
            uint64_t lead = (rem.back() * inv_lead) % p;
            size_t shift = rem.size() - b.size();
            if (lead != 0) {
                for (size_t i = 0; i < b.size(); ++i) {
                    uint64_t sub = (lead * b[i]) % p;
                    uint64_t& c = rem[shift + i];
                    c = (c + p - sub) % p;
                }
            }
            rem.pop_back();
            normalize(rem);
            if (rem.empty()) break;
        }
        a = std::move(b);
        b = std::move(rem);
    }
    return a;
}

// Rabin test: f monic of degree m is irreducible over GF(p) iff x^{p^m} = x mod f
// and gcd(x^{p^{m/q}} - x, f) = 1 for every prime divisor q of m.
bool is_irreducible(const Poly& full, uint64_t p) {
    const size_t m = full.size() - 1;
    if (m == 1) return true;
    Poly x{0, 1};
    // x^(p^k) mod f computed by k successive p-th powers
    auto frob_iterate = [&](size_t k) {
        Poly r = x;
        for (size_t i = 0; i < k; ++i) r = poly_powmod(r, p, full, p);
        return r;
    };
    Poly xq = frob_iterate(m);
    Poly diff = xq;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    while (!diff.empty() && diff.back() == 0) diff.pop_back();
    if (!diff.empty()) return false;
    std::vector<size_t> prime_divs;
    size_t mm = m;
    for (size_t q = 2; q * q <= mm; ++q)
        if (mm % q == 0) {
            prime_divs.push_back(q);
            while (mm % q == 0) mm /= q;
        }
    if (mm > 1) prime_divs.push_back(mm);
    for (size_t q : prime_divs) {
        Poly xk = frob_iterate(m / q);
        Poly d = xk;
        d.resize(std::max<size_t>(d.size(), 2), 0);
        d[1] = (d[1] + p - 1) % p;
        Poly g = poly_gcd(d, full, p);
        if (!(g.size() == 1 && g[0] != 0)) return false;
    }
    return true;
}

} // namespace

std::vector<uint64_t> least_irreducible(uint64_t p, uint32_t m) {
    if (m == 1) return {0}; // modulus t
    // Enumerate non-leading coefficient tuples by increasing sum c_i p^i.
    uint64_t count = 1;
    for (uint32_t i = 0; i < m; ++i) count *= p; // p^m candidates
    for (uint64_t code = 0; code < count; ++code) {
        std::vector<uint64_t> coeffs(m);
        uint64_t c = code;
        for (uint32_t i = 0; i < m; ++i) {
            coeffs[i] = c % p;
            c /= p;
        }
        Poly full = coeffs;
        full.push_back(1);
        if (is_irreducible(full, p)) return coeffs;
    }
    fail(errc::internal_inconsistency, "no irreducible polynomial found");
}

FieldDesc::FieldDesc(uint64_t p, uint32_t m, std::vector<uint64_t> modulus)
    : p_(p), m_(m), modulus_(std::move(modulus)) {
    order_ = 1;
    for (uint32_t i = 0; i < m_; ++i) order_ *= p_;
}

std::shared_ptr<const FieldDesc> FieldDesc::make(uint64_t p, uint32_t m) {
    require(is_prime_u64(p), errc::not_prime, "p = " + std::to_string(p));
    require(m >= 1, errc::degree_too_large, "m must be >= 1");
    double bits = m * std::log2(double(p));
    require(bits <= std::log2(double(kMaxFieldOrder)) + 1e-9, errc::degree_too_large,
            "p^m exceeds configured bound 2^20");

    static std::map<std::pair<uint64_t, uint32_t>, std::shared_ptr<const FieldDesc>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto desc = std::make_shared<const FieldDesc>(p, m, least_irreducible(p, m));
    cache[key] = desc;
    return desc;
}

FqElem::FqElem(FieldPtr field, std::vector<uint64_t> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    require(coeffs_.size() == field_->m(), errc::field_mismatch, "coefficient count");
    for (auto& c : coeffs_) c %= field_->p();
}

FqElem FqElem::zero(const FieldPtr& field) {
    return FqElem(field, std::vector<uint64_t>(field->m(), 0));
}

FqElem FqElem::one(const FieldPtr& field) { return from_int(field, 1); }

FqElem FqElem::from_int(const FieldPtr& field, uint64_t value) {
    std::vector<uint64_t> c(field->m(), 0);
    c[0] = value % field->p();
    return FqElem(field, std::move(c));
}

bool FqElem::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](uint64_t c) { return c == 0; });
}

bool FqElem::operator==(const FqElem& other) const {
    return field_->same(*other.field_) && coeffs_ == other.coeffs_;
}

void FqElem::check_same_field(const FqElem& other) const {
    require(field_->same(*other.field_), errc::field_mismatch, "operands in different fields");
}

FqElem FqElem::operator+(const FqElem& other) const {
    check_same_field(other);
    std::vector<uint64_t> c(coeffs_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = (coeffs_[i] + other.coeffs_[i]) % field_->p();
    return FqElem(field_, std::move(c));
}

FqElem FqElem::operator-(const FqElem& other) const { return *this + (-other); }

FqElem FqElem::operator-() const {
    std::vector<uint64_t> c(coeffs_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = (field_->p() - coeffs_[i]) % field_->p();
    return FqElem(field_, std::move(c));
}

FqElem FqElem::operator*(const FqElem& other) const {
    check_same_field(other);
    const uint64_t p = field_->p();
    Poly mod = field_->modulus();
    mod.push_back(1);
    Poly prod = poly_mulmod(coeffs_, other.coeffs_, mod, p);
    prod.resize(field_->m(), 0);
    return FqElem(field_, std::move(prod));
}

FqElem FqElem::pow(uint64_t e) const {
    FqElem result = one(field_);
    FqElem base = *this;
    while (e) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

FqElem FqElem::inv() const {
    require(!is_zero(), errc::division_by_zero, "inverse of zero");
    return pow(field_->order() - 2);
}

FqElem FqElem::frobenius() const { return pow(field_->p()); }

FqElem FqElem::inv_frobenius() const {
    uint64_t e = 1;
    for (uint32_t i = 0; i + 1 < field_->m(); ++i) e *= field_->p();
    return pow(e); // x^{p^{m-1}}
}

std::string FqElem::to_string() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << ",";
        os << coeffs_[i];
    }
    os << "]";
    return os.str();
}

FieldEmbedding::FieldEmbedding(FieldPtr from, FieldPtr to) : from_(std::move(from)), to_(std::move(to)) {
    require(from_->p() == to_->p(), errc::field_embedding_failed, "different characteristics");
    require(to_->m() % from_->m() == 0, errc::field_embedding_failed,
            "degree " + std::to_string(from_->m()) + " does not divide " + std::to_string(to_->m()));
    const uint32_t m = from_->m();
    FqElem root = FqElem::zero(to_);
    if (from_->same(*to_)) {
        std::vector<uint64_t> t(to_->m(), 0);
        if (to_->m() > 1) t[1] = 1; // t itself; for m = 1 the modulus is t so t = 0
        root = FqElem(to_, std::move(t));
    } else {
        // least root of the small modulus in the big field, by exhaustive scan
        bool found = false;
        for (uint64_t code = 0; code < to_->order() && !found; ++code) {
            std::vector<uint64_t> c(to_->m());
            uint64_t v = code;
            for (uint32_t i = 0; i < to_->m(); ++i) {
                c[i] = v % to_->p();
                v /= to_->p();
            }
            FqElem cand(to_, std::move(c));
            FqElem acc = FqElem::zero(to_);
            FqElem pw = FqElem::one(to_);
            for (uint32_t i = 0; i < m; ++i) {
                acc = acc + pw * FqElem::from_int(to_, from_->modulus()[i]);
                pw = pw * cand;
            }
            acc = acc + pw; // monic leading term
            if (acc.is_zero()) {
                root = cand;
                found = true;
            }
        }
        require(found, errc::field_embedding_failed, "modulus has no root in target field");
    }
    image_powers_.clear();
    FqElem pw = FqElem::one(to_);
    for (uint32_t i = 0; i < m; ++i) {
        image_powers_.push_back(pw);
        pw = pw * root;
    }
}

FqElem FieldEmbedding::operator()(const FqElem& x) const {
    require(x.field()->same(*from_), errc::field_mismatch, "embedding applied to wrong field");
    FqElem acc = FqElem::zero(to_);
    for (uint32_t i = 0; i < from_->m(); ++i)
        acc = acc + image_powers_[i] * FqElem::from_int(to_, x.coeffs()[i]);
    return acc;
}

} // namespace npg
