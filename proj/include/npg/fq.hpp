#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "npg/errors.hpp"

namespace npg {

/// Descriptor of GF(p^m). The modulus is the lexicographically least monic
/// irreducible of degree m over GF(p) (coefficients compared high-degree-first),
/// so a (p, m) pair names exactly one field presentation. For m = 1 the modulus
/// is t, i.e. GF(p) itself.
class FieldDesc {
public:
    static std::shared_ptr<const FieldDesc> make(uint64_t p, uint32_t m);

    uint64_t p() const { return p_; }
    uint32_t m() const { return m_; }
    /// Non-leading coefficients c_0..c_{m-1} of the monic modulus.
    const std::vector<uint64_t>& modulus() const { return modulus_; }
    uint64_t order() const { return order_; } // p^m

    bool same(const FieldDesc& other) const {
        return p_ == other.p_ && m_ == other.m_ && modulus_ == other.modulus_;
    }

    FieldDesc(uint64_t p, uint32_t m, std::vector<uint64_t> modulus);

private:
    uint64_t p_;
    uint32_t m_;
    std::vector<uint64_t> modulus_;
    uint64_t order_;
};

using FieldPtr = std::shared_ptr<const FieldDesc>;

/// Element of GF(p^m): m residues mod p on the basis 1, t, ..., t^{m-1}.
class FqElem {
public:
    FqElem() = default;
    FqElem(FieldPtr field, std::vector<uint64_t> coeffs);

    static FqElem zero(const FieldPtr& field);
    static FqElem one(const FieldPtr& field);
    /// Scalar from the prime field.
    static FqElem from_int(const FieldPtr& field, uint64_t value);

    const FieldPtr& field() const { return field_; }
    const std::vector<uint64_t>& coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool operator==(const FqElem& other) const;
    bool operator!=(const FqElem& other) const { return !(*this == other); }

    FqElem operator+(const FqElem& other) const;
    FqElem operator-(const FqElem& other) const;
    FqElem operator*(const FqElem& other) const;
    FqElem operator-() const;
    FqElem inv() const;
    FqElem pow(uint64_t e) const;
    /// x -> x^p, a ring automorphism of order m.
    FqElem frobenius() const;
    /// Inverse of frobenius (x -> x^{p^{m-1}}).
    FqElem inv_frobenius() const;

    std::string to_string() const;

private:
    void check_same_field(const FqElem& other) const;

    FieldPtr field_;
    std::vector<uint64_t> coeffs_;
};

/// All monic irreducibles of degree m over GF(p) would be found by this scan;
/// returns the lexicographically least one as its non-leading coefficients.
std::vector<uint64_t> least_irreducible(uint64_t p, uint32_t m);

bool is_prime_u64(uint64_t n);

/// Deterministic embedding GF(p^m) -> GF(p^{m'}) for m | m': sends t to the
/// least root of the small modulus in the big field. Identity when m == m'.
class FieldEmbedding {
public:
    FieldEmbedding(FieldPtr from, FieldPtr to);
    const FieldPtr& from() const { return from_; }
    const FieldPtr& to() const { return to_; }
    FqElem operator()(const FqElem& x) const;

private:
    FieldPtr from_, to_;
    std::vector<FqElem> image_powers_; // images of 1, t, ..., t^{m-1}
};

} // namespace npg
