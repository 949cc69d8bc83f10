#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "npg/fq.hpp"

namespace npg {

/// Truncated Witt ring W_N(GF(p^m)). Internally elements live in the unramified
/// lift O = Z[t]/(p^N, f~(t)) with f~ the integer lift of the field modulus;
/// the Witt coordinate chart (w_0,...,w_{N-1}) <-> sum_i p^i [tau^i(w_i)] is
/// exposed wherever the contract speaks in coordinates. sigma is the unique
/// Frobenius lift, tau its inverse, V(a) = p * tau(a).
class WittRing : public std::enable_shared_from_this<WittRing> {
public:
    static std::shared_ptr<const WittRing> make(const FieldPtr& field, uint32_t N);
    static std::shared_ptr<const WittRing> make(uint64_t p, uint32_t m, uint32_t N);

    const FieldPtr& field() const { return field_; }
    uint64_t p() const { return field_->p(); }
    uint32_t m() const { return field_->m(); }
    uint32_t N() const { return N_; }
    uint64_t pN() const { return pN_; }

    bool same(const WittRing& other) const {
        return N_ == other.N_ && field_->same(*other.field_);
    }

    // O-arithmetic on coefficient vectors (size m, entries mod p^N).
    using Rep = std::vector<uint64_t>;
    Rep add(const Rep& a, const Rep& b) const;
    Rep sub(const Rep& a, const Rep& b) const;
    Rep neg(const Rep& a) const;
    Rep mul(const Rep& a, const Rep& b) const;
    Rep sigma(const Rep& a) const;
    Rep tau(const Rep& a) const;
    Rep teichmuller_rep(const FqElem& x) const;
    FqElem residue(const Rep& a) const;

    WittRing(FieldPtr field, uint32_t N);

private:
    void build_tables();
    Rep reduce_poly(std::vector<uint64_t> prod) const; // mod lifted modulus, coeffs mod p^N

    FieldPtr field_;
    uint32_t N_;
    uint64_t pN_;
    std::vector<Rep> sigma_mat_; // images of basis powers t^j under sigma
    std::vector<Rep> tau_mat_;
};

using RingPtr = std::shared_ptr<const WittRing>;

class WittVector {
public:
    WittVector() = default;
    WittVector(RingPtr ring, WittRing::Rep rep);

    static WittVector zero(const RingPtr& ring);
    static WittVector one(const RingPtr& ring);
    static WittVector from_int(const RingPtr& ring, int64_t value);
    /// Teichmuller lift (x, 0, ..., 0).
    static WittVector teichmuller(const FqElem& x, const RingPtr& ring);
    /// From Witt coordinates (w_0, ..., w_{N-1}).
    static WittVector from_coords(const RingPtr& ring, const std::vector<FqElem>& coords);

    const RingPtr& ring() const { return ring_; }
    const WittRing::Rep& rep() const { return rep_; }

    /// Witt coordinate chart values.
    std::vector<FqElem> coords() const;
    /// Index of the first nonzero Witt coordinate; nullopt means the zero vector
    /// ("valuation infinity" — deliberately distinct from the integer N).
    std::optional<uint32_t> valuation() const;
    bool is_zero() const;
    bool is_unit() const;
    FqElem residue() const { return ring_->residue(rep_); }

    bool operator==(const WittVector& other) const;
    bool operator!=(const WittVector& other) const { return !(*this == other); }

    WittVector operator+(const WittVector& other) const;
    WittVector operator-(const WittVector& other) const;
    WittVector operator*(const WittVector& other) const;
    WittVector operator-() const;
    WittVector inv() const; // NotAUnit unless valuation 0

    WittVector sigma() const;
    WittVector tau() const;
    WittVector verschiebung() const;
    /// Applies sigma k times (k may exceed m; reduced internally).
    WittVector sigma_pow(int64_t k) const;

    /// Exact division by p^k; requires valuation >= k. The top k Witt digits of
    /// the result are unrecoverable and are set to zero: the caller owns the
    /// precision bookkeeping.
    WittVector div_p(uint32_t k = 1) const;

    /// Truncation map W_N -> W_{N'} for N' <= N (a ring homomorphism).
    WittVector truncate(const RingPtr& smaller) const;
    /// Coefficientwise field embedding into a ring with the same p, N and a
    /// larger field.
    WittVector embed(const RingPtr& bigger, const FieldEmbedding& emb) const;

    std::string to_string() const;

private:
    void check_same_ring(const WittVector& other) const;

    RingPtr ring_;
    WittRing::Rep rep_;
};

/// Ghost components for m = 1: ghost_n(a) = sum_i p^i a_i^{p^(n-i)} mod p^N,
/// computed from canonical representatives. Additive/multiplicative mod p^{n+1}
/// at index n.
std::vector<uint64_t> ghost(const WittVector& a);

/// p-adic valuation of the ghost-free representation: same as valuation() but
/// returned as N for the zero vector (internal helper for hull code that wants
/// a number; public contract goes through valuation()).
uint32_t valuation_or_N(const WittVector& a);

} // namespace npg
