#pragma once

#include <functional>
#include <vector>

#include "npg/witt.hpp"

namespace npg {

/// Dense matrix over W_N, row-major. The interesting structure lives in the
/// sigma-twisted operations: a sigma-linear map F with matrix A acts on
/// coordinate vectors as x -> A * sigma(x).
class MatrixW {
public:
    MatrixW() = default;
    MatrixW(RingPtr ring, uint32_t rows, uint32_t cols);
    MatrixW(RingPtr ring, uint32_t rows, uint32_t cols, std::vector<WittVector> entries);

    static MatrixW identity(const RingPtr& ring, uint32_t n);
    static MatrixW zero(const RingPtr& ring, uint32_t rows, uint32_t cols);

    const RingPtr& ring() const { return ring_; }
    uint32_t rows() const { return rows_; }
    uint32_t cols() const { return cols_; }

    const WittVector& at(uint32_t i, uint32_t j) const { return entries_[i * cols_ + j]; }
    WittVector& at(uint32_t i, uint32_t j) { return entries_[i * cols_ + j]; }

    bool operator==(const MatrixW& other) const;
    bool operator!=(const MatrixW& other) const { return !(*this == other); }

    MatrixW operator+(const MatrixW& other) const;
    MatrixW operator-(const MatrixW& other) const;
    MatrixW operator*(const MatrixW& other) const;
    MatrixW operator-() const;
    MatrixW scaled(const WittVector& c) const;
    MatrixW transpose() const;
    /// Entrywise sigma^k (k may be negative: tau powers).
    MatrixW sigma_entrywise(int64_t k = 1) const;

    /// Division-free determinant (constant term of the Berkowitz charpoly).
    WittVector det() const;
    /// Characteristic polynomial of det(lambda*I - A), division-free
    /// (Berkowitz). Returned in ascending order c_0..c_n with c_n = 1.
    std::vector<WittVector> charpoly() const;
    /// Inverse over W_N; requires det a unit (NotInvertible otherwise).
    /// Verified by multiplication before returning.
    MatrixW inverse() const;

    /// Solve A x = b for a column vector b; requires A invertible.
    std::vector<WittVector> solve(const std::vector<WittVector>& b) const;

    MatrixW submatrix(uint32_t r0, uint32_t c0, uint32_t nr, uint32_t nc) const;
    void paste(uint32_t r0, uint32_t c0, const MatrixW& block);

    /// Apply as a sigma^k-twisted map: returns A * sigma^k(x).
    std::vector<WittVector> apply_twisted(const std::vector<WittVector>& x, int64_t k = 1) const;

    /// Residue matrix over the field.
    std::vector<FqElem> residue() const;

    std::string to_string() const;

private:
    RingPtr ring_;
    uint32_t rows_ = 0, cols_ = 0;
    std::vector<WittVector> entries_;
};

/// phi * sigma(phi) * ... * sigma^{n-1}(phi): the matrix of the n-th power of
/// the sigma-linear map with matrix phi.
MatrixW twisted_power(const MatrixW& phi, uint32_t n);

/// Matrix-vector action of the sigma-linear map F: x -> phi * sigma(x),
/// iterated n times.
std::vector<WittVector> twisted_apply_pow(const MatrixW& phi, std::vector<WittVector> x, uint32_t n);

// --- residue-field linear algebra helpers -------------------------------

/// Row-reduce an r x c matrix over GF(p^m) in place; returns the rank.
uint32_t fq_rank(std::vector<FqElem>& mat, uint32_t rows, uint32_t cols);

/// Solve the F_p-linear system given by an arbitrary F_p-linear map probe:
/// domain dimension dn, codomain dimension cd over F_p. Returns a solution of
/// L(x) = target if one exists.
struct FpLinearSolver {
    uint32_t domain_dim;
    std::vector<std::vector<uint8_t>> columns; // images of basis vectors, F_p coords flattened
    uint64_t p;

    /// Gaussian elimination; returns x with L(x) = target, or empty optional.
    std::optional<std::vector<uint8_t>> solve(const std::vector<uint8_t>& target) const;
};

} // namespace npg
