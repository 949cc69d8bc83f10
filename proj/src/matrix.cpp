#include "npg/matrix.hpp"

#include <sstream>

namespace npg {

MatrixW::MatrixW(RingPtr ring, uint32_t rows, uint32_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols),
      entries_(size_t(rows) * cols, WittVector::zero(ring_)) {}

MatrixW::MatrixW(RingPtr ring, uint32_t rows, uint32_t cols, std::vector<WittVector> entries)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    require(entries_.size() == size_t(rows) * cols, errc::shape_mismatch, "entry count");
    for (const auto& e : entries_)
        require(e.ring()->same(*ring_), errc::ring_mismatch, "matrix entry ring");
}

MatrixW MatrixW::identity(const RingPtr& ring, uint32_t n) {
    MatrixW m(ring, n, n);
    for (uint32_t i = 0; i < n; ++i) m.at(i, i) = WittVector::one(ring);
    return m;
}

MatrixW MatrixW::zero(const RingPtr& ring, uint32_t rows, uint32_t cols) {
    return MatrixW(ring, rows, cols);
}

bool MatrixW::operator==(const MatrixW& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && entries_ == other.entries_;
}

MatrixW MatrixW::operator+(const MatrixW& other) const {
    require(rows_ == other.rows_ && cols_ == other.cols_, errc::shape_mismatch, "add");
    MatrixW r(ring_, rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = entries_[i] + other.entries_[i];
    return r;
}

MatrixW MatrixW::operator-(const MatrixW& other) const {
    require(rows_ == other.rows_ && cols_ == other.cols_, errc::shape_mismatch, "sub");
    MatrixW r(ring_, rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = entries_[i] - other.entries_[i];
    return r;
}

MatrixW MatrixW::operator-() const {
    MatrixW r(ring_, rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = -entries_[i];
    return r;
}

MatrixW MatrixW::operator*(const MatrixW& other) const {
    require(cols_ == other.rows_, errc::shape_mismatch, "mul");
    MatrixW r(ring_, rows_, other.cols_);
    for (uint32_t i = 0; i < rows_; ++i)
        for (uint32_t k = 0; k < cols_; ++k) {
            const WittVector& a = at(i, k);
            if (a.is_zero()) continue;
            for (uint32_t j = 0; j < other.cols_; ++j)
                r.at(i, j) = r.at(i, j) + a * other.at(k, j);
        }
    return r;
}

MatrixW MatrixW::scaled(const WittVector& c) const {
    MatrixW r(ring_, rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = entries_[i] * c;
    return r;
}

MatrixW MatrixW::transpose() const {
    MatrixW r(ring_, cols_, rows_);
    for (uint32_t i = 0; i < rows_; ++i)
        for (uint32_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

MatrixW MatrixW::sigma_entrywise(int64_t k) const {
    MatrixW r(ring_, rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = entries_[i].sigma_pow(k);
    return r;
}

std::vector<WittVector> MatrixW::charpoly() const {
    require(rows_ == cols_, errc::shape_mismatch, "charpoly of non-square matrix");
    const uint32_t n = rows_;
    // Berkowitz: division-free, valid over any commutative ring.
    // Vectors hold coefficients of det(lambda*I - A_k) for leading principal
    // minors A_k, in descending order (c_k lambda^k ... c_0).
    std::vector<WittVector> poly{WittVector::one(ring_)};
    for (uint32_t k = 0; k < n; ++k) {
        // Toeplitz column for the k-th stage: t_0 = 1, t_1 = -a_kk,
        // t_{j+1} = -(row_k * M^{j-1} * col_k) with M the leading k x k block.
        std::vector<WittVector> t;
        t.push_back(WittVector::one(ring_));
        t.push_back(-at(k, k));
        if (k > 0) {
            std::vector<WittVector> v(k);
            for (uint32_t i = 0; i < k; ++i) v[i] = at(i, k); // col_k
            for (uint32_t j = 0; j < k; ++j) {
                // row_k * v
                WittVector dot = WittVector::zero(ring_);
                for (uint32_t i = 0; i < k; ++i) dot = dot + at(k, i) * v[i];
                t.push_back(-dot);
                if (j + 1 < k) {
                    std::vector<WittVector> nv(k, WittVector::zero(ring_));
                    for (uint32_t i = 0; i < k; ++i)
                        for (uint32_t l = 0; l < k; ++l) nv[i] = nv[i] + at(i, l) * v[l];
                    v = std::move(nv);
                }
            }
        }
        // poly <- t (Toeplitz) * poly
        std::vector<WittVector> next(poly.size() + 1, WittVector::zero(ring_));
        for (size_t i = 0; i < poly.size(); ++i)
            for (size_t j = 0; j < t.size() && i + j < next.size(); ++j)
                next[i + j] = next[i + j] + t[j] * poly[i];
        poly = std::move(next);
    }
    // poly is in descending order (lambda^n first); return ascending
    std::vector<WittVector> asc(poly.rbegin(), poly.rend());
    return asc;
}

WittVector MatrixW::det() const {
    auto cp = charpoly();
    WittVector c0 = cp[0]; // (-1)^n det
    if (rows_ % 2 == 1) c0 = -c0;
    return c0;
}

MatrixW MatrixW::inverse() const {
    require(rows_ == cols_, errc::shape_mismatch, "inverse of non-square matrix");
    const uint32_t n = rows_;
    // Gauss-Jordan with unit pivots: over the local ring W_N a matrix is
    // invertible iff its residue is, so every column must offer a unit pivot.
    MatrixW work = *this;
    MatrixW inv = identity(ring_, n);
    for (uint32_t col = 0; col < n; ++col) {
        uint32_t pivot = n;
        for (uint32_t r = col; r < n; ++r)
            if (work.at(r, col).is_unit()) {
                pivot = r;
                break;
            }
        require(pivot != n, errc::not_invertible, "no unit pivot in column " + std::to_string(col));
        if (pivot != col)
            for (uint32_t j = 0; j < n; ++j) {
                std::swap(work.at(pivot, j), work.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        WittVector piv_inv = work.at(col, col).inv();
        for (uint32_t j = 0; j < n; ++j) {
            work.at(col, j) = work.at(col, j) * piv_inv;
            inv.at(col, j) = inv.at(col, j) * piv_inv;
        }
        for (uint32_t r = 0; r < n; ++r) {
            if (r == col || work.at(r, col).is_zero()) continue;
            WittVector f = work.at(r, col);
            for (uint32_t j = 0; j < n; ++j) {
                work.at(r, j) = work.at(r, j) - f * work.at(col, j);
                inv.at(r, j) = inv.at(r, j) - f * inv.at(col, j);
            }
        }
    }
    require((*this) * inv == identity(ring_, n), errc::internal_inconsistency,
            "inverse verification failed");
    return inv;
}

std::vector<WittVector> MatrixW::solve(const std::vector<WittVector>& b) const {
    require(b.size() == rows_, errc::shape_mismatch, "solve rhs size");
    MatrixW inv = inverse();
    std::vector<WittVector> x(cols_, WittVector::zero(ring_));
    for (uint32_t i = 0; i < cols_; ++i)
        for (uint32_t j = 0; j < rows_; ++j) x[i] = x[i] + inv.at(i, j) * b[j];
    return x;
}

MatrixW MatrixW::submatrix(uint32_t r0, uint32_t c0, uint32_t nr, uint32_t nc) const {
    require(r0 + nr <= rows_ && c0 + nc <= cols_, errc::shape_mismatch, "submatrix");
    MatrixW r(ring_, nr, nc);
    for (uint32_t i = 0; i < nr; ++i)
        for (uint32_t j = 0; j < nc; ++j) r.at(i, j) = at(r0 + i, c0 + j);
    return r;
}

void MatrixW::paste(uint32_t r0, uint32_t c0, const MatrixW& block) {
    require(r0 + block.rows() <= rows_ && c0 + block.cols() <= cols_, errc::shape_mismatch, "paste");
    for (uint32_t i = 0; i < block.rows(); ++i)
        for (uint32_t j = 0; j < block.cols(); ++j) at(r0 + i, c0 + j) = block.at(i, j);
}

std::vector<WittVector> MatrixW::apply_twisted(const std::vector<WittVector>& x, int64_t k) const {
    require(x.size() == cols_, errc::shape_mismatch, "apply size");
    std::vector<WittVector> r(rows_, WittVector::zero(ring_));
    for (uint32_t j = 0; j < cols_; ++j) {
        WittVector xs = x[j].sigma_pow(k);
        if (xs.is_zero()) continue;
        for (uint32_t i = 0; i < rows_; ++i) r[i] = r[i] + at(i, j) * xs;
    }
    return r;
}

std::vector<FqElem> MatrixW::residue() const {
    std::vector<FqElem> r;
    r.reserve(entries_.size());
    for (const auto& e : entries_) r.push_back(e.residue());
    return r;
}

std::string MatrixW::to_string() const {
    std::ostringstream os;
    for (uint32_t i = 0; i < rows_; ++i) {
        for (uint32_t j = 0; j < cols_; ++j) os << at(i, j).to_string() << (j + 1 < cols_ ? " " : "");
        os << "\n";
    }
    return os.str();
}

MatrixW twisted_power(const MatrixW& phi, uint32_t n) {
    require(phi.rows() == phi.cols(), errc::shape_mismatch, "twisted_power");
    require(n >= 1, errc::shape_mismatch, "twisted_power needs n >= 1");
    MatrixW acc = phi;
    for (uint32_t k = 1; k < n; ++k) acc = acc * phi.sigma_entrywise(int64_t(k));
    return acc;
}

std::vector<WittVector> twisted_apply_pow(const MatrixW& phi, std::vector<WittVector> x, uint32_t n) {
    for (uint32_t k = 0; k < n; ++k) x = phi.apply_twisted(x, 1);
    return x;
}

uint32_t fq_rank(std::vector<FqElem>& mat, uint32_t rows, uint32_t cols) {
    uint32_t rank = 0;
    for (uint32_t col = 0; col < cols && rank < rows; ++col) {
        uint32_t pivot = rows;
        for (uint32_t r = rank; r < rows; ++r)
            if (!mat[r * cols + col].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot == rows) continue;
        if (pivot != rank)
            for (uint32_t j = 0; j < cols; ++j) std::swap(mat[pivot * cols + j], mat[rank * cols + j]);
        FqElem inv = mat[rank * cols + col].inv();
        for (uint32_t j = 0; j < cols; ++j) mat[rank * cols + j] = mat[rank * cols + j] * inv;
        for (uint32_t r = 0; r < rows; ++r) {
            if (r == rank || mat[r * cols + col].is_zero()) continue;
            FqElem f = mat[r * cols + col];
            for (uint32_t j = 0; j < cols; ++j)
                mat[r * cols + j] = mat[r * cols + j] - f * mat[rank * cols + j];
        }
        ++rank;
    }
    return rank;
}

std::optional<std::vector<uint8_t>> FpLinearSolver::solve(const std::vector<uint8_t>& target) const {
    const uint32_t cd = columns.empty() ? uint32_t(target.size()) : uint32_t(columns[0].size());
    require(target.size() == cd, errc::shape_mismatch, "solver target size");
    const uint32_t dn = domain_dim;
    // augmented matrix over F_p, column-major elimination
    std::vector<std::vector<uint8_t>> rows(cd, std::vector<uint8_t>(dn + 1, 0));
    for (uint32_t j = 0; j < dn; ++j)
        for (uint32_t i = 0; i < cd; ++i) rows[i][j] = columns[j][i];
    for (uint32_t i = 0; i < cd; ++i) rows[i][dn] = target[i];

    auto inv_mod_p = [&](uint8_t v) {
        uint64_t base = v, e = p - 2, r = 1;
        while (e) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return uint8_t(r);
    };

    std::vector<int32_t> pivot_of_col(dn, -1);
    uint32_t rank = 0;
    for (uint32_t col = 0; col < dn && rank < cd; ++col) {
        uint32_t piv = cd;
        for (uint32_t r = rank; r < cd; ++r)
            if (rows[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv == cd) continue;
        std::swap(rows[piv], rows[rank]);
        uint8_t inv = inv_mod_p(rows[rank][col]);
        for (uint32_t j = 0; j <= dn; ++j) rows[rank][j] = uint8_t(uint64_t(rows[rank][j]) * inv % p);
        for (uint32_t r = 0; r < cd; ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            uint8_t f = rows[r][col];
            for (uint32_t j = 0; j <= dn; ++j)
                rows[r][j] = uint8_t((uint64_t(rows[r][j]) + uint64_t(p - 1) * f % p * rows[rank][j]) % p);
        }
        pivot_of_col[col] = int32_t(rank);
        ++rank;
    }
    // consistency: any zero row with nonzero rhs means no solution
    for (uint32_t r = rank; r < cd; ++r)
        if (rows[r][dn] != 0) return std::nullopt;
    std::vector<uint8_t> x(dn, 0);
    for (uint32_t col = 0; col < dn; ++col)
        if (pivot_of_col[col] >= 0) x[col] = rows[uint32_t(pivot_of_col[col])][dn];
    return x;
}

} // namespace npg
