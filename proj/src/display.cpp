#include "npg/display.hpp"

#include <algorithm>

namespace npg {

DisplayMatrix::DisplayMatrix(RingPtr ring, uint32_t d, uint32_t c, MatrixW a)
    : ring_(std::move(ring)), d_(d), c_(c), a_(std::move(a)) {
    require(a_.rows() == d_ + c_ && a_.cols() == d_ + c_, errc::shape_mismatch, "display size");
    require(a_.ring()->same(*ring_), errc::ring_mismatch, "display ring");
    require(a_.det().is_unit(), errc::not_invertible, "display determinant must be a unit");
}

GramForm::GramForm(RingPtr ring, MatrixW S) : ring_(std::move(ring)), S_(std::move(S)) {
    require(S_.rows() == S_.cols(), errc::shape_mismatch, "Gram matrix must be square");
    require(S_.det().is_unit(), errc::not_invertible, "Gram matrix must be unimodular");
    // alternating: S^t = -S with zero diagonal
    require(S_.transpose() == -S_, errc::not_symmetric, "Gram matrix must be alternating");
    for (uint32_t i = 0; i < S_.rows(); ++i)
        require(S_.at(i, i).is_zero(), errc::not_symmetric, "Gram diagonal must vanish");
}

GramForm GramForm::standard(const RingPtr& ring, uint32_t g) {
    MatrixW S(ring, 2 * g, 2 * g);
    for (uint32_t i = 0; i < g; ++i) {
        S.at(i, g + i) = WittVector::one(ring);
        S.at(g + i, i) = -WittVector::one(ring);
    }
    return GramForm(ring, std::move(S));
}

bool GramForm::is_standard() const {
    if (S_.rows() % 2 != 0) return false;
    uint32_t g = S_.rows() / 2;
    MatrixW expect = standard(ring_, g).S();
    return S_ == expect;
}

MatrixW f_matrix(const DisplayMatrix& disp) {
    MatrixW f = disp.a();
    WittVector p = WittVector::from_int(disp.ring(), int64_t(disp.ring()->p()));
    for (uint32_t i = 0; i < disp.h(); ++i)
        for (uint32_t j = disp.d(); j < disp.h(); ++j) f.at(i, j) = f.at(i, j) * p;
    return f;
}

InverseBlocks inverse_blocks(const DisplayMatrix& disp) {
    MatrixW b = disp.a().inverse();
    return InverseBlocks{
        b.submatrix(0, 0, disp.d(), disp.d()),
        b.submatrix(0, disp.d(), disp.d(), disp.c()),
        b.submatrix(disp.d(), 0, disp.c(), disp.d()),
        b.submatrix(disp.d(), disp.d(), disp.c(), disp.c()),
    };
}

MatrixW v_matrix(const DisplayMatrix& disp) {
    InverseBlocks ib = inverse_blocks(disp);
    const auto& ring = disp.ring();
    WittVector p = WittVector::from_int(ring, int64_t(ring->p()));
    MatrixW v(ring, disp.h(), disp.h());
    v.paste(0, 0, ib.E.scaled(p));
    v.paste(0, disp.d(), ib.G.scaled(p));
    v.paste(disp.d(), 0, ib.H);
    v.paste(disp.d(), disp.d(), ib.J);
    return v.sigma_entrywise(-1);
}

FModule to_fmodule(const DisplayMatrix& disp) { return FModule(disp.ring(), f_matrix(disp)); }

bool is_formal(const DisplayMatrix& disp) {
    if (disp.c() == 0) return true; // multiplicative type: V = 0 mod p
    // tau-linear nilpotence of J mod p: J * tau(J) * ... vanishes within c*m
    // steps (c already suffices; the bound is harmless)
    const auto field = disp.ring()->field();
    const uint32_t c = disp.c();
    MatrixW J = disp.a().submatrix(disp.d(), disp.d(), c, c);
    std::vector<FqElem> prod = J.residue();
    auto reduce_mul = [&](const std::vector<FqElem>& X, const std::vector<FqElem>& Y) {
        std::vector<FqElem> R(size_t(c) * c, FqElem::zero(field));
        for (uint32_t i = 0; i < c; ++i)
            for (uint32_t k = 0; k < c; ++k) {
                if (X[i * c + k].is_zero()) continue;
                for (uint32_t j = 0; j < c; ++j)
                    R[i * c + j] = R[i * c + j] + X[i * c + k] * Y[k * c + j];
            }
        return R;
    };
    auto tau_pow = [&](std::vector<FqElem> X, uint32_t k) {
        for (auto& e : X)
            for (uint32_t i = 0; i < k % field->m(); ++i) e = e.inv_frobenius();
        return X;
    };
    std::vector<FqElem> Jres = J.residue();
    uint32_t steps = c * disp.ring()->m();
    for (uint32_t k = 1; k <= steps; ++k) {
        bool zero = true;
        for (const auto& e : prod)
            if (!e.is_zero()) zero = false;
        if (zero) return true;
        prod = reduce_mul(prod, tau_pow(Jres, k));
    }
    return std::all_of(prod.begin(), prod.end(), [](const FqElem& e) { return e.is_zero(); });
}

uint32_t a_number(const DisplayMatrix& disp) {
    const uint32_t h = disp.h();
    const auto field = disp.ring()->field();
    auto fr = f_matrix(disp).residue();
    auto vr = v_matrix(disp).residue();
    // columns of [f | v]
    std::vector<FqElem> mat(size_t(h) * 2 * h, FqElem::zero(field));
    for (uint32_t i = 0; i < h; ++i)
        for (uint32_t j = 0; j < h; ++j) {
            mat[i * 2 * h + j] = fr[i * h + j];
            mat[i * 2 * h + h + j] = vr[i * h + j];
        }
    uint32_t rank = fq_rank(mat, h, 2 * h);
    return h - rank;
}

uint32_t p_rank(const DisplayMatrix& disp) {
    const auto field = disp.ring()->field();
    const uint32_t d = disp.d();
    // route A: stable rank of the sigma-twisted iterates of block A mod p
    uint32_t stable = 0;
    if (d > 0) {
        auto Ares = disp.block_A().residue();
        auto sigma_pow = [&](std::vector<FqElem> X, uint32_t k) {
            for (auto& e : X)
                for (uint32_t i = 0; i < k % field->m(); ++i) e = e.frobenius();
            return X;
        };
        auto mul = [&](const std::vector<FqElem>& X, const std::vector<FqElem>& Y) {
            std::vector<FqElem> R(size_t(d) * d, FqElem::zero(field));
            for (uint32_t i = 0; i < d; ++i)
                for (uint32_t k = 0; k < d; ++k) {
                    if (X[i * d + k].is_zero()) continue;
                    for (uint32_t j = 0; j < d; ++j)
                        R[i * d + j] = R[i * d + j] + X[i * d + k] * Y[k * d + j];
                }
            return R;
        };
        std::vector<FqElem> prod = Ares;
        for (uint32_t k = 1; k < d; ++k) prod = mul(prod, sigma_pow(Ares, k));
        auto copy = prod;
        stable = fq_rank(copy, d, d);
    }
    // route B: slope-zero multiplicity of the F-module
    uint32_t oracle = slope_zero_multiplicity(to_fmodule(disp));
    require(stable == oracle, errc::internal_inconsistency,
            "p-rank routes disagree: Hasse-Witt " + std::to_string(stable) + " vs oracle " +
                std::to_string(oracle));
    return stable;
}

bool is_normal_form(const DisplayMatrix& disp) {
    const uint32_t d = disp.d(), c = disp.c(), h = disp.h();
    if (d == 0 || c == 0) return false;
    const auto& a = disp.a();
    auto one = WittVector::one(disp.ring());
    // A block: sub-diagonal 1s in columns 1..d-1, free last column
    for (uint32_t j = 0; j + 1 < d; ++j)
        for (uint32_t i = 0; i < d; ++i) {
            if (i == j + 1) {
                if (a.at(i, j) != one) return false;
            } else if (!a.at(i, j).is_zero()) {
                return false;
            }
        }
    // C block: single 1 at (d, d-1) in 0-based indices
    for (uint32_t i = d; i < h; ++i)
        for (uint32_t j = 0; j < d; ++j) {
            if (i == d && j == d - 1) {
                if (a.at(i, j) != one) return false;
            } else if (!a.at(i, j).is_zero()) {
                return false;
            }
        }
    // D block: sub-diagonal 1s only
    for (uint32_t i = d; i < h; ++i)
        for (uint32_t j = d; j < h; ++j) {
            bool subdiag = (i == j + 1);
            if (subdiag) {
                if (a.at(i, j) != one) return false;
            } else if (!a.at(i, j).is_zero()) {
                return false;
            }
        }
    // B block free; a_{1,h} must be a unit
    return a.at(0, h - 1).is_unit();
}

DisplayMatrix cyclic_normal_form(uint32_t d, uint32_t h, const RingPtr& ring) {
    require(0 < d && d < h, errc::shape_mismatch, "cyclic normal form needs 0 < d < h");
    MatrixW a(ring, h, h);
    auto one = WittVector::one(ring);
    for (uint32_t i = 0; i + 1 < d; ++i) a.at(i + 1, i) = one; // A sub-diagonal
    a.at(d, d - 1) = one;                                      // C block 1
    for (uint32_t v = 0; v + 1 < h - d; ++v) a.at(d + v + 1, d + v) = one; // D sub-diagonal
    a.at(0, h - 1) = -one;
    return DisplayMatrix(ring, d, h - d, std::move(a));
}

std::pair<DisplayMatrix, GramForm> supersingular_pqp(uint32_t g, const RingPtr& ring) {
    require(g >= 1, errc::shape_mismatch, "g >= 1");
    return {cyclic_normal_form(g, 2 * g, ring), GramForm::standard(ring, g)};
}

bool pairing_compatible(const DisplayMatrix& disp, const GramForm& gram) {
    require(gram.S().rows() == disp.h(), errc::shape_mismatch, "Gram size");
    MatrixW f = f_matrix(disp);
    MatrixW v = v_matrix(disp);
    // <F e_i, e_j> = (f^t S)_{ij};  <e_i, V e_j>^sigma = sigma(S v)_{ij}
    return f.transpose() * gram.S() == (gram.S() * v).sigma_entrywise(1);
}

bool symplectic_block_relation(const DisplayMatrix& disp, const GramForm& gram) {
    require(gram.is_standard(), errc::not_symmetric,
            "block relation is stated for the standard symplectic form");
    require(disp.h() % 2 == 0 && disp.d() == disp.c(), errc::shape_mismatch,
            "symplectic display needs d = c");
    InverseBlocks ib = inverse_blocks(disp);
    return ib.E == disp.block_D().transpose() && ib.G == -disp.block_B().transpose() &&
           ib.H == -disp.block_C().transpose() && ib.J == disp.block_A().transpose();
}

DisplayMatrix np_seed_display(const NewtonPolygon& beta, const RingPtr& ring) {
    const int64_t d = beta.dim(), c = beta.end_height(), h = beta.height();
    require(d > 0 && c > 0, errc::degenerate_dimensions,
            "etale/multiplicative polygon: the canonical answer needs no matrix");
    require(ring->N() >= uint32_t(c) + 2, errc::precision_too_low, "seed needs N >= c+2");
    MatrixW a(ring, uint32_t(h), uint32_t(h));
    auto one = WittVector::one(ring);
    for (int64_t i = 0; i + 1 < d; ++i) a.at(uint32_t(i + 1), uint32_t(i)) = one;
    a.at(uint32_t(d), uint32_t(d - 1)) = one;
    for (int64_t v = 0; v + 1 < c; ++v) a.at(uint32_t(d + v + 1), uint32_t(d + v)) = one;
    a.at(0, uint32_t(h - 1)) = -one;
    // interior breakpoints -> cells via the inverse of (i,j) -> (j+1-i, j-d)
    const auto& bps = beta.breakpoints();
    for (size_t k = 1; k + 1 < bps.size(); ++k) {
        int64_t x = bps[k].x, y = bps[k].y;
        int64_t j = y + d;          // 1-based column
        int64_t i = j + 1 - x;      // 1-based row
        require(1 <= i && i <= d && d <= j && j < h, errc::internal_inconsistency,
                "breakpoint cell outside the free region");
        a.at(uint32_t(i - 1), uint32_t(j - 1)) = one;
    }
    DisplayMatrix disp(ring, uint32_t(d), uint32_t(c), std::move(a));
    require(is_normal_form(disp), errc::internal_inconsistency, "seed is not normal form");
    return disp;
}

} // namespace npg
