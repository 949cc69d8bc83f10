#pragma once

#include "npg/semilinear.hpp"

namespace npg {

/// h x h display matrix (A B; C D) with block sizes (d, c): F acts on the
/// chosen basis by (A pB; C pD). Determinant must be a unit in W_N.
class DisplayMatrix {
public:
    DisplayMatrix(RingPtr ring, uint32_t d, uint32_t c, MatrixW a);

    const RingPtr& ring() const { return ring_; }
    uint32_t d() const { return d_; }
    uint32_t c() const { return c_; }
    uint32_t h() const { return d_ + c_; }
    const MatrixW& a() const { return a_; }

    MatrixW block_A() const { return a_.submatrix(0, 0, d_, d_); }
    MatrixW block_B() const { return a_.submatrix(0, d_, d_, c_); }
    MatrixW block_C() const { return a_.submatrix(d_, 0, c_, d_); }
    MatrixW block_D() const { return a_.submatrix(d_, d_, c_, c_); }

    bool operator==(const DisplayMatrix& o) const {
        return d_ == o.d_ && c_ == o.c_ && a_ == o.a_;
    }

private:
    RingPtr ring_;
    uint32_t d_, c_;
    MatrixW a_;
};

/// The four blocks of the inverse display matrix (b) = (E G; H J).
struct InverseBlocks {
    MatrixW E, G, H, J;
};

/// Alternating unimodular Gram matrix of a symplectic pairing.
class GramForm {
public:
    GramForm(RingPtr ring, MatrixW S);
    static GramForm standard(const RingPtr& ring, uint32_t g);

    const MatrixW& S() const { return S_; }
    const RingPtr& ring() const { return ring_; }
    bool is_standard() const;

private:
    RingPtr ring_;
    MatrixW S_;
};

/// F-matrix (A pB; C pD).
MatrixW f_matrix(const DisplayMatrix& disp);
/// V-matrix tau((pE pG; H J)); satisfies v * tau(f) = p = f * sigma(v).
MatrixW v_matrix(const DisplayMatrix& disp);
InverseBlocks inverse_blocks(const DisplayMatrix& disp);

FModule to_fmodule(const DisplayMatrix& disp);

/// Formality: J mod p nilpotent in the tau-linear sense.
bool is_formal(const DisplayMatrix& disp);

/// a(G) = h - rank_k of the columns of [f mod p | v mod p].
uint32_t a_number(const DisplayMatrix& disp);

/// p-rank computed two independent ways (stable rank of the twisted iterate of
/// block A mod p, and the slope-zero multiplicity of the charpoly of the
/// twisted F-power); InternalInconsistency if they ever disagree.
uint32_t p_rank(const DisplayMatrix& disp);

/// Exact shape check of the normal form (2.1): sub-diagonal 1s in A with a free
/// last column, single C-entry 1 at (d+1, d), sub-diagonal 1s in D, free B with
/// a_{1,h} a unit.
bool is_normal_form(const DisplayMatrix& disp);

/// Cyclic normal form of height h, dimension d: sub-diagonal 1s, display entry
/// -1 at (1,h), zeros elsewhere. F^h e_1 = -p^c e_1.
DisplayMatrix cyclic_normal_form(uint32_t d, uint32_t h, const RingPtr& ring);

/// Supersingular principally quasi-polarized seed: cyclic normal form with
/// h = 2g, d = g plus the standard symplectic Gram form.
std::pair<DisplayMatrix, GramForm> supersingular_pqp(uint32_t g, const RingPtr& ring);

/// <Fa, b> = <a, Vb>^sigma on all basis pairs, exactly in W_N.
bool pairing_compatible(const DisplayMatrix& disp, const GramForm& gram);

/// (E G; H J) = (D^t -B^t; -C^t A^t) (symplectic-basis block relation).
bool symplectic_block_relation(const DisplayMatrix& disp, const GramForm& gram);

/// Normal-form display realizing a prescribed polygon: Teichmuller units at
/// the polygon's breakpoints under the inverse of (i,j) -> (j+1-i, j-d), the
/// mandatory -1 at (1,h), zeros elsewhere. DegenerateDimensions when d = 0 or
/// c = 0 (etale/multiplicative polygons need no matrix).
DisplayMatrix np_seed_display(const NewtonPolygon& beta, const RingPtr& ring);

struct NormalFormResult {
    MatrixW U;            // base change over the input ring
    DisplayMatrix disp;   // over the effective-precision ring
    uint32_t effective_N; // input N minus the p-divisions spent (c-1)
};

/// Normal-form recovery (the reconstruction of the paper-omitted existence
/// proof): needs a_number = 1, p_rank = 0. Deterministic generator scan plus
/// per-precision-level corrections; the field may be extended by minimal
/// multiples of m (bounded), in which case the result lives over the extension.
NormalFormResult normal_form(const FModule& module);

/// Symplectic variant (Lemma 2.3 iteration): basis kept symplectic at every
/// level; output U is symplectic in W_N and the display passes
/// pairing_compatible against the standard form.
NormalFormResult symplectic_normal_form(const FModule& module, const GramForm& gram);

} // namespace npg
