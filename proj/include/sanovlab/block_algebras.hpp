#pragma once

// Pinching machinery at block length l: spectral blocks of the reference
// state's tensor power, the trace conditional expectation onto them, the
// abelian algebra generated by the pinched state, its maximal abelian
// refinement, and classical restrictions of states.

#include <vector>

#include "sanovlab/classical.hpp"
#include "sanovlab/quantum.hpp"

namespace sanovlab {

struct SpectralBlock {
    TypeVector type;        // counts over the distinct eigenvalues of phi
    double eigenvalue;      // product of eigenvalue powers; exact 0 when any null class is hit
    Projection projector;
};

struct SpectralBlockStructure {
    int l = 0;
    Eigen::Index site_dim = 0;
    Eigen::Index total_dim = 0; // site_dim^l
    std::vector<double> site_eigenvalues; // distinct, descending
    std::vector<SpectralBlock> blocks;    // in colex order of the type vectors
};

SpectralBlockStructure build_spectral_blocks(const DensityOperator& phi, int l,
                                             double grouping_tol = 1e-9,
                                             Eigen::Index cap = kDefaultDimCap);

// Block-diagonal compression sum_B e_B a e_B: idempotent, trace-preserving.
Matrix pinch(const Matrix& a, const SpectralBlockStructure& s);

// Upper bound on the entropy gain of pinching, site_dim * log2(l+1) bits.
double pinch_gain_bound(Eigen::Index site_dim, int l);

struct MinimalProjectionLabel {
    int block = 0;            // spectral block id
    int index_in_block = 0;   // eigenvalue group within the pinched block
    int refinement_index = -1; // -1 before refinement
};

// Ordered list of mutually orthogonal projections summing to identity.
struct AbelianAlgebra {
    Eigen::Index ambient_dim = 0;
    std::vector<Projection> minimal_projections;
    std::vector<MinimalProjectionLabel> labels;

    bool is_maximal() const; // every minimal projection has rank 1
    double resolution_residual() const;
};

// The abelian algebra generated by the spectral blocks of phi^{(x)l} together
// with the blockwise-pinched psi^{(x)l}: minimal projections are the grouped
// eigenprojections of the pinched state inside each block. Zero-eigenvalue
// groups are retained so the projections resolve the identity.
AbelianAlgebra build_pinched_algebra(const DensityOperator& psi, const DensityOperator& phi,
                                     int l, double grouping_tol = 1e-9,
                                     Eigen::Index cap = kDefaultDimCap);

// Splits every minimal projection into rank-1 pieces along its stored basis,
// each column phase-normalized so its first significant entry is positive real.
AbelianAlgebra refine_maximal_abelian(const AbelianAlgebra& alg);

// Classical restriction: probs(i) = tr(D g_i) in label order. Entries below
// clean_tol are floored to exact zero and the vector renormalized, so that
// support questions downstream are exact.
Distribution restrict_state(const DensityOperator& d, const AbelianAlgebra& alg,
                            double clean_tol = 1e-12);

struct HiaiPetzTerms {
    double lhs = 0.0;             // S(psi^l, phi^l)
    double restricted_term = 0.0; // relative entropy of the restrictions
    double pinch_gain = 0.0;      // S(psi^l o E_l) - S(psi^l)
    double residual = 0.0;        // |lhs - restricted_term - pinch_gain|
    bool support_ok = false;      // identity check skipped when false
};

HiaiPetzTerms hiai_petz_identity_terms(const DensityOperator& psi, const DensityOperator& phi,
                                       int l, double grouping_tol = 1e-9,
                                       Eigen::Index cap = kDefaultDimCap);

} // namespace sanovlab
