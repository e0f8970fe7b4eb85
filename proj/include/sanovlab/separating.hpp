#pragma once

// End-to-end separating-projection construction: classicalize a finite state
// family against the reference state at block length l, lift typical sets to
// diagonal projections, symmetrize over the intertwining unitaries, and
// evaluate both sides of the separation-rate chain. Also the Neyman-Pearson
// bracket used as the optimality oracle.

#include <cstdint>
#include <map>
#include <vector>

#include "sanovlab/block_algebras.hpp"
#include "sanovlab/classical.hpp"
#include "sanovlab/quantum.hpp"

namespace sanovlab {

// Unitary mapping the refined basis of one state's algebra onto the anchor's,
// block by block; commutes with every spectral block projector.
struct UnitaryIntertwiner {
    int l = 0;
    Matrix matrix;
    std::size_t source_index = 0;
    std::size_t anchor_index = 0;
};

// Everything produced by classicalizing a family {psi} against phi at block
// length l: the anchor algebra, the transported classical distributions, the
// reference distribution, the intertwiners, and the per-block compressions
// needed for exact expectations downstream.
struct Classicalization {
    int l = 0;
    Eigen::Index site_dim = 0;
    SpectralBlockStructure blocks;
    AbelianAlgebra anchor;                    // maximal refinement for psi_0
    std::vector<Distribution> omega_l;        // per psi, in anchor letter order
    Distribution q;                           // block eigenvalue per letter
    std::vector<UnitaryIntertwiner> intertwiners;
    std::vector<int> letter_block;            // anchor letter -> block id
    std::vector<int> letter_pos;              // position within the block
    std::vector<std::vector<int>> block_letters;
    std::vector<Matrix> anchor_block_cols;    // per block: total_dim x rank
    // per psi, per block: A_B^+ rho_psi A_B (for expectations) and A_B^+ S_B
    // (letter transport), both rank x rank.
    std::vector<std::vector<Matrix>> compressed_states;
    std::vector<std::vector<Matrix>> block_transports;

    int alphabet() const { return static_cast<int>(letter_block.size()); }
};

Classicalization classicalize(const std::vector<DensityOperator>& psi_set,
                              const DensityOperator& phi, int l,
                              double grouping_tol = 1e-9, Eigen::Index cap = kDefaultDimCap);

// A typical set over the anchor alphabet, read as the diagonal projection in
// the anchor product basis. Expectations of it are classical type sums.
struct LiftedTypicalProjection {
    int l = 0;
    std::int64_t n = 0;
    TypicalSetSpec word_spec;

    double log2_rank() const; // log2 of the number of member words
};

LiftedTypicalProjection lift_typical_set(const TypicalSetSpec& spec, const Classicalization& c);

// Expectations of the (untransported) lifted projection: exact type sums.
double log2_phi_expectation(const LiftedTypicalProjection& p, const Classicalization& c);
double psi_expectation_transported(const LiftedTypicalProjection& p, const Classicalization& c,
                                   std::size_t psi_index);

// Dense materialization for small-instance oracles.
Projection dense_lifted_projection(const LiftedTypicalProjection& p, const Classicalization& c,
                                   Eigen::Index cap = kDefaultDimCap);

// Join of the transported projections, stored blockwise: the key is the
// length-n word of spectral block ids, the value an orthonormal basis of the
// joined range in local block coordinates.
struct BlockDiagonalProjection {
    int l = 0;
    std::int64_t n = 0;
    Eigen::Index site_dim = 0;
    std::map<std::vector<int>, Matrix> groups;

    Eigen::Index rank() const;
    double log2_phi_expectation(const Classicalization& c) const;
    double psi_expectation(const Classicalization& c, std::size_t psi_index) const;
    Projection to_projection(const Classicalization& c, Eigen::Index cap = kDefaultDimCap) const;
};

// pbar = join over the family of U^{* (x)n} p U^{(x)n}. subset selects which
// members participate (default: all).
BlockDiagonalProjection symmetrize_join(const LiftedTypicalProjection& p, const Classicalization& c,
                                        std::vector<std::size_t> subset = {},
                                        Eigen::Index cap = kDefaultDimCap);

// p (x) identity on r padding sites.
Projection pad_projection(const Projection& p, Eigen::Index site_dim, int r,
                          Eigen::Index cap = kDefaultDimCap);

struct QuantumSanovRow {
    std::int64_t n = 0;
    double eps_n = 0.0;
    std::vector<double> psi_expectations;  // of the joined projection, per psi
    std::vector<double> psi_transported;   // P^n(M_n) per psi (un-joined expectation)
    double log2_q_measure = -kInf;         // log2 Q^n(M_n) = log2 phi(p_nl)
    double log2_phi_joined = -kInf;        // log2 phi(pbar_nl)
    double empirical_exponent = -kInf;     // log2_phi_joined / (n l)
    double mid_bound = -kInf;              // (d^{2l} log2(n+1) + log2 Q^n(M_n)) / (n l)
    double final_bound = -kInf;            // full right side of the rate chain
    double exponent_lower = 0.0;           // I_n at block length l
    double slack_bound = 0.0;              // eps_n (log2 d^l - log2 eps_n - log2 Qmin(l))
    double log2_rank_lifted = -kInf;
    double log2_rank_joined = -kInf;
    bool chain_ok = false;
    bool psi_monotone_ok = false;
    bool lifted_classical_ok = false;      // type-count bound, gap bound, monotone I_n at level l
    bool sym_rank_ok = false;              // rank(pbar) <= (n+1)^{d^{2l}} rank(p)
    bool u_invariance_ok = false;          // transported phi-expectations all equal Q^n(M_n)
    bool psi_estimate_ok = false;          // psi(pbar) >= transported member expectation
};

struct QuantumSanovReport {
    int l = 0;
    Eigen::Index site_dim = 0;
    double s_psi_phi = kInf;    // S(Psi, phi)
    std::size_t argmin_index = 0;
    double h_omega_q = kInf;    // classical divergence of the lifted family
    double eta_l = 0.0;         // pinch penalty rate d log2(l+1) / l
    double delta = kInf;        // requested slack target for the block length
    bool eta_within_delta = true; // eta_l <= delta
    std::vector<QuantumSanovRow> rows;
    std::vector<Distribution> omega_l;
    Distribution q;
};

// delta, when finite, is the requested asymptotic slack: the report records
// whether the chosen block length satisfies eta_l <= delta.
QuantumSanovReport quantum_sanov_experiment(const std::vector<DensityOperator>& psi_set,
                                            const DensityOperator& phi, int l,
                                            const std::vector<std::int64_t>& n_list,
                                            const PowerLawSchedule& schedule,
                                            double grouping_tol = 1e-9,
                                            Eigen::Index cap = kDefaultDimCap, int threads = 1,
                                            double delta = kInf);

// Bracket for the optimal separating exponent at block length n: upper comes
// from threshold-family projections feasible at level 1-eps, lower from the
// Lagrangian bound valid for every admissible projection.
struct NPBracket {
    std::int64_t n = 0;
    double epsilon = 0.0;
    double upper = 0.0; // log2 phi(q) of the best feasible test found
    double lower = -kInf;
};

NPBracket neyman_pearson_bracket(const DensityOperator& psi, const DensityOperator& phi,
                                 int n, double epsilon, Eigen::Index cap = kDefaultDimCap);

} // namespace sanovlab
