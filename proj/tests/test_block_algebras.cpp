#include <doctest.h>

#include <cmath>
#include <random>

#include "sanovlab/block_algebras.hpp"

using namespace sanovlab;

namespace {

std::mt19937_64 g_rng(1717);

Cplx randc() {
    auto u = [] { return static_cast<double>(g_rng() >> 11) * 0x1.0p-53 - 0.5; };
    return Cplx(u(), u());
}

DensityOperator random_state(Eigen::Index dim) {
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = randc();
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityOperator((m + m.adjoint()) / 2.0);
}

Matrix random_hermitian(Eigen::Index dim) {
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = randc();
    return (g + g.adjoint()) / 2.0;
}

} // namespace

TEST_CASE("spectral blocks of a qubit reference at l=2") {
    DensityOperator phi = DensityOperator::diagonal({0.7, 0.3});
    SpectralBlockStructure s = build_spectral_blocks(phi, 2);
    REQUIRE(s.blocks.size() == 3);
    CHECK(s.total_dim == 4);

    // Colex type order: (2,0), (1,1), (0,2) over the descending eigenvalues.
    CHECK(s.blocks[0].projector.rank() == 1);
    CHECK(s.blocks[1].projector.rank() == 2);
    CHECK(s.blocks[2].projector.rank() == 1);
    CHECK(s.blocks[0].eigenvalue == doctest::Approx(0.49).epsilon(1e-12));
    CHECK(s.blocks[1].eigenvalue == doctest::Approx(0.21).epsilon(1e-12));
    CHECK(s.blocks[2].eigenvalue == doctest::Approx(0.09).epsilon(1e-12));

    // Blocks are orthogonal, resolve the identity, and rebuild the state.
    Matrix resolution = Matrix::Zero(4, 4);
    Matrix rebuilt = Matrix::Zero(4, 4);
    for (const auto& b : s.blocks) {
        resolution += b.projector.matrix();
        rebuilt += b.eigenvalue * b.projector.matrix();
    }
    CHECK((resolution - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((rebuilt - tensor_power(phi, 2).matrix()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("spectral blocks: degenerate reference collapses to one block") {
    SpectralBlockStructure s = build_spectral_blocks(DensityOperator::maximally_mixed(2), 2);
    REQUIRE(s.blocks.size() == 1);
    CHECK(s.blocks[0].projector.rank() == 4);
    CHECK(s.blocks[0].eigenvalue == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("spectral block count obeys the type-counting bound") {
    for (int l = 1; l <= 3; ++l) {
        DensityOperator phi = random_state(2);
        SpectralBlockStructure s = build_spectral_blocks(phi, l);
        CHECK(static_cast<double>(s.blocks.size()) <= std::pow(l + 1.0, 2.0));
    }
    CHECK_THROWS_AS(build_spectral_blocks(random_state(4), 7), CapExceeded);
}

TEST_CASE("pinching is a trace-preserving idempotent positive compression") {
    DensityOperator phi = random_state(2);
    SpectralBlockStructure s = build_spectral_blocks(phi, 2);

    for (int trial = 0; trial < 10; ++trial) {
        Matrix a = random_hermitian(4);
        Matrix pa = pinch(a, s);
        CHECK(std::abs(pa.trace().real() - a.trace().real()) <= 1e-10);
        CHECK((pinch(pa, s) - pa).cwiseAbs().maxCoeff() <= 1e-10);

        DensityOperator rho = random_state(4);
        Matrix prho = pinch(rho.matrix(), s);
        Eigen::SelfAdjointEigenSolver<Matrix> es(prho);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }

    // Unital, and block-diagonal inputs are fixed points.
    CHECK((pinch(Matrix::Identity(4, 4), s) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
    Matrix diag_in = pinch(random_hermitian(4), s);
    CHECK((pinch(diag_in, s) - diag_in).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("pinch entropy gain sits in the type-counting window") {
    for (int l = 1; l <= 3; ++l) {
        for (int trial = 0; trial < 8; ++trial) {
            DensityOperator psi = random_state(2);
            DensityOperator phi = random_state(2);
            SpectralBlockStructure s = build_spectral_blocks(phi, l);
            DensityOperator psi_l = tensor_power(psi, l);
            double gain = von_neumann_entropy(DensityOperator::unchecked(pinch(psi_l.matrix(), s))) -
                          von_neumann_entropy(psi_l);
            CHECK(gain >= -1e-9);
            CHECK(gain <= pinch_gain_bound(2, l) + 1e-9);
        }
    }
}

TEST_CASE("pinched-state algebra: commuting pair at l=1") {
    DensityOperator psi = DensityOperator::diagonal({0.8, 0.2});
    DensityOperator phi = DensityOperator::diagonal({0.6, 0.4});
    AbelianAlgebra alg = build_pinched_algebra(psi, phi, 1);
    REQUIRE(alg.minimal_projections.size() == 2);
    CHECK(alg.is_maximal());
    CHECK(alg.resolution_residual() <= 1e-9);
    // Minimal projections are the joint eigenprojections (the standard basis).
    for (const auto& p : alg.minimal_projections) {
        CHECK(p.rank() == 1);
        CVector col = p.range_basis.col(0);
        CHECK(std::max(std::abs(col(0)), std::abs(col(1))) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("pinched-state algebra: pure state against a faithful reference at l=2") {
    CVector w(2);
    w << std::cos(0.4), std::sin(0.4);
    DensityOperator psi = DensityOperator::pure(w);
    DensityOperator phi = DensityOperator::diagonal({0.7, 0.3});
    AbelianAlgebra alg = build_pinched_algebra(psi, phi, 2);
    CHECK(alg.resolution_residual() <= 1e-9);

    // Zero-weight eigenvalue groups are retained: block ranks are exhausted.
    Eigen::Index total_rank = 0;
    for (const auto& p : alg.minimal_projections) total_rank += p.rank();
    CHECK(total_rank == 4);
    SpectralBlockStructure s = build_spectral_blocks(phi, 2);
    std::vector<Eigen::Index> per_block(s.blocks.size(), 0);
    for (std::size_t i = 0; i < alg.minimal_projections.size(); ++i)
        per_block[static_cast<std::size_t>(alg.labels[i].block)] += alg.minimal_projections[i].rank();
    for (std::size_t b = 0; b < s.blocks.size(); ++b) CHECK(per_block[b] == s.blocks[b].projector.rank());
}

TEST_CASE("maximal abelian refinement") {
    DensityOperator psi = random_state(2);
    DensityOperator phi = random_state(2);
    AbelianAlgebra alg = build_pinched_algebra(psi, phi, 2);
    AbelianAlgebra refined = refine_maximal_abelian(alg);

    CHECK(refined.is_maximal());
    CHECK(refined.minimal_projections.size() == 4);
    CHECK(refined.resolution_residual() <= 1e-9);

    // Refining an already-maximal algebra preserves the projections' spans.
    AbelianAlgebra twice = refine_maximal_abelian(refined);
    REQUIRE(twice.minimal_projections.size() == refined.minimal_projections.size());
    for (std::size_t i = 0; i < refined.minimal_projections.size(); ++i) {
        double overlap = std::abs((refined.minimal_projections[i].range_basis.adjoint() *
                                   twice.minimal_projections[i].range_basis)(0, 0));
        CHECK(overlap == doctest::Approx(1.0).epsilon(1e-10));
    }

    // Every refined projection sits under exactly one original and one block.
    for (std::size_t i = 0; i < refined.minimal_projections.size(); ++i) {
        const auto& label = refined.labels[i];
        CHECK(label.refinement_index >= 0);
        std::size_t parent = 0;
        for (std::size_t j = 0; j < alg.labels.size(); ++j)
            if (alg.labels[j].block == label.block && alg.labels[j].index_in_block == label.index_in_block)
                parent = j;
        const Projection& g = refined.minimal_projections[i];
        const Projection& f = alg.minimal_projections[parent];
        Matrix lifted = f.range_basis * (f.range_basis.adjoint() * g.range_basis);
        CHECK((lifted - g.range_basis).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("state restriction to an abelian algebra") {
    DensityOperator psi = random_state(2);
    DensityOperator phi = DensityOperator::diagonal({0.7, 0.3});
    AbelianAlgebra refined = refine_maximal_abelian(build_pinched_algebra(psi, phi, 2));

    Distribution uniform = restrict_state(DensityOperator::maximally_mixed(4), refined);
    for (int i = 0; i < uniform.size(); ++i) CHECK(uniform[i] == doctest::Approx(0.25).epsilon(1e-10));

    // The reference restricts to the block eigenvalue on every letter.
    SpectralBlockStructure s = build_spectral_blocks(phi, 2);
    Distribution q = restrict_state(tensor_power(phi, 2), refined);
    for (std::size_t i = 0; i < refined.labels.size(); ++i) {
        double mu = s.blocks[static_cast<std::size_t>(refined.labels[i].block)].eigenvalue;
        CHECK(q[static_cast<int>(i)] == doctest::Approx(mu).epsilon(1e-10));
    }
}

TEST_CASE("restricted divergence brackets the one-letter rate") {
    for (int trial = 0; trial < 6; ++trial) {
        DensityOperator psi = random_state(2);
        DensityOperator phi = random_state(2);
        double s_rate = quantum_rel_entropy(psi, phi);
        for (int l = 1; l <= 3; ++l) {
            AbelianAlgebra d_alg = build_pinched_algebra(psi, phi, l);
            AbelianAlgebra b_alg = refine_maximal_abelian(d_alg);
            DensityOperator psi_l = tensor_power(psi, l);
            DensityOperator phi_l = tensor_power(phi, l);
            double h_d = rel_entropy(restrict_state(psi_l, d_alg), restrict_state(phi_l, d_alg));
            double h_b = rel_entropy(restrict_state(psi_l, b_alg), restrict_state(phi_l, b_alg));
            // Monotone under refinement and restriction, and within the
            // pinching penalty of the true rate.
            CHECK(h_b >= h_d - 1e-9);
            CHECK(h_b <= l * s_rate + 1e-8);
            CHECK(h_b >= l * s_rate - pinch_gain_bound(2, l) - 1e-8);
            double eta_l = pinch_gain_bound(2, l) / l;
            CHECK(std::abs(h_b / l - s_rate) <= eta_l + 1e-9);
        }
    }
}

TEST_CASE("identity decomposition terms: commuting pair") {
    DensityOperator psi = DensityOperator::diagonal({0.8, 0.2});
    DensityOperator phi = DensityOperator::diagonal({0.6, 0.4});
    for (int l = 1; l <= 3; ++l) {
        HiaiPetzTerms t = hiai_petz_identity_terms(psi, phi, l);
        CHECK(t.support_ok);
        CHECK(t.pinch_gain == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(t.lhs == doctest::Approx(t.restricted_term).epsilon(1e-9));
        CHECK(t.residual <= 1e-9);
    }
}

TEST_CASE("identity decomposition terms: random qubit pairs") {
    for (int trial = 0; trial < 25; ++trial) {
        DensityOperator psi = random_state(2);
        DensityOperator phi = random_state(2);
        for (int l = 1; l <= 3; ++l) {
            HiaiPetzTerms t = hiai_petz_identity_terms(psi, phi, l);
            REQUIRE(t.support_ok);
            CHECK(t.residual <= 1e-8);
            CHECK(t.pinch_gain >= -1e-10);
            CHECK(t.pinch_gain <= pinch_gain_bound(2, l) + 1e-9);
            CHECK(t.lhs == doctest::Approx(l * quantum_rel_entropy(psi, phi)).epsilon(1e-8));
        }
    }
}

TEST_CASE("identity decomposition flags support violations") {
    // Full-rank state against a pure reference: no support inclusion.
    DensityOperator psi = DensityOperator::maximally_mixed(2);
    CVector v(2);
    v << 1.0, 0.0;
    DensityOperator phi = DensityOperator::pure(v);
    HiaiPetzTerms t = hiai_petz_identity_terms(psi, phi, 2);
    CHECK_FALSE(t.support_ok);
    CHECK(t.lhs == kInf);
    CHECK(t.restricted_term == kInf); // the classical restriction also sees the null letters
}
