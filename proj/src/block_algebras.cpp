#include "sanovlab/block_algebras.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sanovlab {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

SpectralBlockStructure build_spectral_blocks(const DensityOperator& phi, int l,
                                             double grouping_tol, Eigen::Index cap) {
    require(l >= 1, "build_spectral_blocks: l must be positive");
    const Eigen::Index d = phi.dim();
    double required = std::pow(static_cast<double>(d), l);
    if (required > static_cast<double>(cap)) throw CapExceeded(static_cast<long long>(required));
    const Eigen::Index total = static_cast<Eigen::Index>(std::llround(required));

    SpectralDecomposition sd = spectral_decomposition(phi, grouping_tol);
    const int k = static_cast<int>(sd.eigenvalues.size());

    // Flatten the site eigenbasis and remember each column's eigenvalue class.
    Matrix site_basis(d, d);
    std::vector<int> class_of_col(static_cast<std::size_t>(d));
    Eigen::Index col = 0;
    for (int c = 0; c < k; ++c) {
        const Matrix& b = sd.projectors[static_cast<std::size_t>(c)].range_basis;
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            site_basis.col(col) = b.col(j);
            class_of_col[static_cast<std::size_t>(col)] = c;
            ++col;
        }
    }

    SpectralBlockStructure out;
    out.l = l;
    out.site_dim = d;
    out.total_dim = total;
    out.site_eigenvalues = sd.eigenvalues;

    std::vector<TypeVector> types = enumerate_types(l, k);
    std::map<std::vector<std::int64_t>, int> type_index;
    for (std::size_t i = 0; i < types.size(); ++i) type_index[types[i].counts] = static_cast<int>(i);

    std::vector<std::vector<CVector>> block_vectors(types.size());

    // Odometer over all length-l tuples of site eigenvector indices.
    std::vector<Eigen::Index> tuple(static_cast<std::size_t>(l), 0);
    while (true) {
        std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index idx : tuple) ++counts[static_cast<std::size_t>(class_of_col[static_cast<std::size_t>(idx)])];

        CVector v = site_basis.col(tuple[0]);
        for (int t = 1; t < l; ++t) {
            CVector next(v.size() * d);
            for (Eigen::Index i = 0; i < v.size(); ++i)
                next.segment(i * d, d) = v(i) * site_basis.col(tuple[static_cast<std::size_t>(t)]);
            v = std::move(next);
        }
        block_vectors[static_cast<std::size_t>(type_index[counts])].push_back(std::move(v));

        int pos = l - 1;
        while (pos >= 0) {
            if (++tuple[static_cast<std::size_t>(pos)] < d) break;
            tuple[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }

    for (std::size_t b = 0; b < types.size(); ++b) {
        double ev = 1.0;
        for (int c = 0; c < k; ++c) {
            std::int64_t cnt = types[b].counts[static_cast<std::size_t>(c)];
            if (cnt > 0) ev *= std::pow(sd.eigenvalues[static_cast<std::size_t>(c)], static_cast<double>(cnt));
        }
        Matrix basis(total, static_cast<Eigen::Index>(block_vectors[b].size()));
        for (std::size_t j = 0; j < block_vectors[b].size(); ++j)
            basis.col(static_cast<Eigen::Index>(j)) = block_vectors[b][j];
        out.blocks.push_back({types[b], ev, Projection(total, std::move(basis))});
    }
    return out;
}

Matrix pinch(const Matrix& a, const SpectralBlockStructure& s) {
    require(a.rows() == s.total_dim && a.cols() == s.total_dim, "pinch: dimension mismatch");
    Matrix out = Matrix::Zero(s.total_dim, s.total_dim);
    for (const auto& block : s.blocks) {
        const Matrix& b = block.projector.range_basis;
        if (b.cols() == 0) continue;
        out += b * (b.adjoint() * a * b) * b.adjoint();
    }
    return out;
}

double pinch_gain_bound(Eigen::Index site_dim, int l) {
    return static_cast<double>(site_dim) * std::log2(static_cast<double>(l) + 1.0);
}

bool AbelianAlgebra::is_maximal() const {
    for (const auto& p : minimal_projections)
        if (p.rank() != 1) return false;
    return true;
}

double AbelianAlgebra::resolution_residual() const {
    Matrix sum = Matrix::Zero(ambient_dim, ambient_dim);
    for (const auto& p : minimal_projections) sum += p.matrix();
    return (sum - Matrix::Identity(ambient_dim, ambient_dim)).cwiseAbs().maxCoeff();
}

AbelianAlgebra build_pinched_algebra(const DensityOperator& psi, const DensityOperator& phi,
                                     int l, double grouping_tol, Eigen::Index cap) {
    require(psi.dim() == phi.dim(), "build_pinched_algebra: dimension mismatch");
    SpectralBlockStructure blocks = build_spectral_blocks(phi, l, grouping_tol, cap);
    DensityOperator rho_l = tensor_power(psi, l, cap);

    AbelianAlgebra alg;
    alg.ambient_dim = blocks.total_dim;
    for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
        const Matrix& basis = blocks.blocks[b].projector.range_basis;
        const Eigen::Index r = basis.cols();
        if (r == 0) continue;
        Matrix compressed = basis.adjoint() * rho_l.matrix() * basis;
        Eigen::SelfAdjointEigenSolver<Matrix> es(compressed);
        require(es.info() == Eigen::Success, "build_pinched_algebra: eigensolver failed");

        // Walk descending and group eigenvalues within grouping_tol.
        std::vector<Eigen::Index> order;
        for (Eigen::Index i = r - 1; i >= 0; --i) order.push_back(i);
        std::size_t start = 0;
        int group = 0;
        while (start < order.size()) {
            std::size_t end = start + 1;
            while (end < order.size() &&
                   es.eigenvalues()(order[end - 1]) - es.eigenvalues()(order[end]) <= grouping_tol)
                ++end;
            Matrix w(r, static_cast<Eigen::Index>(end - start));
            for (std::size_t j = start; j < end; ++j)
                w.col(static_cast<Eigen::Index>(j - start)) = es.eigenvectors().col(order[j]);
            alg.minimal_projections.emplace_back(blocks.total_dim, basis * w);
            alg.labels.push_back({static_cast<int>(b), group, -1});
            ++group;
            start = end;
        }
    }
    return alg;
}

AbelianAlgebra refine_maximal_abelian(const AbelianAlgebra& alg) {
    AbelianAlgebra out;
    out.ambient_dim = alg.ambient_dim;
    for (std::size_t i = 0; i < alg.minimal_projections.size(); ++i) {
        const Matrix& basis = alg.minimal_projections[i].range_basis;
        for (Eigen::Index j = 0; j < basis.cols(); ++j) {
            CVector v = basis.col(j);
            for (Eigen::Index a = 0; a < v.size(); ++a) {
                if (std::abs(v(a)) > 1e-10) {
                    v *= std::conj(v(a)) / std::abs(v(a));
                    break;
                }
            }
            Matrix col(out.ambient_dim, 1);
            col.col(0) = v;
            out.minimal_projections.emplace_back(out.ambient_dim, std::move(col));
            MinimalProjectionLabel label = alg.labels[i];
            label.refinement_index = static_cast<int>(j);
            out.labels.push_back(label);
        }
    }
    return out;
}

Distribution restrict_state(const DensityOperator& d, const AbelianAlgebra& alg, double clean_tol) {
    require(d.dim() == alg.ambient_dim, "restrict_state: dimension mismatch");
    std::vector<double> probs;
    probs.reserve(alg.minimal_projections.size());
    double sum = 0.0;
    for (const auto& g : alg.minimal_projections) {
        double v = std::max(expectation(d, g), 0.0);
        if (v < clean_tol) v = 0.0;
        probs.push_back(v);
        sum += v;
    }
    require(std::abs(sum - 1.0) <= 1e-9, "restrict_state: restricted masses sum to " + std::to_string(sum));
    for (double& v : probs) v /= sum;
    return Distribution(std::move(probs));
}

HiaiPetzTerms hiai_petz_identity_terms(const DensityOperator& psi, const DensityOperator& phi,
                                       int l, double grouping_tol, Eigen::Index cap) {
    DensityOperator psi_l = tensor_power(psi, l, cap);
    DensityOperator phi_l = tensor_power(phi, l, cap);
    SpectralBlockStructure blocks = build_spectral_blocks(phi, l, grouping_tol, cap);
    AbelianAlgebra alg = build_pinched_algebra(psi, phi, l, grouping_tol, cap);

    HiaiPetzTerms out;
    out.support_ok = support_leq(psi_l, phi_l);

    // The reference tensor power is exactly sum_B mu_B e_B, so its logarithm
    // is evaluated through the block eigenvalues. Reading log mu off a dense
    // eigensolve instead would lose ~eps/mu relative accuracy on the small
    // blocks, far above the identity's 1e-8 residual budget.
    if (!out.support_ok) {
        out.lhs = kInf;
    } else {
        out.lhs = -von_neumann_entropy(psi_l);
        for (const auto& block : blocks.blocks) {
            double weight = expectation(psi_l, block.projector);
            if (block.eigenvalue > 0.0) {
                out.lhs -= weight * std::log2(block.eigenvalue);
            } else if (weight > 1e-8) {
                out.lhs = kInf;
                break;
            }
        }
    }

    // Classical restriction: psi side measured, reference side exact per letter.
    Distribution p_restricted = restrict_state(psi_l, alg);
    out.restricted_term = 0.0;
    for (std::size_t i = 0; i < alg.minimal_projections.size(); ++i) {
        double pi = p_restricted[static_cast<int>(i)];
        if (pi <= 0.0) continue;
        double qi = blocks.blocks[static_cast<std::size_t>(alg.labels[i].block)].eigenvalue *
                    static_cast<double>(alg.minimal_projections[i].rank());
        if (qi <= 0.0) {
            out.restricted_term = kInf;
            break;
        }
        out.restricted_term += pi * (std::log2(pi) - std::log2(qi));
    }
    out.restricted_term = std::max(out.restricted_term, 0.0);

    DensityOperator pinched = DensityOperator::unchecked(pinch(psi_l.matrix(), blocks));
    out.pinch_gain = von_neumann_entropy(pinched) - von_neumann_entropy(psi_l);
    if (out.support_ok && out.lhs < kInf && out.restricted_term < kInf)
        out.residual = std::abs(out.lhs - out.restricted_term - out.pinch_gain);
    else
        out.residual = 0.0;
    return out;
}

} // namespace sanovlab
