#include "sanovlab/quantum.hpp"

#include <algorithm>
#include <cmath>

namespace sanovlab {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

double hermiticity_residual(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Eigenvalues below this magnitude are treated as exact zeros of the state.
constexpr double kSpectralFloor = 1e-12;

} // namespace

Projection::Projection(Eigen::Index dim, Matrix basis) : ambient_dim(dim), range_basis(std::move(basis)) {
    require(ambient_dim >= 1, "Projection: ambient dimension must be positive");
    require(range_basis.rows() == ambient_dim || range_basis.size() == 0,
            "Projection: basis rows must match ambient dimension");
    if (range_basis.size() == 0) range_basis.resize(ambient_dim, 0);
}

Matrix Projection::matrix() const {
    if (rank() == 0) return Matrix::Zero(ambient_dim, ambient_dim);
    return range_basis * range_basis.adjoint();
}

double Projection::orthonormality_residual() const {
    if (rank() == 0) return 0.0;
    Matrix g = range_basis.adjoint() * range_basis;
    return (g - Matrix::Identity(rank(), rank())).cwiseAbs().maxCoeff();
}

Projection Projection::identity(Eigen::Index dim) {
    return Projection(dim, Matrix::Identity(dim, dim));
}

Projection Projection::zero(Eigen::Index dim) {
    return Projection(dim, Matrix(dim, 0));
}

Projection Projection::onto_vector(const CVector& v) {
    double norm = v.norm();
    require(norm > 1e-14, "Projection::onto_vector: zero vector");
    Matrix b(v.size(), 1);
    b.col(0) = v / norm;
    return Projection(v.size(), std::move(b));
}

DensityOperator::DensityOperator(Matrix m) : mat_(std::move(m)) {
    require(mat_.rows() == mat_.cols() && mat_.rows() >= 1, "DensityOperator: matrix must be square");
    require(hermiticity_residual(mat_) <= 1e-10, "DensityOperator: matrix not Hermitian");
    require(std::abs(mat_.trace().real() - 1.0) <= 1e-10 && std::abs(mat_.trace().imag()) <= 1e-10,
            "DensityOperator: trace must be 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -1e-10,
            "DensityOperator: negative eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
}

DensityOperator::DensityOperator(Matrix m, unchecked_tag) : mat_(std::move(m)) {
    require(mat_.rows() == mat_.cols() && mat_.rows() >= 1, "DensityOperator: matrix must be square");
    require(hermiticity_residual(mat_) <= 1e-9, "DensityOperator: matrix not Hermitian");
    require(std::abs(mat_.trace().real() - 1.0) <= 1e-9, "DensityOperator: trace must be 1");
}

DensityOperator DensityOperator::unchecked(Matrix m) {
    return DensityOperator(std::move(m), unchecked_tag{});
}

DensityOperator DensityOperator::pure(const CVector& v) {
    double norm = v.norm();
    require(norm > 1e-14, "DensityOperator::pure: zero vector");
    CVector u = v / norm;
    return DensityOperator(u * u.adjoint());
}

DensityOperator DensityOperator::diagonal(const std::vector<double>& probs) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(probs.size()),
                            static_cast<Eigen::Index>(probs.size()));
    for (std::size_t i = 0; i < probs.size(); ++i) m(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(i)) = probs[i];
    return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::from_bloch(double x, double y, double z) {
    double norm = std::sqrt(x * x + y * y + z * z);
    require(norm <= 1.0 + 1e-12, "from_bloch: vector norm exceeds 1");
    Matrix m(2, 2);
    m(0, 0) = Cplx(0.5 * (1.0 + z), 0.0);
    m(1, 1) = Cplx(0.5 * (1.0 - z), 0.0);
    m(0, 1) = Cplx(0.5 * x, -0.5 * y);
    m(1, 0) = Cplx(0.5 * x, 0.5 * y);
    return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
    require(dim >= 1, "maximally_mixed: dimension must be positive");
    return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

SpectralDecomposition spectral_decomposition(const DensityOperator& d, double grouping_tol) {
    require(grouping_tol > 0.0, "spectral_decomposition: grouping tolerance must be positive");
    Eigen::SelfAdjointEigenSolver<Matrix> es(d.matrix());
    require(es.info() == Eigen::Success, "spectral_decomposition: eigensolver failed");

    // Eigen returns ascending order; walk descending and split on gaps.
    const Eigen::Index n = d.dim();
    std::vector<std::pair<double, Eigen::Index>> eigs; // (value, column)
    for (Eigen::Index i = n - 1; i >= 0; --i) eigs.emplace_back(es.eigenvalues()(i), i);

    SpectralDecomposition out;
    out.grouping_tol = grouping_tol;
    std::size_t start = 0;
    while (start < eigs.size()) {
        std::size_t end = start + 1;
        while (end < eigs.size() && eigs[end - 1].first - eigs[end].first <= grouping_tol) ++end;
        Matrix basis(n, static_cast<Eigen::Index>(end - start));
        double mean = 0.0;
        for (std::size_t j = start; j < end; ++j) {
            basis.col(static_cast<Eigen::Index>(j - start)) = es.eigenvectors().col(eigs[j].second);
            mean += eigs[j].first;
        }
        mean /= static_cast<double>(end - start);
        if (std::abs(mean) <= kSpectralFloor) mean = 0.0;
        out.eigenvalues.push_back(mean);
        out.projectors.emplace_back(n, std::move(basis));
        start = end;
    }
    return out;
}

Projection support_projection(const DensityOperator& d, double tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(d.matrix());
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < d.dim(); ++i)
        if (es.eigenvalues()(i) > tol) keep.push_back(i);
    Matrix basis(d.dim(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        basis.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
    return Projection(d.dim(), std::move(basis));
}

double von_neumann_entropy(const DensityOperator& d) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(d.matrix(), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < d.dim(); ++i) s -= xlog2x(std::max(es.eigenvalues()(i), 0.0));
    return std::max(s, 0.0);
}

bool support_leq(const DensityOperator& psi, const DensityOperator& phi, double tol) {
    require(psi.dim() == phi.dim(), "support_leq: dimension mismatch");
    Projection p_psi = support_projection(psi);
    Projection p_phi = support_projection(phi);
    if (p_psi.rank() == 0) return true;
    if (p_phi.rank() == p_phi.ambient_dim) return true;
    // ||(1 - P_phi) P_psi|| equals the largest singular value of the basis
    // product after removing the P_phi component.
    Matrix residual = p_psi.range_basis - p_phi.range_basis * (p_phi.range_basis.adjoint() * p_psi.range_basis);
    Eigen::JacobiSVD<Matrix> svd(residual);
    return svd.singularValues().size() == 0 || svd.singularValues()(0) <= tol;
}

double quantum_rel_entropy(const DensityOperator& psi, const DensityOperator& phi) {
    require(psi.dim() == phi.dim(), "quantum_rel_entropy: dimension mismatch");
    if (!support_leq(psi, phi)) return kInf;

    Eigen::SelfAdjointEigenSolver<Matrix> es_psi(psi.matrix());
    Eigen::SelfAdjointEigenSolver<Matrix> es_phi(phi.matrix());

    double s = 0.0;
    for (Eigen::Index i = 0; i < psi.dim(); ++i)
        s += xlog2x(std::max(es_psi.eigenvalues()(i), 0.0));

    // -tr(D_psi log D_phi), evaluated on the support eigenbasis of phi.
    for (Eigen::Index j = 0; j < phi.dim(); ++j) {
        double mu = es_phi.eigenvalues()(j);
        if (mu <= kSpectralFloor * 10) continue;
        double weight = (es_phi.eigenvectors().col(j).adjoint() * psi.matrix() *
                         es_phi.eigenvectors().col(j))(0, 0).real();
        s -= std::max(weight, 0.0) * std::log2(mu);
    }
    return std::max(s, 0.0);
}

RelEntropyArgMin quantum_rel_entropy_distance(const std::vector<DensityOperator>& psi_set,
                                              const DensityOperator& phi) {
    require(!psi_set.empty(), "quantum_rel_entropy_distance: empty set");
    RelEntropyArgMin best;
    for (std::size_t i = 0; i < psi_set.size(); ++i) {
        double v = quantum_rel_entropy(psi_set[i], phi);
        if (v < best.value) {
            best.value = v;
            best.index = i;
        }
    }
    return best;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

DensityOperator tensor_power(const DensityOperator& d, int n, Eigen::Index cap) {
    require(n >= 1, "tensor_power: n must be positive");
    double required = std::pow(static_cast<double>(d.dim()), n);
    if (required > static_cast<double>(cap)) throw CapExceeded(static_cast<long long>(required));
    Matrix out = d.matrix();
    for (int k = 1; k < n; ++k) out = kron(out, d.matrix());
    return DensityOperator::unchecked(std::move(out));
}

double expectation(const DensityOperator& d, const Projection& p) {
    require(d.dim() == p.ambient_dim, "expectation: dimension mismatch");
    double v = 0.0;
    for (Eigen::Index j = 0; j < p.rank(); ++j) {
        v += (p.range_basis.col(j).adjoint() * d.matrix() * p.range_basis.col(j))(0, 0).real();
    }
    return std::clamp(v, 0.0, 1.0);
}

} // namespace sanovlab
