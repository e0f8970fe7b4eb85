#pragma once

// Finite-dimensional density-operator algebra: spectra, supports, entropies,
// relative entropy, tensor powers, and expectations of projections.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sanovlab/mathutil.hpp"

namespace sanovlab {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Eigen::Index kDefaultDimCap = 4096;

// Raised when a tensor power or dense construction would exceed the
// configured Hilbert-space dimension cap.
struct CapExceeded : std::runtime_error {
    long long required_dim;
    explicit CapExceeded(long long required)
        : std::runtime_error("dimension cap exceeded; required cap " + std::to_string(required)),
          required_dim(required) {}
};

// Orthogonal projection stored as an orthonormal basis of its range.
struct Projection {
    Eigen::Index ambient_dim = 0;
    Matrix range_basis; // ambient_dim x rank, orthonormal columns

    Projection() = default;
    Projection(Eigen::Index dim, Matrix basis);

    Eigen::Index rank() const { return range_basis.cols(); }
    Matrix matrix() const; // range_basis * range_basis^dagger
    double orthonormality_residual() const;

    static Projection identity(Eigen::Index dim);
    static Projection zero(Eigen::Index dim);
    static Projection onto_vector(const CVector& v); // normalizes
};

// Hermitian positive semidefinite trace-one matrix.
class DensityOperator {
  public:
    explicit DensityOperator(Matrix m); // validates Hermiticity, PSD, unit trace

    const Matrix& matrix() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }

    static DensityOperator pure(const CVector& v);
    static DensityOperator diagonal(const std::vector<double>& probs);
    static DensityOperator from_bloch(double x, double y, double z);
    static DensityOperator maximally_mixed(Eigen::Index dim);

    // Trusted constructor for matrices PSD by construction (tensor powers,
    // pinchings); skips the eigenvalue check, keeps the cheap ones.
    static DensityOperator unchecked(Matrix m);

  private:
    struct unchecked_tag {};
    DensityOperator(Matrix m, unchecked_tag);
    Matrix mat_;
};

// Distinct eigenvalues (descending) with their spectral projections.
// Eigenvalues closer than grouping_tol share one projector; spectral dust
// below 1e-12 in absolute value is floored to exactly zero.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<Projection> projectors;
    double grouping_tol = 0.0;
};

SpectralDecomposition spectral_decomposition(const DensityOperator& d, double grouping_tol = 1e-9);

// Projector onto the span of eigenvectors with eigenvalue > tol.
Projection support_projection(const DensityOperator& d, double tol = 1e-10);

// -sum lambda log2 lambda, in bits.
double von_neumann_entropy(const DensityOperator& d);

// Range inclusion supp(psi) <= supp(phi), tested as ||(1 - P_phi) P_psi|| <= tol.
bool support_leq(const DensityOperator& psi, const DensityOperator& phi, double tol = 1e-8);

// Umegaki relative entropy in bits; +inf iff the support inclusion fails.
double quantum_rel_entropy(const DensityOperator& psi, const DensityOperator& phi);

struct RelEntropyArgMin {
    double value = kInf;
    std::size_t index = 0;
};

// Minimum of quantum_rel_entropy over a finite set, with the argmin.
RelEntropyArgMin quantum_rel_entropy_distance(const std::vector<DensityOperator>& psi_set,
                                              const DensityOperator& phi);

Matrix kron(const Matrix& a, const Matrix& b);

DensityOperator tensor_power(const DensityOperator& d, int n, Eigen::Index cap = kDefaultDimCap);

// tr(D p), evaluated column-by-column on the range basis; clamped to [0,1].
double expectation(const DensityOperator& d, const Projection& p);

} // namespace sanovlab
