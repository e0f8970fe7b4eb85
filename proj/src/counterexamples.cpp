#include "sanovlab/counterexamples.hpp"

#include <cmath>
#include <stdexcept>

namespace sanovlab {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

constexpr double kHalfPi = 1.5707963267948966;

} // namespace

EmpiricalStateRate empirical_state_rate(double overlap_sq, double delta, int n) {
    require(overlap_sq > 0.0 && overlap_sq < 1.0, "empirical_state_rate: overlap_sq must lie in (0,1)");
    require(delta >= 0.0 && delta <= 1.0, "empirical_state_rate: delta must lie in [0,1]");
    require(n >= 1, "empirical_state_rate: n must be positive");
    double base = delta + (1.0 - delta) * overlap_sq;
    EmpiricalStateRate out;
    out.value = std::pow(base, n);
    out.rate = -std::log2(base);
    out.ceiling = -std::log2(overlap_sq);
    return out;
}

OrthocomplementSeparation orthocomplement_separation(const CVector& v, const CVector& w, int n) {
    require(std::abs(v.norm() - 1.0) <= 1e-12, "orthocomplement_separation: v is not a unit vector");
    require(std::abs(w.norm() - 1.0) <= 1e-12, "orthocomplement_separation: w is not a unit vector");
    require(n >= 1, "orthocomplement_separation: n must be positive");
    OrthocomplementSeparation out;
    out.phi_val = 0.0;
    double overlap_sq = std::norm(v.dot(w));
    out.psi_val = 1.0 - std::pow(overlap_sq, n);
    return out;
}

SymBasisCoeffs sym_basis_coeffs(int n, double t) {
    require(n >= 1, "sym_basis_coeffs: n must be positive");
    require(std::abs(t) < kHalfPi, "sym_basis_coeffs: |t| must be below pi/2");
    SymBasisCoeffs out;
    out.n = n;
    out.t = t;
    out.coeffs.resize(static_cast<std::size_t>(n) + 1);
    double s = std::sin(t), c = std::cos(t);
    for (int k = 0; k <= n; ++k) {
        double root_binom = std::sqrt(std::exp2(log2_binomial(n, k)));
        out.coeffs[static_cast<std::size_t>(k)] = root_binom * std::pow(s, k) * std::pow(c, n - k);
    }
    return out;
}

VandermondeSigma vandermondeSigma_impl(int n) {
    Eigen::MatrixXd v(n + 1, n + 1);
    for (int m = 0; m <= n; ++m) {
        double node = 1.0 - 2.0 * static_cast<double>(m) / static_cast<double>(n);
        double p = 1.0;
        for (int k = 0; k <= n; ++k) {
            v(m, k) = p;
            p *= node;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
    VandermondeSigma out;
    out.sigma_min = svd.singularValues()(n);
    out.per_n_log_nat = std::log(out.sigma_min) / static_cast<double>(n);
    return out;
}

VandermondeSigma vandermonde_sigma_min(int n) {
    require(n % 2 == 1, "vandermonde_sigma_min: n must be odd");
    require(n >= 1 && n <= 25, "vandermonde_sigma_min: n must lie in [1,25]");
    return vandermondeSigma_impl(n);
}

OverlapFloor uniform_overlap_floor(int n, double big_t, const std::vector<double>& x) {
    require(big_t > 0.0 && big_t < kHalfPi, "uniform_overlap_floor: T must lie in (0, pi/2)");
    require(static_cast<int>(x.size()) == n + 1, "uniform_overlap_floor: x must have n+1 entries");
    double norm_sq = 0.0;
    for (double v : x) norm_sq += v * v;
    require(std::abs(norm_sq - 1.0) <= 1e-10, "uniform_overlap_floor: x must be a unit vector");

    OverlapFloor out;
    double tan_t = std::tan(big_t);
    for (int m = 0; m <= n; ++m) {
        double node = 1.0 - 2.0 * static_cast<double>(m) / static_cast<double>(n);
        double t_m = std::atan(node * tan_t);
        SymBasisCoeffs coeffs = sym_basis_coeffs(n, t_m);
        double inner = 0.0;
        for (int k = 0; k <= n; ++k)
            inner += x[static_cast<std::size_t>(k)] * coeffs.coeffs[static_cast<std::size_t>(k)];
        out.max_overlap = std::max(out.max_overlap, std::abs(inner));
    }

    double min_binom_factor = kInf;
    for (int k = 0; k <= n; ++k) {
        double f = std::sqrt(std::exp2(log2_binomial(n, k))) * std::pow(tan_t, k);
        min_binom_factor = std::min(min_binom_factor, f);
    }
    double sigma_min = vandermonde_sigma_min(n).sigma_min;
    out.certified_floor = std::pow(std::cos(big_t), n) * min_binom_factor * sigma_min /
                          std::sqrt(static_cast<double>(n) + 1.0);
    return out;
}

} // namespace sanovlab
