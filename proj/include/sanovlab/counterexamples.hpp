#pragma once

// Two boundary phenomena, reproduced numerically: the separation-rate ceiling
// of empirical-state typical projectors against a mixed reference, and the
// impossibility of a reference-independent separating projector, certified
// through the least singular value of a Vandermonde matrix.

#include <vector>

#include "sanovlab/quantum.hpp"

namespace sanovlab {

struct EmpiricalStateRate {
    double value = 0.0;   // (delta + (1-delta) overlap_sq)^n
    double rate = 0.0;    // -(1/n) log2 value
    double ceiling = 0.0; // -log2 overlap_sq
};

// Expectation of the n-fold empirical-state projector under the mixed
// reference (1-delta) p_v + delta p_w, in closed form.
EmpiricalStateRate empirical_state_rate(double overlap_sq, double delta, int n);

struct OrthocomplementSeparation {
    double phi_val = 0.0; // identically zero for the pure reference
    double psi_val = 0.0; // 1 - |<v,w>|^{2n}
};

OrthocomplementSeparation orthocomplement_separation(const CVector& v, const CVector& w, int n);

// Coefficients of (cos t * v + sin t * w)^{(x)n} in the symmetric-subspace
// basis: entry k is C(n,k)^{1/2} (sin t)^k (cos t)^{n-k}.
struct SymBasisCoeffs {
    int n = 0;
    double t = 0.0;
    std::vector<double> coeffs;
};

SymBasisCoeffs sym_basis_coeffs(int n, double t);

struct VandermondeSigma {
    double sigma_min = 0.0;
    double per_n_log_nat = 0.0; // ln(sigma_min) / n
};

// Least singular value of the (n+1)x(n+1) Vandermonde matrix with nodes
// 1 - 2m/n. n must be odd and at most 25 (conditioning limit).
VandermondeSigma vandermonde_sigma_min(int n);

struct OverlapFloor {
    double max_overlap = 0.0;     // max_m |<x, coeffs(t_m)>| over the node angles
    double certified_floor = 0.0; // (cos T)^n * min_k C(n,k)^{1/2} (tan T)^k * sigma_min / sqrt(n+1)
};

// For any unit coefficient vector x, the largest overlap with the node-family
// power vectors cannot drop below the certified floor, which decays at most
// exponentially in n.
OverlapFloor uniform_overlap_floor(int n, double big_t, const std::vector<double>& x);

} // namespace sanovlab
