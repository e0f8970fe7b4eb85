#pragma once

// Finite-alphabet large-deviation machinery: relative entropy, the method of
// types, and exact product-measure evaluation of the explicit typical sets
// used in the separating-set construction.

#include <cstdint>
#include <vector>

#include "sanovlab/mathutil.hpp"

namespace sanovlab {

// Probability vector over a finite alphabet {0, ..., d-1}.
struct Distribution {
    std::vector<double> probs;

    Distribution() = default;
    explicit Distribution(std::vector<double> p);

    int size() const { return static_cast<int>(probs.size()); }
    double operator[](int a) const { return probs[static_cast<std::size_t>(a)]; }

    // Two-letter distribution (1-p, p); letter 1 carries mass p.
    static Distribution bernoulli(double p);
    static Distribution uniform(int d);
};

double l1_distance(const Distribution& a, const Distribution& b);

// Letter counts (l_1, ..., l_d) of a length-n word.
struct TypeVector {
    std::vector<std::int64_t> counts;
    std::int64_t n = 0;

    TypeVector() = default;
    TypeVector(std::vector<std::int64_t> c, std::int64_t n_);

    int alphabet_size() const { return static_cast<int>(counts.size()); }
    Distribution empirical() const;
};

// Relative entropy H(P,Q) in bits; +inf when P is not absolutely continuous
// with respect to Q.
double rel_entropy(const Distribution& p, const Distribution& q);

// min_{P in omega} H(P,Q) over a finite set; +inf iff every member violates
// absolute continuity.
double rel_entropy_distance(const std::vector<Distribution>& omega, const Distribution& q);

// All compositions of n into d nonnegative parts, in colexicographic order of
// the count vector (last letter's count varies slowest). Count is
// C(n+d-1, d-1).
std::vector<TypeVector> enumerate_types(std::int64_t n, int d);

// Number of types, C(n+d-1, d-1), as a double.
double type_count(std::int64_t n, int d);

// log2 of the multinomial coefficient n!/(l_1! ... l_d!).
double log2_type_class_size(const TypeVector& t);

// log2 of p^n(type class of t); -inf when some positive count sits on a
// p-null letter.
double log2_type_class_prob(const Distribution& p, const TypeVector& t);

// Exact minimum of H(R,Q) over the l1-ball {R in P(A_+): ||R - center||_1 <= eps}.
// center must be absolutely continuous with respect to q. Solved through the
// KKT clamp structure of the convex program with nested bisection.
double min_rel_entropy_in_l1_ball(const Distribution& center, double eps, const Distribution& q);

// The explicit per-n set M_n = M_{1,n} u M_{2,n}, held at the type level.
struct TypicalSetSpec {
    std::int64_t n = 0;
    double eps_n = 0.0;
    int alphabet = 0;
    std::vector<int> support_plus;            // letters with Q > 0
    std::vector<TypeVector> member_types;     // M_{1,n}: supported in A_+, within eps of omega_1
    std::vector<TypeVector> null_types;       // M_{2,n}: touch a Q-null letter, inside some omega_2 support
    std::vector<std::size_t> omega1_indices;  // members of omega with H(P,Q) < inf
    std::vector<std::size_t> omega2_indices;
};

TypicalSetSpec build_typical_sets(const std::vector<Distribution>& omega, const Distribution& q,
                                  std::int64_t n, double eps_n);

// Exact p^n(M_n) via type sums, accumulated in log space.
double log2_measure_of_typical_set(const Distribution& p, const TypicalSetSpec& spec);
double measure_of_typical_set(const Distribution& p, const TypicalSetSpec& spec);

// eps_n = c * n^{-alpha}. Valid when c > 0 and 0 < alpha < 1/2, which gives
// eps_n -> 0 and log(n+1)/(n eps_n^2) -> 0.
struct PowerLawSchedule {
    double c = 1.0;
    double alpha = 1.0 / 3.0;

    double eps(std::int64_t n) const;
    void validate() const; // throws std::invalid_argument on a bad schedule
};

// Per-n record of an experiment run.
struct RatePoint {
    std::int64_t n = 0;
    double eps_n = 0.0;
    double log2_q_measure = -kInf;      // log2 Q^n(M_n)
    std::vector<double> p_measures;     // P^n(M_n) per omega member
    double exponent = 0.0;              // I_n = H(Omega_n, Q) over the eps_n-blowup of the grid
    double slack_bound = 0.0;           // right side of the finite-n exponent gap bound
    double divergence = 0.0;            // H(Omega, Q) over the grid
    bool exponent_upper_ok = false;     // Q^n(M_n) <= (n+1)^{#A} 2^{-n I_n}
    bool slack_ok = false;              // 0 <= H(Omega,Q) - I_n <= slack_bound (when eps_n <= 1/2)
    bool monotone_ok = false;           // I_n >= previous I_n
};

// Runs the construction for every n in n_list: exact Q^n(M_n) and P^n(M_n),
// the exponent I_n, and the per-n inequality checks. Rows for distinct n are
// independent and are fanned out over `threads` when threads > 1.
std::vector<RatePoint> classical_sanov_experiment(const std::vector<Distribution>& omega,
                                                  const Distribution& q,
                                                  const std::vector<std::int64_t>& n_list,
                                                  const PowerLawSchedule& schedule,
                                                  int threads = 1);

} // namespace sanovlab
