#include "sanovlab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sanovlab {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

Distribution::Distribution(std::vector<double> p) : probs(std::move(p)) {
    require(!probs.empty(), "Distribution: empty probability vector");
    double sum = 0.0;
    for (double x : probs) {
        require(x >= 0.0, "Distribution: negative entry");
        sum += x;
    }
    require(std::abs(sum - 1.0) <= 1e-12, "Distribution: entries sum to " + std::to_string(sum));
}

Distribution Distribution::bernoulli(double p) {
    require(p >= 0.0 && p <= 1.0, "bernoulli: parameter outside [0,1]");
    return Distribution({1.0 - p, p});
}

Distribution Distribution::uniform(int d) {
    require(d >= 1, "uniform: alphabet size must be positive");
    return Distribution(std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
}

double l1_distance(const Distribution& a, const Distribution& b) {
    require(a.size() == b.size(), "l1_distance: alphabet mismatch");
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

TypeVector::TypeVector(std::vector<std::int64_t> c, std::int64_t n_) : counts(std::move(c)), n(n_) {
    std::int64_t sum = 0;
    for (std::int64_t k : counts) {
        require(k >= 0, "TypeVector: negative count");
        sum += k;
    }
    require(sum == n, "TypeVector: counts do not sum to n");
}

Distribution TypeVector::empirical() const {
    require(n > 0, "TypeVector::empirical: n must be positive");
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
    return Distribution(std::move(p));
}

double rel_entropy(const Distribution& p, const Distribution& q) {
    require(p.size() == q.size(), "rel_entropy: alphabet mismatch");
    double h = 0.0;
    for (int a = 0; a < p.size(); ++a) {
        if (p[a] > 0.0) {
            if (q[a] <= 0.0) return kInf;
            h += p[a] * (std::log2(p[a]) - std::log2(q[a]));
        }
    }
    return std::max(h, 0.0);
}

double rel_entropy_distance(const std::vector<Distribution>& omega, const Distribution& q) {
    require(!omega.empty(), "rel_entropy_distance: empty set");
    double best = kInf;
    for (const auto& p : omega) best = std::min(best, rel_entropy(p, q));
    return best;
}

double type_count(std::int64_t n, int d) {
    return std::exp2(log2_binomial(n + d - 1, d - 1));
}

std::vector<TypeVector> enumerate_types(std::int64_t n, int d) {
    require(n >= 0, "enumerate_types: n must be nonnegative");
    require(d >= 1, "enumerate_types: alphabet size must be positive");
    double count = type_count(n, d);
    if (count > 5e6)
        throw std::runtime_error("enumerate_types: " + std::to_string(count) +
                                 " types exceed the enumeration limit");

    std::vector<TypeVector> out;
    out.reserve(static_cast<std::size_t>(count) + 1);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(d), 0);
    // Colexicographic order: counts of the last letters vary slowest.
    auto emit = [&](auto&& self, int letter, std::int64_t remaining) -> void {
        if (letter == 0) {
            counts[0] = remaining;
            out.emplace_back(counts, n);
            return;
        }
        for (std::int64_t k = 0; k <= remaining; ++k) {
            counts[static_cast<std::size_t>(letter)] = k;
            self(self, letter - 1, remaining - k);
        }
        counts[static_cast<std::size_t>(letter)] = 0;
    };
    emit(emit, d - 1, n);
    return out;
}

double log2_type_class_size(const TypeVector& t) {
    double s = log2_factorial(t.n);
    for (std::int64_t k : t.counts) s -= log2_factorial(k);
    return s;
}

double log2_type_class_prob(const Distribution& p, const TypeVector& t) {
    require(p.size() == t.alphabet_size(), "log2_type_class_prob: alphabet mismatch");
    double s = log2_type_class_size(t);
    for (int a = 0; a < p.size(); ++a) {
        std::int64_t k = t.counts[static_cast<std::size_t>(a)];
        if (k == 0) continue;
        if (p[a] <= 0.0) return -kInf;
        s += static_cast<double>(k) * std::log2(p[a]);
    }
    return s;
}

double min_rel_entropy_in_l1_ball(const Distribution& center, double eps, const Distribution& q) {
    require(center.size() == q.size(), "min_rel_entropy_in_l1_ball: alphabet mismatch");
    require(eps > 0.0, "min_rel_entropy_in_l1_ball: radius must be positive");
    require(rel_entropy(center, q) < kInf,
            "min_rel_entropy_in_l1_ball: center not absolutely continuous w.r.t. q");

    // Work on the positive-support letters of q only; the center has no mass
    // elsewhere and neither may the minimizer.
    std::vector<double> ps, qs;
    for (int a = 0; a < q.size(); ++a) {
        if (q[a] > 0.0) {
            ps.push_back(center[a]);
            qs.push_back(q[a]);
        }
    }
    const std::size_t m = qs.size();

    double dist_to_q = 0.0;
    for (std::size_t i = 0; i < m; ++i) dist_to_q += std::abs(ps[i] - qs[i]);
    if (dist_to_q <= eps) return 0.0;

    // KKT structure of min sum r ln(r/q) over the simplex intersected with the
    // l1-ball: r_i = clamp(p_i, [A q_i e^{-mu}, A q_i e^{mu}]) for multipliers
    // (A, mu). Inner bisection matches sum r = 1, outer matches the active
    // distance constraint.
    std::vector<double> r(m);
    auto fill_r = [&](double big_a, double mu) {
        double lo_f = std::exp(-mu), hi_f = std::exp(mu);
        for (std::size_t i = 0; i < m; ++i) {
            double lo = big_a * qs[i] * lo_f, hi = big_a * qs[i] * hi_f;
            r[i] = std::min(std::max(ps[i], lo), hi);
        }
    };
    auto solve_a = [&](double mu) {
        double lo = 0.0, hi = std::exp(mu) + 1.0;
        for (int it = 0; it < 120; ++it) {
            double mid = 0.5 * (lo + hi);
            fill_r(mid, mu);
            double total = 0.0;
            for (double x : r) total += x;
            (total < 1.0 ? lo : hi) = mid;
        }
        fill_r(hi, mu);
    };
    auto distance_at = [&](double mu) {
        solve_a(mu);
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::abs(r[i] - ps[i]);
        return s;
    };

    double mu_lo = 0.0, mu_hi = 80.0; // distance decreases as mu grows
    for (int it = 0; it < 120; ++it) {
        double mid = 0.5 * (mu_lo + mu_hi);
        (distance_at(mid) > eps ? mu_lo : mu_hi) = mid;
    }
    distance_at(mu_hi); // feasible endpoint

    double total = 0.0;
    for (double x : r) total += x;
    double h = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double ri = r[i] / total;
        if (ri > 0.0) h += ri * (std::log2(ri) - std::log2(qs[i]));
    }
    return std::max(h, 0.0);
}

TypicalSetSpec build_typical_sets(const std::vector<Distribution>& omega, const Distribution& q,
                                  std::int64_t n, double eps_n) {
    require(!omega.empty(), "build_typical_sets: empty omega");
    require(eps_n > 0.0, "build_typical_sets: eps_n must be positive");
    for (const auto& p : omega)
        require(p.size() == q.size(), "build_typical_sets: alphabet mismatch in omega");

    TypicalSetSpec spec;
    spec.n = n;
    spec.eps_n = eps_n;
    spec.alphabet = q.size();
    for (int a = 0; a < q.size(); ++a)
        if (q[a] > 0.0) spec.support_plus.push_back(a);

    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (rel_entropy(omega[i], q) < kInf)
            spec.omega1_indices.push_back(i);
        else
            spec.omega2_indices.push_back(i);
    }

    std::vector<bool> in_aplus(static_cast<std::size_t>(q.size()), false);
    for (int a : spec.support_plus) in_aplus[static_cast<std::size_t>(a)] = true;

    for (auto& t : enumerate_types(n, q.size())) {
        bool supported_in_aplus = true;
        bool touches_null_letter = false;
        for (int a = 0; a < q.size(); ++a) {
            if (t.counts[static_cast<std::size_t>(a)] > 0 && !in_aplus[static_cast<std::size_t>(a)]) {
                supported_in_aplus = false;
                touches_null_letter = true;
            }
        }
        if (supported_in_aplus && n > 0) {
            Distribution emp = t.empirical();
            for (std::size_t i : spec.omega1_indices) {
                if (l1_distance(emp, omega[i]) <= eps_n) {
                    spec.member_types.push_back(t);
                    break;
                }
            }
        } else if (touches_null_letter) {
            for (std::size_t i : spec.omega2_indices) {
                bool inside_support = true;
                for (int a = 0; a < q.size(); ++a) {
                    if (t.counts[static_cast<std::size_t>(a)] > 0 && omega[i][a] <= 0.0) {
                        inside_support = false;
                        break;
                    }
                }
                if (inside_support) {
                    spec.null_types.push_back(t);
                    break;
                }
            }
        }
    }
    return spec;
}

double log2_measure_of_typical_set(const Distribution& p, const TypicalSetSpec& spec) {
    require(p.size() == spec.alphabet, "measure_of_typical_set: alphabet mismatch");
    Log2Accumulator acc;
    for (const auto& t : spec.member_types) acc.add(log2_type_class_prob(p, t));
    for (const auto& t : spec.null_types) acc.add(log2_type_class_prob(p, t));
    return acc.log2_total();
}

double measure_of_typical_set(const Distribution& p, const TypicalSetSpec& spec) {
    double v = std::exp2(log2_measure_of_typical_set(p, spec));
    return std::min(v, 1.0);
}

double PowerLawSchedule::eps(std::int64_t n) const {
    return c * std::pow(static_cast<double>(n), -alpha);
}

void PowerLawSchedule::validate() const {
    if (!(c > 0.0))
        throw std::invalid_argument("eps schedule: scale must be positive");
    if (!(alpha > 0.0) || !(alpha < 0.5))
        throw std::invalid_argument(
            "eps schedule: exponent must lie in (0, 1/2) so that eps_n -> 0 and "
            "log(n+1)/(n eps_n^2) -> 0");
}

std::vector<RatePoint> classical_sanov_experiment(const std::vector<Distribution>& omega,
                                                  const Distribution& q,
                                                  const std::vector<std::int64_t>& n_list,
                                                  const PowerLawSchedule& schedule, int threads) {
    schedule.validate();
    require(!n_list.empty(), "classical_sanov_experiment: empty n_list");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        require(n_list[i] >= 1, "classical_sanov_experiment: n must be positive");
        if (i > 0) require(n_list[i] > n_list[i - 1], "classical_sanov_experiment: n_list must increase");
    }

    const int d = q.size();
    double q_min = kInf;
    for (int a = 0; a < d; ++a)
        if (q[a] > 0.0) q_min = std::min(q_min, q[a]);
    const double h_omega_q = rel_entropy_distance(omega, q);

    auto compute_point = [&](std::int64_t n) {
        RatePoint pt;
        pt.n = n;
        pt.eps_n = schedule.eps(n);
        TypicalSetSpec spec = build_typical_sets(omega, q, n, pt.eps_n);

        pt.log2_q_measure = log2_measure_of_typical_set(q, spec);
        for (const auto& p : omega) pt.p_measures.push_back(measure_of_typical_set(p, spec));

        pt.exponent = kInf;
        for (std::size_t i : spec.omega1_indices)
            pt.exponent = std::min(pt.exponent, min_rel_entropy_in_l1_ball(omega[i], pt.eps_n, q));
        pt.divergence = h_omega_q;
        pt.slack_bound = pt.eps_n * (std::log2(static_cast<double>(d)) - std::log2(pt.eps_n) -
                                     std::log2(q_min));

        if (pt.exponent == kInf) {
            pt.exponent_upper_ok = (pt.log2_q_measure == -kInf);
        } else {
            pt.exponent_upper_ok =
                pt.log2_q_measure <=
                d * std::log2(static_cast<double>(n) + 1.0) - static_cast<double>(n) * pt.exponent + 1e-9;
        }
        if (h_omega_q == kInf || pt.eps_n > 0.5) {
            pt.slack_ok = true; // gap bound only asserted for eps_n <= 1/2
        } else {
            double gap = h_omega_q - pt.exponent;
            pt.slack_ok = gap >= -1e-9 && gap <= pt.slack_bound + 1e-9;
        }
        return pt;
    };

    std::vector<RatePoint> out = map_over_n(n_list, compute_point, threads);
    double prev_exponent = -kInf;
    for (RatePoint& pt : out) {
        pt.monotone_ok = pt.exponent >= prev_exponent - 1e-9;
        prev_exponent = pt.exponent;
    }
    return out;
}

} // namespace sanovlab
