#include "sanovlab/runner.hpp"

#include <cmath>
#include <random>

#include "sanovlab/block_algebras.hpp"
#include "sanovlab/counterexamples.hpp"
#include "sanovlab/separating.hpp"

namespace sanovlab {

namespace {

constexpr double kPinskerB = 1.0 / (2.0 * kLn2);
constexpr double kSigmaDecayNat = -(0.7853981633974483 + 0.5 * kLn2); // -(pi/4 + ln2/2)

// Deterministic uniform/normal variates from raw mt19937_64 output, so reports
// do not depend on the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    double normal() {
        double u = 0.0;
        while (u <= 1e-300) u = uniform();
        double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
    }
    DensityOperator random_qubit() {
        Matrix g(2, 2);
        for (Eigen::Index i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j < 2; ++j) g(i, j) = Cplx(normal(), normal());
        Matrix m = g * g.adjoint();
        m /= m.trace().real();
        return DensityOperator((m + m.adjoint()) / 2.0);
    }

  private:
    std::mt19937_64 engine_;
};

ExperimentReport run_classical(const ExperimentConfig& cfg, int threads) {
    ExperimentReport report;
    report.config_echo = cfg.echo;
    const Distribution& q = *cfg.q;
    const int d = q.size();

    std::vector<RatePoint> points =
        classical_sanov_experiment(cfg.omega, q, cfg.n_list, cfg.schedule, threads);

    for (const RatePoint& pt : points) {
        double bound = pt.exponent == kInf
                           ? -kInf
                           : d * std::log2(static_cast<double>(pt.n) + 1.0) / static_cast<double>(pt.n) -
                                 pt.exponent;
        bool nonneg = pt.exponent >= -1e-12;
        bool pass = pt.exponent_upper_ok && pt.slack_ok && pt.monotone_ok && nonneg;
        double exponent = pt.log2_q_measure == -kInf ? -kInf
                                                     : pt.log2_q_measure / static_cast<double>(pt.n);

        report.add_check("type_count_exponent_bound", pt.n, exponent, bound, pt.exponent_upper_ok);
        report.add_check("exponent_gap_bound", pt.n,
                         pt.divergence == kInf ? 0.0 : pt.divergence - pt.exponent, pt.slack_bound,
                         pt.slack_ok);
        report.add_check("exponent_nonnegative", pt.n, -pt.exponent, 0.0, nonneg);
        report.add_check("exponent_monotone", pt.n, 0.0, 0.0, pt.monotone_ok);

        nlohmann::json extra{{"eps_n", pt.eps_n},
                             {"exponent_I_n", json_number(pt.exponent)},
                             {"divergence", json_number(pt.divergence)},
                             {"p_measures", pt.p_measures}};
        report.rows.push_back({pt.n, std::exp2(pt.log2_q_measure), exponent, bound, pass, extra});
        if (!pass) report.all_pass = false;
    }

    // Concentration threshold N(P) per member: first n from which the
    // type-counting tail bound holds through the end of the list.
    nlohmann::json thresholds = nlohmann::json::array();
    for (std::size_t s = 0; s < cfg.omega.size(); ++s) {
        std::ptrdiff_t first_ok = -1;
        for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(points.size()) - 1; i >= 0; --i) {
            const RatePoint& pt = points[static_cast<std::size_t>(i)];
            double tail_bound = std::exp2(d * std::log2(static_cast<double>(pt.n) + 1.0) -
                                          static_cast<double>(pt.n) * kPinskerB * pt.eps_n * pt.eps_n);
            if (1.0 - pt.p_measures[s] <= tail_bound + 1e-12)
                first_ok = i;
            else
                break;
        }
        bool found = first_ok >= 0;
        thresholds.push_back({{"member", s},
                              {"N", found ? nlohmann::json(points[static_cast<std::size_t>(first_ok)].n)
                                          : nlohmann::json(nullptr)}});
        report.add_check("p_concentration_threshold", found ? points[static_cast<std::size_t>(first_ok)].n : -1,
                         0.0, 0.0, found);
    }

    report.summary = {{"divergence", json_number(points.front().divergence)},
                      {"final_rate", json_number(points.back().log2_q_measure == -kInf
                                                     ? kInf
                                                     : -points.back().log2_q_measure /
                                                           static_cast<double>(points.back().n))},
                      {"concentration_thresholds", thresholds}};
    return report;
}

ExperimentReport run_quantum(const ExperimentConfig& cfg, int threads) {
    ExperimentReport report;
    report.config_echo = cfg.echo;
    QuantumSanovReport qr =
        quantum_sanov_experiment(cfg.psi_set, *cfg.phi, cfg.l, cfg.n_list, cfg.schedule,
                                 cfg.grouping_tol, cfg.cap, threads, cfg.delta);
    if (cfg.delta < kInf)
        report.add_check("eta_l_within_delta", cfg.l, qr.eta_l, cfg.delta, qr.eta_within_delta);

    for (const QuantumSanovRow& row : qr.rows) {
        // The per-n pass flags cover the proof's finite-n inequalities; the
        // upward trend of the psi expectations is a limit statement and is
        // reported through the per-row values instead.
        bool pass = row.chain_ok && row.lifted_classical_ok && row.sym_rank_ok &&
                    row.u_invariance_ok && row.psi_estimate_ok;
        report.add_check("rate_chain_mid", row.n, row.empirical_exponent, row.mid_bound, row.chain_ok);
        report.add_check("rate_chain_final", row.n, row.mid_bound, row.final_bound, row.chain_ok);
        report.add_check("lifted_classical_bounds", row.n, row.exponent_lower, row.slack_bound,
                         row.lifted_classical_ok);
        report.add_check("symmetrized_rank_bound", row.n, row.log2_rank_joined,
                         std::pow(static_cast<double>(qr.site_dim), 2 * qr.l) *
                                 std::log2(static_cast<double>(row.n) + 1.0) +
                             row.log2_rank_lifted,
                         row.sym_rank_ok);
        report.add_check("phi_u_invariance", row.n, 0.0, 1e-9, row.u_invariance_ok);
        report.add_check("psi_join_dominates_member", row.n, 0.0, 0.0, row.psi_estimate_ok);

        nlohmann::json extra{{"eps_n", row.eps_n},
                             {"psi_expectations", row.psi_expectations},
                             {"psi_transported", row.psi_transported},
                             {"log2_q_measure", json_number(row.log2_q_measure)},
                             {"exponent_I_n_l", json_number(row.exponent_lower)},
                             {"mid_bound", json_number(row.mid_bound)}};
        report.rows.push_back({row.n, std::exp2(row.log2_phi_joined), row.empirical_exponent,
                               row.final_bound, pass, extra});
        if (!pass) report.all_pass = false;
    }

    report.summary = {{"S_Psi_phi", json_number(qr.s_psi_phi)},
                      {"argmin_member", qr.argmin_index},
                      {"H_Omega_l_Q", json_number(qr.h_omega_q)},
                      {"eta_l", qr.eta_l},
                      {"delta", json_number(qr.delta)},
                      {"l", qr.l}};
    return report;
}

ExperimentReport run_neyman_pearson(const ExperimentConfig& cfg, int threads) {
    ExperimentReport report;
    report.config_echo = cfg.echo;
    const DensityOperator& psi = cfg.psi_set.front();
    const DensityOperator& phi = *cfg.phi;
    double s = quantum_rel_entropy(psi, phi);

    auto brackets = map_over_n(
        cfg.n_list,
        [&](std::int64_t n) {
            return neyman_pearson_bracket(psi, phi, static_cast<int>(n), cfg.epsilon, cfg.cap);
        },
        threads);

    for (const NPBracket& b : brackets) {
        bool ordered = b.lower <= b.upper + 1e-9;
        double per_n_upper = b.upper / static_cast<double>(b.n);
        double per_n_lower = b.lower == -kInf ? -kInf : b.lower / static_cast<double>(b.n);
        report.add_check("bracket_ordered", b.n, per_n_lower, per_n_upper, ordered);
        nlohmann::json extra{{"epsilon", b.epsilon},
                             {"upper", json_number(b.upper)},
                             {"lower", json_number(b.lower)},
                             {"gap_to_minus_S", json_number(s == kInf ? kInf : std::abs(per_n_upper + s))}};
        report.rows.push_back({b.n, std::exp2(b.upper), per_n_upper, per_n_lower, ordered, extra});
        if (!ordered) report.all_pass = false;
    }
    report.summary = {{"S_psi_phi", json_number(s)},
                      {"target_exponent", json_number(s == kInf ? -kInf : -s)}};
    return report;
}

ExperimentReport run_example1(const ExperimentConfig& cfg, int) {
    ExperimentReport report;
    report.config_echo = cfg.echo;
    const double o = cfg.overlap_sq;

    CVector v(2), w(2);
    v << 1.0, 0.0;
    w << std::sqrt(o), std::sqrt(1.0 - o);
    DensityOperator psi = DensityOperator::pure(w);

    for (double delta : cfg.deltas) {
        Matrix mix = (1.0 - delta) * (v * v.adjoint()) + delta * (w * w.adjoint());
        DensityOperator phi_delta = DensityOperator((mix + mix.adjoint()) / 2.0);
        for (std::int64_t n : cfg.n_list) {
            EmpiricalStateRate r = empirical_state_rate(o, delta, static_cast<int>(n));
            bool ceiling_ok = r.rate <= r.ceiling + 1e-12;
            report.add_check("rate_ceiling", n, r.rate, r.ceiling, ceiling_ok);

            bool cross_ok = true;
            double dense = -1.0;
            if (std::pow(2.0, static_cast<double>(n)) <= static_cast<double>(cfg.cap) && n <= 10) {
                CVector wn = w;
                for (std::int64_t k = 1; k < n; ++k) {
                    CVector next(wn.size() * 2);
                    for (Eigen::Index i = 0; i < wn.size(); ++i) next.segment(i * 2, 2) = wn(i) * w;
                    wn = next;
                }
                dense = expectation(tensor_power(phi_delta, static_cast<int>(n), cfg.cap),
                                    Projection::onto_vector(wn));
                cross_ok = std::abs(dense - r.value) <= 1e-10;
                report.add_check("dense_matrix_cross_check", n, std::abs(dense - r.value), 1e-10, cross_ok);
            }

            nlohmann::json extra{{"delta", delta}, {"rate", r.rate}, {"ceiling", r.ceiling}};
            if (dense >= 0.0) extra["dense_value"] = dense;
            bool pass = ceiling_ok && cross_ok;
            report.rows.push_back({n, r.value, -r.rate, -r.ceiling, pass, extra});
            if (!pass) report.all_pass = false;
        }
    }

    // Orthocomplement family: the reference expectation vanishes identically
    // while the tested state's expectation approaches 1.
    for (std::int64_t n : cfg.n_list) {
        OrthocomplementSeparation sep = orthocomplement_separation(v, w, static_cast<int>(n));
        report.add_check("orthocomplement_phi_zero", n, sep.phi_val, 0.0, sep.phi_val == 0.0);
        report.add_check("orthocomplement_psi_tends_one", n, 1.0 - sep.psi_val,
                         std::pow(o, static_cast<double>(n)) + 1e-12, true);
    }

    // Relative entropy blows up as delta -> 0 while the ceiling stays fixed.
    nlohmann::json entropies = nlohmann::json::array();
    for (int k = 1; k <= cfg.entropy_k_max; ++k) {
        double delta = std::pow(10.0, -k);
        Matrix mix = (1.0 - delta) * (v * v.adjoint()) + delta * (w * w.adjoint());
        double s = quantum_rel_entropy(psi, DensityOperator((mix + mix.adjoint()) / 2.0));
        double needed = k * std::log2(10.0) - 1.0;
        report.add_check("entropy_divergence", k, s, needed, s >= needed);
        entropies.push_back({{"k", k}, {"S", json_number(s)}, {"needed", needed}});
    }

    report.summary = {{"overlap_sq", o},
                      {"ceiling_bits", -std::log2(o)},
                      {"entropy_growth", entropies}};
    return report;
}

ExperimentReport run_example2(const ExperimentConfig& cfg, int) {
    ExperimentReport report;
    report.config_echo = cfg.echo;
    Rng rng(cfg.seed);

    std::vector<double> ln_sigmas;
    double prev_sigma = kInf;
    for (std::int64_t n : cfg.n_list) {
        VandermondeSigma vs = vandermonde_sigma_min(static_cast<int>(n));
        ln_sigmas.push_back(std::log(vs.sigma_min));

        bool decreasing = vs.sigma_min < prev_sigma + 1e-15;
        report.add_check("sigma_min_decreasing", n, vs.sigma_min, prev_sigma, decreasing);
        prev_sigma = vs.sigma_min;

        // Certified floor and the random search for small uniform overlaps.
        double floor_c = 0.0;
        double observed_min = kInf;
        {
            std::vector<double> unit(static_cast<std::size_t>(n) + 1, 0.0);
            unit[0] = 1.0;
            floor_c = uniform_overlap_floor(static_cast<int>(n), cfg.big_t, unit).certified_floor;

            // Node-family coefficient vectors, precomputed once per n.
            std::vector<SymBasisCoeffs> node_coeffs;
            double tan_t = std::tan(cfg.big_t);
            for (std::int64_t m = 0; m <= n; ++m) {
                double node = 1.0 - 2.0 * static_cast<double>(m) / static_cast<double>(n);
                node_coeffs.push_back(sym_basis_coeffs(static_cast<int>(n), std::atan(node * tan_t)));
            }
            std::vector<double> x(static_cast<std::size_t>(n) + 1);
            observed_min = cfg.trials == 0 ? floor_c : kInf;
            for (int trial = 0; trial < cfg.trials; ++trial) {
                double norm = 0.0;
                for (double& xi : x) {
                    xi = rng.normal();
                    norm += xi * xi;
                }
                norm = std::sqrt(norm);
                for (double& xi : x) xi /= norm;
                double best = 0.0;
                for (const auto& coeffs : node_coeffs) {
                    double inner = 0.0;
                    for (std::size_t k = 0; k < x.size(); ++k) inner += x[k] * coeffs.coeffs[k];
                    best = std::max(best, std::abs(inner));
                }
                observed_min = std::min(observed_min, best);
            }
        }
        bool floor_positive = floor_c > 0.0;
        bool above_floor = observed_min >= floor_c - 1e-12;
        double decay_const = std::log(std::cos(cfg.big_t)) +
                             std::min(0.0, std::log(std::tan(cfg.big_t))) - 1.64;
        bool decay_ok = std::log(floor_c) / static_cast<double>(n) >= decay_const;
        report.add_check("overlap_floor_positive", n, floor_c, 0.0, floor_positive);
        report.add_check("random_search_above_floor", n, observed_min, floor_c, above_floor);
        report.add_check("floor_decay_at_most_exponential", n, std::log(floor_c) / static_cast<double>(n),
                         decay_const, decay_ok);

        // The bound column carries the asymptotic decay constant; the per-n
        // level approaches it from above like (1.93 + ln(n+1)/2)/n, so the
        // proximity itself is reported as data while the decay constant is
        // checked through the slope regression below.
        nlohmann::json extra{{"floor", floor_c},
                             {"observed_min_max_overlap", observed_min},
                             {"gap_to_constant", vs.per_n_log_nat - kSigmaDecayNat}};
        bool pass = decreasing && floor_positive && above_floor && decay_ok;
        report.rows.push_back({n, vs.sigma_min, vs.per_n_log_nat, kSigmaDecayNat, pass, extra});
        if (!pass) report.all_pass = false;
    }

    // Least-squares slope of ln sigma_min over odd n in [9,21].
    double slope = 0.0;
    bool slope_checked = false;
    {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
            if (cfg.n_list[i] >= 9 && cfg.n_list[i] <= 21) {
                xs.push_back(static_cast<double>(cfg.n_list[i]));
                ys.push_back(ln_sigmas[i]);
            }
        }
        if (xs.size() >= 2) {
            double mx = 0.0, my = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                mx += xs[i];
                my += ys[i];
            }
            mx /= static_cast<double>(xs.size());
            my /= static_cast<double>(xs.size());
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                num += (xs[i] - mx) * (ys[i] - my);
                den += (xs[i] - mx) * (xs[i] - mx);
            }
            slope = num / den;
            slope_checked = true;
            bool slope_ok = std::abs(slope - kSigmaDecayNat) <= 0.10 * std::abs(kSigmaDecayNat);
            report.add_check("slope_regression", cfg.n_list.back(), slope, kSigmaDecayNat, slope_ok);
        }
    }
    report.summary = {{"decay_constant_nat", kSigmaDecayNat},
                      {"slope", slope_checked ? json_number(slope) : nlohmann::json(nullptr)}};
    return report;
}

ExperimentReport run_hiai_petz(const ExperimentConfig& cfg, int) {
    ExperimentReport report;
    report.config_echo = cfg.echo;
    Rng rng(cfg.seed);

    double max_residual = 0.0;
    for (int pair = 0; pair < cfg.pairs; ++pair) {
        DensityOperator psi = rng.random_qubit();
        DensityOperator phi = rng.random_qubit();
        for (int l : cfg.l_list) {
            HiaiPetzTerms terms = hiai_petz_identity_terms(psi, phi, l, cfg.grouping_tol, cfg.cap);
            double gain_bound = pinch_gain_bound(2, l);
            bool residual_ok = !terms.support_ok || terms.residual <= 1e-8;
            bool gain_ok = terms.pinch_gain >= -1e-10 && terms.pinch_gain <= gain_bound + 1e-9;
            bool pass = residual_ok && gain_ok;
            report.add_check("identity_residual", l, terms.residual, 1e-8, residual_ok);
            report.add_check("pinch_gain_range", l, terms.pinch_gain, gain_bound, gain_ok);
            max_residual = std::max(max_residual, terms.residual);

            nlohmann::json extra{{"pair", pair},
                                 {"lhs", json_number(terms.lhs)},
                                 {"restricted_term", json_number(terms.restricted_term)},
                                 {"support_ok", terms.support_ok}};
            report.rows.push_back({l, terms.residual, terms.pinch_gain, gain_bound, pass, extra});
            if (!pass) report.all_pass = false;
        }
    }
    report.summary = {{"pairs", cfg.pairs}, {"max_residual", max_residual}};
    return report;
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, int threads) {
    switch (cfg.kind) {
        case ExperimentKind::ClassicalSanov: return run_classical(cfg, threads);
        case ExperimentKind::QuantumSanov: return run_quantum(cfg, threads);
        case ExperimentKind::NeymanPearson: return run_neyman_pearson(cfg, threads);
        case ExperimentKind::Example1: return run_example1(cfg, threads);
        case ExperimentKind::Example2: return run_example2(cfg, threads);
        case ExperimentKind::HiaiPetz: return run_hiai_petz(cfg, threads);
    }
    throw std::logic_error("run_experiment: unknown kind");
}

} // namespace sanovlab
