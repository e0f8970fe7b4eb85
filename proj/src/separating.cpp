#include "sanovlab/separating.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sanovlab {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// Orthonormal basis of the column span, rank-revealing at the given threshold.
Matrix orthonormal_span(const Matrix& cols, double tol = 1e-10) {
    if (cols.cols() == 0) return Matrix(cols.rows(), 0);
    Eigen::ColPivHouseholderQR<Matrix> qr;
    qr.setThreshold(tol);
    qr.compute(cols);
    const Eigen::Index r = qr.rank();
    if (r == 0) return Matrix(cols.rows(), 0);
    return qr.householderQ() * Matrix::Identity(cols.rows(), r);
}

// Visits every word of the given type class, in lexicographic word order.
template <typename Fn>
void for_each_word_of_type(const TypeVector& t, Fn&& fn) {
    std::vector<int> word;
    word.reserve(static_cast<std::size_t>(t.n));
    for (int a = 0; a < t.alphabet_size(); ++a)
        for (std::int64_t k = 0; k < t.counts[static_cast<std::size_t>(a)]; ++k) word.push_back(a);
    if (word.empty()) return;
    do {
        fn(word);
    } while (std::next_permutation(word.begin(), word.end()));
}

double pow_ll(Eigen::Index base, int exp) {
    return std::pow(static_cast<double>(base), exp);
}

// a <= b + tol with -inf treated as the bottom element.
bool le_tol(double a, double b, double tol = 1e-9) {
    if (a == -kInf) return true;
    if (b == -kInf) return false;
    return a <= b + tol;
}

} // namespace

Classicalization classicalize(const std::vector<DensityOperator>& psi_set,
                              const DensityOperator& phi, int l,
                              double grouping_tol, Eigen::Index cap) {
    require(!psi_set.empty(), "classicalize: empty state family");
    for (const auto& psi : psi_set)
        require(psi.dim() == phi.dim(), "classicalize: dimension mismatch in the family");

    Classicalization c;
    c.l = l;
    c.site_dim = phi.dim();
    c.blocks = build_spectral_blocks(phi, l, grouping_tol, cap);
    const Eigen::Index total = c.blocks.total_dim;
    const std::size_t n_blocks = c.blocks.blocks.size();

    std::vector<AbelianAlgebra> refined;
    refined.reserve(psi_set.size());
    for (const auto& psi : psi_set)
        refined.push_back(refine_maximal_abelian(build_pinched_algebra(psi, phi, l, grouping_tol, cap)));
    c.anchor = refined.front();

    // Anchor letter bookkeeping. Letters are block-major by construction.
    c.block_letters.assign(n_blocks, {});
    for (std::size_t i = 0; i < c.anchor.minimal_projections.size(); ++i) {
        int b = c.anchor.labels[i].block;
        c.letter_block.push_back(b);
        c.letter_pos.push_back(static_cast<int>(c.block_letters[static_cast<std::size_t>(b)].size()));
        c.block_letters[static_cast<std::size_t>(b)].push_back(static_cast<int>(i));
    }
    require(static_cast<Eigen::Index>(c.letter_block.size()) == total,
            "classicalize: refinement does not resolve the identity");

    // Stack the anchor's rank-1 columns per block.
    c.anchor_block_cols.resize(n_blocks);
    std::vector<std::vector<Matrix>> member_cols(psi_set.size(), std::vector<Matrix>(n_blocks));
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const Eigen::Index r = c.blocks.blocks[b].projector.rank();
        c.anchor_block_cols[b].resize(total, r);
        for (std::size_t s = 0; s < psi_set.size(); ++s) member_cols[s][b].resize(total, r);
    }
    {
        std::vector<Eigen::Index> fill(n_blocks, 0);
        for (std::size_t i = 0; i < c.anchor.minimal_projections.size(); ++i) {
            std::size_t b = static_cast<std::size_t>(c.anchor.labels[i].block);
            c.anchor_block_cols[b].col(fill[b]++) = c.anchor.minimal_projections[i].range_basis.col(0);
        }
    }
    for (std::size_t s = 0; s < psi_set.size(); ++s) {
        std::vector<Eigen::Index> fill(n_blocks, 0);
        for (std::size_t i = 0; i < refined[s].minimal_projections.size(); ++i) {
            std::size_t b = static_cast<std::size_t>(refined[s].labels[i].block);
            if (fill[b] >= member_cols[s][b].cols())
                throw std::logic_error("classicalize: per-block rank mismatch between refinements");
            member_cols[s][b].col(fill[b]++) = refined[s].minimal_projections[i].range_basis.col(0);
        }
        for (std::size_t b = 0; b < n_blocks; ++b)
            if (fill[b] != member_cols[s][b].cols())
                throw std::logic_error("classicalize: per-block rank mismatch between refinements");
    }

    // Intertwiners U_s = sum_B A_B S_B^+, block compressions, and the
    // transported classical distributions.
    c.compressed_states.assign(psi_set.size(), {});
    c.block_transports.assign(psi_set.size(), {});
    for (std::size_t s = 0; s < psi_set.size(); ++s) {
        DensityOperator rho_l = tensor_power(psi_set[s], l, cap);
        Matrix u = Matrix::Zero(total, total);
        c.compressed_states[s].resize(n_blocks);
        c.block_transports[s].resize(n_blocks);
        for (std::size_t b = 0; b < n_blocks; ++b) {
            u += c.anchor_block_cols[b] * member_cols[s][b].adjoint();
            c.block_transports[s][b] = c.anchor_block_cols[b].adjoint() * member_cols[s][b];
            c.compressed_states[s][b] =
                c.anchor_block_cols[b].adjoint() * rho_l.matrix() * c.anchor_block_cols[b];
        }
        c.intertwiners.push_back({l, std::move(u), s, 0});

        std::vector<double> probs(static_cast<std::size_t>(total), 0.0);
        for (std::size_t i = 0; i < c.letter_block.size(); ++i) {
            std::size_t b = static_cast<std::size_t>(c.letter_block[i]);
            Eigen::Index j = c.letter_pos[i];
            double v = (member_cols[s][b].col(j).adjoint() * rho_l.matrix() *
                        member_cols[s][b].col(j))(0, 0).real();
            probs[i] = std::max(v, 0.0);
        }
        double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
        require(std::abs(sum - 1.0) <= 1e-9, "classicalize: transported masses do not sum to 1");
        for (double& v : probs) {
            v /= sum;
            if (v < 1e-12) v = 0.0;
        }
        double sum2 = std::accumulate(probs.begin(), probs.end(), 0.0);
        for (double& v : probs) v /= sum2;
        c.omega_l.push_back(Distribution(std::move(probs)));
    }

    // Reference distribution: each anchor letter inside a block carries that
    // block's eigenvalue, exactly.
    {
        std::vector<double> probs(static_cast<std::size_t>(total), 0.0);
        for (std::size_t i = 0; i < c.letter_block.size(); ++i)
            probs[i] = c.blocks.blocks[static_cast<std::size_t>(c.letter_block[i])].eigenvalue;
        double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
        require(std::abs(sum - 1.0) <= 1e-9, "classicalize: block eigenvalues do not sum to 1");
        for (double& v : probs) v /= sum;
        c.q = Distribution(std::move(probs));
    }
    return c;
}

double LiftedTypicalProjection::log2_rank() const {
    Log2Accumulator acc;
    for (const auto& t : word_spec.member_types) acc.add(log2_type_class_size(t));
    for (const auto& t : word_spec.null_types) acc.add(log2_type_class_size(t));
    return acc.log2_total();
}

LiftedTypicalProjection lift_typical_set(const TypicalSetSpec& spec, const Classicalization& c) {
    require(spec.alphabet == c.alphabet(),
            "lift_typical_set: alphabet does not match the anchor algebra");
    return {c.l, spec.n, spec};
}

double log2_phi_expectation(const LiftedTypicalProjection& p, const Classicalization& c) {
    return log2_measure_of_typical_set(c.q, p.word_spec);
}

double psi_expectation_transported(const LiftedTypicalProjection& p, const Classicalization& c,
                                   std::size_t psi_index) {
    require(psi_index < c.omega_l.size(), "psi_expectation_transported: index out of range");
    return measure_of_typical_set(c.omega_l[psi_index], p.word_spec);
}

Projection dense_lifted_projection(const LiftedTypicalProjection& p, const Classicalization& c,
                                   Eigen::Index cap) {
    const int n = static_cast<int>(p.n);
    double required = pow_ll(c.site_dim, c.l * n);
    if (required > static_cast<double>(cap)) throw CapExceeded(static_cast<long long>(required));
    const Eigen::Index total = static_cast<Eigen::Index>(std::llround(required));
    const Eigen::Index letter_dim = c.blocks.total_dim;

    std::vector<CVector> cols;
    auto add_words = [&](const TypeVector& t) {
        for_each_word_of_type(t, [&](const std::vector<int>& word) {
            CVector v = c.anchor.minimal_projections[static_cast<std::size_t>(word[0])].range_basis.col(0);
            for (int pos = 1; pos < n; ++pos) {
                const CVector& u =
                    c.anchor.minimal_projections[static_cast<std::size_t>(word[static_cast<std::size_t>(pos)])]
                        .range_basis.col(0);
                CVector next(v.size() * letter_dim);
                for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * letter_dim, letter_dim) = v(i) * u;
                v = std::move(next);
            }
            cols.push_back(std::move(v));
        });
    };
    for (const auto& t : p.word_spec.member_types) add_words(t);
    for (const auto& t : p.word_spec.null_types) add_words(t);

    Matrix basis(total, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = cols[j];
    return Projection(total, std::move(basis));
}

Eigen::Index BlockDiagonalProjection::rank() const {
    Eigen::Index r = 0;
    for (const auto& [key, basis] : groups) r += basis.cols();
    return r;
}

double BlockDiagonalProjection::log2_phi_expectation(const Classicalization& c) const {
    Log2Accumulator acc;
    for (const auto& [key, basis] : groups) {
        if (basis.cols() == 0) continue;
        double log2_mu = 0.0;
        for (int b : key) {
            double mu = c.blocks.blocks[static_cast<std::size_t>(b)].eigenvalue;
            if (mu <= 0.0) {
                log2_mu = -kInf;
                break;
            }
            log2_mu += std::log2(mu);
        }
        if (log2_mu == -kInf) continue;
        acc.add(log2_mu + std::log2(static_cast<double>(basis.cols())));
    }
    return acc.log2_total();
}

double BlockDiagonalProjection::psi_expectation(const Classicalization& c, std::size_t psi_index) const {
    require(psi_index < c.compressed_states.size(), "psi_expectation: index out of range");
    double total = 0.0;
    for (const auto& [key, basis] : groups) {
        if (basis.cols() == 0) continue;
        Matrix m = c.compressed_states[psi_index][static_cast<std::size_t>(key[0])];
        for (std::size_t t = 1; t < key.size(); ++t)
            m = kron(m, c.compressed_states[psi_index][static_cast<std::size_t>(key[t])]);
        for (Eigen::Index j = 0; j < basis.cols(); ++j)
            total += (basis.col(j).adjoint() * m * basis.col(j))(0, 0).real();
    }
    return std::clamp(total, 0.0, 1.0);
}

Projection BlockDiagonalProjection::to_projection(const Classicalization& c, Eigen::Index cap) const {
    double required = pow_ll(site_dim, l * static_cast<int>(n));
    if (required > static_cast<double>(cap)) throw CapExceeded(static_cast<long long>(required));
    const Eigen::Index total = static_cast<Eigen::Index>(std::llround(required));

    std::vector<Matrix> pieces;
    Eigen::Index rank_total = 0;
    for (const auto& [key, basis] : groups) {
        if (basis.cols() == 0) continue;
        Matrix ambient = c.anchor_block_cols[static_cast<std::size_t>(key[0])];
        for (std::size_t t = 1; t < key.size(); ++t)
            ambient = kron(ambient, c.anchor_block_cols[static_cast<std::size_t>(key[t])]);
        pieces.push_back(ambient * basis);
        rank_total += basis.cols();
    }
    Matrix out(total, rank_total);
    Eigen::Index at = 0;
    for (const auto& piece : pieces) {
        out.middleCols(at, piece.cols()) = piece;
        at += piece.cols();
    }
    return Projection(total, std::move(out));
}

BlockDiagonalProjection symmetrize_join(const LiftedTypicalProjection& p, const Classicalization& c,
                                        std::vector<std::size_t> subset, Eigen::Index cap) {
    const int n = static_cast<int>(p.n);
    double required = pow_ll(c.site_dim, c.l * n);
    if (required > static_cast<double>(cap)) throw CapExceeded(static_cast<long long>(required));
    if (subset.empty()) {
        subset.resize(c.omega_l.size());
        std::iota(subset.begin(), subset.end(), std::size_t{0});
    }
    for (std::size_t s : subset)
        require(s < c.omega_l.size(), "symmetrize_join: member index out of range");

    // Transported member-word vectors, grouped by the word of spectral blocks;
    // coordinates are taken in the anchor basis of each block.
    std::map<std::vector<int>, std::vector<CVector>> raw;
    auto add_words = [&](const TypeVector& t) {
        for_each_word_of_type(t, [&](const std::vector<int>& word) {
            std::vector<int> block_word(word.size());
            for (std::size_t pos = 0; pos < word.size(); ++pos)
                block_word[pos] = c.letter_block[static_cast<std::size_t>(word[pos])];
            for (std::size_t s : subset) {
                CVector v = c.block_transports[s][static_cast<std::size_t>(block_word[0])].col(
                    c.letter_pos[static_cast<std::size_t>(word[0])]);
                for (std::size_t pos = 1; pos < word.size(); ++pos) {
                    const auto& tr = c.block_transports[s][static_cast<std::size_t>(block_word[pos])];
                    CVector colv = tr.col(c.letter_pos[static_cast<std::size_t>(word[pos])]);
                    CVector next(v.size() * colv.size());
                    for (Eigen::Index i = 0; i < v.size(); ++i)
                        next.segment(i * colv.size(), colv.size()) = v(i) * colv;
                    v = std::move(next);
                }
                raw[block_word].push_back(std::move(v));
            }
        });
    };
    for (const auto& t : p.word_spec.member_types) add_words(t);
    for (const auto& t : p.word_spec.null_types) add_words(t);

    BlockDiagonalProjection out;
    out.l = c.l;
    out.n = p.n;
    out.site_dim = c.site_dim;
    for (auto& [key, vecs] : raw) {
        Matrix cols(vecs.front().size(), static_cast<Eigen::Index>(vecs.size()));
        for (std::size_t j = 0; j < vecs.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = vecs[j];
        out.groups[key] = orthonormal_span(cols);
    }
    return out;
}

Projection pad_projection(const Projection& p, Eigen::Index site_dim, int r, Eigen::Index cap) {
    require(r >= 0, "pad_projection: negative padding");
    if (r == 0) return p;
    double required = static_cast<double>(p.ambient_dim) * pow_ll(site_dim, r);
    if (required > static_cast<double>(cap)) throw CapExceeded(static_cast<long long>(required));
    const Eigen::Index pad = static_cast<Eigen::Index>(std::llround(pow_ll(site_dim, r)));
    Matrix id = Matrix::Identity(pad, pad);
    return Projection(p.ambient_dim * pad, kron(p.range_basis, id));
}

QuantumSanovReport quantum_sanov_experiment(const std::vector<DensityOperator>& psi_set,
                                            const DensityOperator& phi, int l,
                                            const std::vector<std::int64_t>& n_list,
                                            const PowerLawSchedule& schedule,
                                            double grouping_tol, Eigen::Index cap, int threads,
                                            double delta) {
    Classicalization cls = classicalize(psi_set, phi, l, grouping_tol, cap);
    std::vector<RatePoint> classical_rows =
        classical_sanov_experiment(cls.omega_l, cls.q, n_list, schedule, threads);
    RelEntropyArgMin s_min = quantum_rel_entropy_distance(psi_set, phi);

    QuantumSanovReport report;
    report.l = l;
    report.site_dim = cls.site_dim;
    report.s_psi_phi = s_min.value;
    report.argmin_index = s_min.index;
    report.h_omega_q = rel_entropy_distance(cls.omega_l, cls.q);
    report.eta_l = pinch_gain_bound(cls.site_dim, l) / static_cast<double>(l);
    report.delta = delta;
    report.eta_within_delta = report.eta_l <= delta;
    report.omega_l = cls.omega_l;
    report.q = cls.q;

    const double d_l = pow_ll(cls.site_dim, l);
    const double d_2l = d_l * d_l;
    std::vector<std::size_t> row_ids(classical_rows.size());
    std::iota(row_ids.begin(), row_ids.end(), std::size_t{0});
    auto compute_row = [&](std::size_t i) {
        const RatePoint& base = classical_rows[i];
        QuantumSanovRow row;
        row.n = base.n;
        row.eps_n = base.eps_n;
        row.log2_q_measure = base.log2_q_measure;
        row.exponent_lower = base.exponent;
        row.slack_bound = base.slack_bound;
        row.lifted_classical_ok = base.exponent_upper_ok && base.slack_ok && base.monotone_ok;

        TypicalSetSpec spec = build_typical_sets(cls.omega_l, cls.q, base.n, base.eps_n);
        LiftedTypicalProjection lifted = lift_typical_set(spec, cls);
        BlockDiagonalProjection joined = symmetrize_join(lifted, cls, {}, cap);

        row.log2_phi_joined = joined.log2_phi_expectation(cls);
        for (std::size_t s = 0; s < psi_set.size(); ++s)
            row.psi_expectations.push_back(joined.psi_expectation(cls, s));
        for (std::size_t s = 0; s < psi_set.size(); ++s)
            row.psi_transported.push_back(psi_expectation_transported(lifted, cls, s));

        const double nl = static_cast<double>(base.n) * l;
        const double log_n1 = std::log2(static_cast<double>(base.n) + 1.0);

        row.log2_rank_lifted = lifted.log2_rank();
        row.log2_rank_joined = joined.rank() > 0 ? std::log2(static_cast<double>(joined.rank())) : -kInf;
        row.sym_rank_ok = le_tol(row.log2_rank_joined, d_2l * log_n1 + row.log2_rank_lifted);

        row.psi_estimate_ok = true;
        for (std::size_t s = 0; s < psi_set.size(); ++s)
            if (row.psi_expectations[s] < row.psi_transported[s] - 1e-9) row.psi_estimate_ok = false;

        row.u_invariance_ok = true;
        for (std::size_t s = 0; s < psi_set.size(); ++s) {
            BlockDiagonalProjection single = symmetrize_join(lifted, cls, {s}, cap);
            double lhs = single.log2_phi_expectation(cls);
            double a = lhs == -kInf ? 0.0 : std::exp2(lhs);
            double b = row.log2_q_measure == -kInf ? 0.0 : std::exp2(row.log2_q_measure);
            if (std::abs(a - b) > 1e-9) row.u_invariance_ok = false;
        }
        row.empirical_exponent = row.log2_phi_joined == -kInf ? -kInf : row.log2_phi_joined / nl;
        row.mid_bound =
            row.log2_q_measure == -kInf ? -kInf : (d_2l * log_n1 + row.log2_q_measure) / nl;
        row.final_bound = report.s_psi_phi == kInf
                              ? -kInf
                              : (d_2l + d_l) * log_n1 / nl - report.s_psi_phi + report.eta_l +
                                    row.slack_bound / static_cast<double>(l);
        row.chain_ok = le_tol(row.empirical_exponent, row.mid_bound) &&
                       le_tol(row.mid_bound, row.final_bound);
        return row;
    };

    report.rows = map_over_n(row_ids, compute_row, threads);
    std::vector<double> prev_psi;
    for (QuantumSanovRow& row : report.rows) {
        row.psi_monotone_ok = true;
        if (!prev_psi.empty()) {
            for (std::size_t s = 0; s < prev_psi.size(); ++s)
                if (row.psi_expectations[s] < prev_psi[s] - 1e-12) row.psi_monotone_ok = false;
        }
        prev_psi = row.psi_expectations;
    }
    return report;
}

NPBracket neyman_pearson_bracket(const DensityOperator& psi, const DensityOperator& phi,
                                 int n, double epsilon, Eigen::Index cap) {
    require(epsilon > 0.0 && epsilon < 1.0, "neyman_pearson_bracket: epsilon must lie in (0,1)");
    const Matrix rho = tensor_power(psi, n, cap).matrix();
    const Matrix sigma = tensor_power(phi, n, cap).matrix();
    const Eigen::Index dim = rho.rows();
    const double feas_floor = 1.0 - epsilon - 1e-12;

    // Candidate thresholds: the generalized spectrum of (rho, sigma) on the
    // support of sigma, with log-midpoints and a geometric guard band.
    std::vector<double> candidates;
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
        Matrix inv_sqrt = Matrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            double s = es.eigenvalues()(i);
            if (s > 1e-12)
                inv_sqrt += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint() / std::sqrt(s);
        }
        Matrix pencil = inv_sqrt * rho * inv_sqrt;
        Eigen::SelfAdjointEigenSolver<Matrix> ep((pencil + pencil.adjoint()) / 2.0);
        std::vector<double> gen;
        for (Eigen::Index i = 0; i < dim; ++i)
            if (ep.eigenvalues()(i) > 1e-13) gen.push_back(ep.eigenvalues()(i));
        std::sort(gen.begin(), gen.end());
        gen.erase(std::unique(gen.begin(), gen.end(),
                              [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(a, b); }),
                  gen.end());
        for (std::size_t i = 0; i < gen.size(); ++i) {
            candidates.push_back(gen[i]);
            candidates.push_back(gen[i] * (1.0 - 1e-7));
            candidates.push_back(gen[i] * (1.0 + 1e-7));
            if (i + 1 < gen.size()) candidates.push_back(std::sqrt(gen[i] * gen[i + 1]));
        }
        double lo = gen.empty() ? 1e-9 : gen.front() / 16.0;
        double hi = gen.empty() ? 1.0 : gen.back() * 16.0;
        for (int k = 0; k <= 24; ++k)
            candidates.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / 24.0));
    }

    double best_upper = 0.0; // the identity test is always feasible
    double best_lower = -kInf;
    for (double t : candidates) {
        if (!(t > 0.0)) continue;
        Matrix delta = rho - t * sigma;
        Eigen::SelfAdjointEigenSolver<Matrix> es((delta + delta.adjoint()) / 2.0);

        std::vector<double> pw(static_cast<std::size_t>(dim)), qw(static_cast<std::size_t>(dim));
        std::vector<Eigen::Index> order;
        for (Eigen::Index i = dim - 1; i >= 0; --i) order.push_back(i); // descending eigenvalue
        for (Eigen::Index i = 0; i < dim; ++i) {
            pw[static_cast<std::size_t>(i)] =
                std::max((es.eigenvectors().col(i).adjoint() * rho * es.eigenvectors().col(i))(0, 0).real(), 0.0);
            qw[static_cast<std::size_t>(i)] =
                std::max((es.eigenvectors().col(i).adjoint() * sigma * es.eigenvectors().col(i))(0, 0).real(), 0.0);
        }

        // Lagrangian lower bound at this threshold.
        double tr_plus = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) tr_plus += std::max(es.eigenvalues()(i), 0.0);
        double numerator = 1.0 - epsilon - tr_plus;
        if (numerator > 0.0) best_lower = std::max(best_lower, std::log2(numerator) - std::log2(t));

        auto finish_candidate = [&](std::vector<Eigen::Index> chosen) {
            double psum = 0.0;
            for (Eigen::Index i : chosen) psum += pw[static_cast<std::size_t>(i)];
            if (psum < feas_floor) return;
            // Greedy pruning: drop the most phi-expensive members that stay feasible.
            std::sort(chosen.begin(), chosen.end(), [&](Eigen::Index a, Eigen::Index b) {
                return qw[static_cast<std::size_t>(a)] / (pw[static_cast<std::size_t>(a)] + 1e-300) >
                       qw[static_cast<std::size_t>(b)] / (pw[static_cast<std::size_t>(b)] + 1e-300);
            });
            std::vector<bool> keep(chosen.size(), true);
            for (std::size_t j = 0; j < chosen.size(); ++j) {
                double without = psum - pw[static_cast<std::size_t>(chosen[j])];
                if (without >= feas_floor) {
                    keep[j] = false;
                    psum = without;
                }
            }
            double qsum = 0.0;
            for (std::size_t j = 0; j < chosen.size(); ++j)
                if (keep[j]) qsum += qw[static_cast<std::size_t>(chosen[j])];
            best_upper = std::min(best_upper, qsum > 0.0 ? std::log2(qsum) : -kInf);
        };

        // (a) full nonnegative eigenspace, topped up greedily if infeasible.
        {
            std::vector<Eigen::Index> chosen;
            std::vector<Eigen::Index> rest;
            for (Eigen::Index i : order)
                (es.eigenvalues()(i) >= -1e-12 ? chosen : rest).push_back(i);
            double psum = 0.0;
            for (Eigen::Index i : chosen) psum += pw[static_cast<std::size_t>(i)];
            std::sort(rest.begin(), rest.end(), [&](Eigen::Index a, Eigen::Index b) {
                return pw[static_cast<std::size_t>(a)] / (qw[static_cast<std::size_t>(a)] + 1e-300) >
                       pw[static_cast<std::size_t>(b)] / (qw[static_cast<std::size_t>(b)] + 1e-300);
            });
            for (Eigen::Index i : rest) {
                if (psum >= feas_floor) break;
                chosen.push_back(i);
                psum += pw[static_cast<std::size_t>(i)];
            }
            finish_candidate(std::move(chosen));
        }
        // (b) minimal feasible prefix in eigenvalue order.
        {
            std::vector<Eigen::Index> chosen;
            double psum = 0.0;
            for (Eigen::Index i : order) {
                chosen.push_back(i);
                psum += pw[static_cast<std::size_t>(i)];
                if (psum >= feas_floor) break;
            }
            finish_candidate(std::move(chosen));
        }
    }
    return {n, epsilon, best_upper, best_lower};
}

} // namespace sanovlab
