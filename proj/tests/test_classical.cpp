#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "sanovlab/classical.hpp"

using namespace sanovlab;

namespace {

// Independent scalar evaluation of the two-letter divergence.
double bern_divergence(double p, double q) {
    double h = 0.0;
    if (p > 0.0) h += p * std::log2(p / q);
    if (p < 1.0) h += (1.0 - p) * std::log2((1.0 - p) / (1.0 - q));
    return h;
}

std::vector<Distribution> bern_grid(double lo, double hi, double step) {
    std::vector<Distribution> out;
    for (double p = lo; p <= hi + 1e-12; p += step) out.push_back(Distribution::bernoulli(p));
    return out;
}

double binom_pmf(int n, int k, double p) {
    double coeff = 1.0;
    for (int i = 0; i < k; ++i) coeff = coeff * (n - i) / (i + 1);
    return coeff * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

// Word-by-word evaluation of P^n(M_n), the exactness oracle.
double brute_force_measure(const Distribution& p, const TypicalSetSpec& spec) {
    std::set<std::vector<std::int64_t>> member, null_part;
    for (const auto& t : spec.member_types) member.insert(t.counts);
    for (const auto& t : spec.null_types) null_part.insert(t.counts);

    const int d = spec.alphabet;
    const auto n = spec.n;
    double total = 0.0;
    std::vector<int> word(static_cast<std::size_t>(n), 0);
    while (true) {
        std::vector<std::int64_t> counts(static_cast<std::size_t>(d), 0);
        double prob = 1.0;
        for (int letter : word) {
            ++counts[static_cast<std::size_t>(letter)];
            prob *= p[letter];
        }
        if (member.count(counts) || null_part.count(counts)) total += prob;

        int pos = static_cast<int>(n) - 1;
        while (pos >= 0) {
            if (++word[static_cast<std::size_t>(pos)] < d) break;
            word[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return total;
}

} // namespace

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(Distribution({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(Distribution({1.5, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Distribution(std::vector<double>{}), std::invalid_argument);
    CHECK(Distribution::bernoulli(0.75)[1] == doctest::Approx(0.75));
    CHECK(Distribution::uniform(4)[3] == doctest::Approx(0.25));
}

TEST_CASE("relative entropy basics") {
    Distribution half = Distribution::bernoulli(0.5);
    CHECK(rel_entropy(half, half) == 0.0);
    CHECK(rel_entropy(Distribution({1.0, 0.0}), Distribution({0.0, 1.0})) == kInf);

    // Direct evaluation, kept independent of the implementation.
    double expected = 0.6 * std::log2(0.6 / 0.5) + 0.4 * std::log2(0.4 / 0.5);
    CHECK(rel_entropy(Distribution::bernoulli(0.4), half) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.0290494055453314).epsilon(1e-10));

    CHECK_THROWS_AS(rel_entropy(half, Distribution::uniform(3)), std::invalid_argument);
}

TEST_CASE("relative entropy distance over a grid") {
    Distribution q = Distribution::bernoulli(0.5);
    CHECK(rel_entropy_distance({q}, q) == 0.0);
    CHECK(rel_entropy_distance({Distribution({1.0, 0.0})}, Distribution({0.0, 1.0})) == kInf);

    auto grid = bern_grid(0.60, 0.80, 0.01);
    double expected = bern_divergence(0.60, 0.5);
    CHECK(rel_entropy_distance(grid, q) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.029049).epsilon(1e-4));

    CHECK_THROWS_AS(rel_entropy_distance({}, q), std::invalid_argument);
}

TEST_CASE("type enumeration count and order") {
    CHECK(enumerate_types(4, 2).size() == 5);
    CHECK(enumerate_types(2, 3).size() == 6);

    auto zero = enumerate_types(0, 3);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].counts == std::vector<std::int64_t>{0, 0, 0});

    // Colexicographic: the last letter's count grows slowest.
    auto types = enumerate_types(4, 2);
    CHECK(types[0].counts == std::vector<std::int64_t>{4, 0});
    CHECK(types[1].counts == std::vector<std::int64_t>{3, 1});
    CHECK(types[4].counts == std::vector<std::int64_t>{0, 4});

    for (int d = 1; d <= 4; ++d) {
        for (int n = 0; n <= 6; ++n) {
            auto all = enumerate_types(n, d);
            CHECK(static_cast<double>(all.size()) == doctest::Approx(type_count(n, d)));
            CHECK(static_cast<double>(all.size()) <= std::pow(n + 1.0, d));
        }
    }
}

TEST_CASE("log2 type class size") {
    CHECK(log2_type_class_size(TypeVector({4, 0}, 4)) == doctest::Approx(0.0));
    CHECK(log2_type_class_size(TypeVector({2, 2}, 4)) == doctest::Approx(std::log2(6.0)).epsilon(1e-12));
    CHECK(log2_type_class_size(TypeVector({1, 1, 1}, 3)) == doctest::Approx(std::log2(6.0)).epsilon(1e-12));

    // Exact integer multinomials as the oracle.
    auto multinomial = [](const std::vector<std::int64_t>& counts) {
        long double v = 1.0L;
        std::int64_t placed = 0;
        for (std::int64_t c : counts) {
            for (std::int64_t i = 1; i <= c; ++i) {
                v = v * static_cast<long double>(placed + i) / static_cast<long double>(i);
            }
            placed += c;
        }
        return static_cast<double>(v);
    };
    for (const auto& t : enumerate_types(9, 3)) {
        double expect = std::log2(multinomial(t.counts));
        CHECK(log2_type_class_size(t) == doctest::Approx(expect).epsilon(1e-10));
    }

    CHECK_THROWS_AS(TypeVector({2, 1}, 4), std::invalid_argument);
    CHECK_THROWS_AS(TypeVector({-1, 5}, 4), std::invalid_argument);
}

TEST_CASE("log2 type class probability") {
    CHECK(log2_type_class_prob(Distribution({1.0, 0.0}), TypeVector({5, 0}, 5)) == doctest::Approx(0.0));
    CHECK(log2_type_class_prob(Distribution::bernoulli(0.5), TypeVector({2, 2}, 4)) ==
          doctest::Approx(std::log2(6.0 / 16.0)).epsilon(1e-12));
    CHECK(log2_type_class_prob(Distribution({0.0, 1.0}), TypeVector({1, 4}, 5)) == -kInf);
    CHECK_THROWS_AS(log2_type_class_prob(Distribution::bernoulli(0.5), TypeVector({0, 0, 4}, 4)),
                    std::invalid_argument);
}

TEST_CASE("typical sets around the reference itself") {
    Distribution q = Distribution::bernoulli(0.5);
    TypicalSetSpec spec = build_typical_sets({q}, q, 4, 0.3);
    bool central_in = false;
    for (const auto& t : spec.member_types)
        if (t.counts == std::vector<std::int64_t>{2, 2}) central_in = true;
    CHECK(central_in);
    CHECK(measure_of_typical_set(q, spec) >=
          std::exp2(log2_type_class_prob(q, TypeVector({2, 2}, 4))) - 1e-15);

    // Large radius covers every type.
    TypicalSetSpec all = build_typical_sets({q}, q, 6, 2.0);
    CHECK(all.member_types.size() == 7);
    CHECK(measure_of_typical_set(q, all) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("typical sets with disjoint supports") {
    Distribution p({1.0, 0.0});
    Distribution q({0.0, 1.0});
    TypicalSetSpec spec = build_typical_sets({p}, q, 3, 0.5);
    CHECK(spec.member_types.empty());
    REQUIRE(spec.null_types.size() == 1);
    CHECK(spec.null_types[0].counts == std::vector<std::int64_t>{3, 0});
    CHECK(log2_measure_of_typical_set(q, spec) == -kInf);
    CHECK(measure_of_typical_set(q, spec) == 0.0);
    CHECK(measure_of_typical_set(p, spec) == doctest::Approx(1.0));
}

TEST_CASE("typical set membership window and binomial tail") {
    Distribution q = Distribution::bernoulli(0.5);
    std::vector<Distribution> omega{Distribution::bernoulli(0.75)};

    // l1 radius 0.25 keeps counts with |k/8 - 0.75| <= 0.125.
    TypicalSetSpec spec = build_typical_sets(omega, q, 8, 0.25);
    std::set<std::int64_t> ks;
    for (const auto& t : spec.member_types) ks.insert(t.counts[1]);
    CHECK(ks == std::set<std::int64_t>{5, 6, 7});
    double tail = binom_pmf(8, 5, 0.75) + binom_pmf(8, 6, 0.75) + binom_pmf(8, 7, 0.75);
    CHECK(measure_of_typical_set(omega[0], spec) == doctest::Approx(tail).epsilon(1e-12));

    // Doubling the radius reaches counts k/8 in [0.5, 1].
    TypicalSetSpec wide = build_typical_sets(omega, q, 8, 0.5);
    std::set<std::int64_t> ks_wide;
    for (const auto& t : wide.member_types) ks_wide.insert(t.counts[1]);
    CHECK(ks_wide == std::set<std::int64_t>{4, 5, 6, 7, 8});
    double tail_wide = 0.0;
    for (int k = 4; k <= 8; ++k) tail_wide += binom_pmf(8, k, 0.75);
    CHECK(measure_of_typical_set(omega[0], wide) == doctest::Approx(tail_wide).epsilon(1e-12));
}

TEST_CASE("brute-force word enumeration agrees with type sums") {
    std::mt19937_64 rng(20240817);
    auto random_distribution = [&](int d, bool zero_first) {
        std::vector<double> v(static_cast<std::size_t>(d));
        double sum = 0.0;
        for (auto& x : v) {
            x = static_cast<double>(rng() >> 11) * 0x1.0p-53 + 1e-3;
            sum += x;
        }
        if (zero_first && d > 1) {
            sum -= v[0];
            v[0] = 0.0;
        }
        for (auto& x : v) x /= sum;
        return Distribution(v);
    };

    for (int d = 2; d <= 3; ++d) {
        for (int n = 1; n <= 7; ++n) {
            Distribution q = random_distribution(d, n % 2 == 0);
            std::vector<Distribution> omega{random_distribution(d, false),
                                            random_distribution(d, n % 3 == 0)};
            TypicalSetSpec spec = build_typical_sets(omega, q, n, 0.4);
            for (const auto& p : {omega[0], omega[1], q}) {
                double exact = measure_of_typical_set(p, spec);
                double brute = brute_force_measure(p, spec);
                CHECK(exact == doctest::Approx(brute).epsilon(1e-12));
            }
            // Structural invariants of the two components.
            for (const auto& t : spec.member_types)
                for (int a = 0; a < d; ++a)
                    if (t.counts[static_cast<std::size_t>(a)] > 0) CHECK(q[a] > 0.0);
            for (const auto& t : spec.null_types) {
                bool touches_null = false;
                for (int a = 0; a < d; ++a)
                    if (t.counts[static_cast<std::size_t>(a)] > 0 && q[a] <= 0.0) touches_null = true;
                CHECK(touches_null);
            }
        }
    }
}

TEST_CASE("l1-ball divergence minimum: two letters in closed form") {
    std::mt19937_64 rng(7);
    auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 200; ++trial) {
        double p = 0.05 + 0.9 * u01();
        double qv = 0.05 + 0.9 * u01();
        double eps = 0.01 + u01();
        Distribution center = Distribution::bernoulli(p);
        Distribution q = Distribution::bernoulli(qv);
        // The ball is the parameter interval [p - eps/2, p + eps/2]; the
        // divergence is convex in the parameter with its minimum at qv.
        double lo = std::max(0.0, p - eps / 2.0), hi = std::min(1.0, p + eps / 2.0);
        double r = std::clamp(qv, lo, hi);
        double expect = bern_divergence(r, qv);
        CHECK(min_rel_entropy_in_l1_ball(center, eps, q) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("l1-ball divergence minimum: three letters against a grid oracle") {
    std::mt19937_64 rng(11);
    auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<double> pv{0.2 + 0.4 * u01(), 0.1 + 0.3 * u01(), 0.0};
        pv[2] = 1.0 - pv[0] - pv[1];
        std::vector<double> qv{0.2 + 0.4 * u01(), 0.1 + 0.3 * u01(), 0.0};
        qv[2] = 1.0 - qv[0] - qv[1];
        Distribution center(pv), q(qv);
        double eps = 0.05 + 0.3 * u01();

        double best = kInf;
        const int grid = 240;
        for (int a = 0; a <= grid; ++a) {
            for (int b = 0; a + b <= grid; ++b) {
                Distribution r({static_cast<double>(a) / grid, static_cast<double>(b) / grid,
                                static_cast<double>(grid - a - b) / grid});
                if (l1_distance(r, center) <= eps) best = std::min(best, rel_entropy(r, q));
            }
        }
        double v = min_rel_entropy_in_l1_ball(center, eps, q);
        CHECK(v <= best + 1e-9); // never loses to a feasible grid point
        CHECK(v >= best - 8e-3); // grid pins it from below up to the grid's own l1 quantization
        CHECK(v >= -1e-12);
    }
}

TEST_CASE("pinsker inequality on random pairs") {
    std::mt19937_64 rng(99);
    auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 300; ++trial) {
        int d = 2 + static_cast<int>(rng() % 4);
        std::vector<double> a(static_cast<std::size_t>(d)), b(static_cast<std::size_t>(d));
        double sa = 0.0, sb = 0.0;
        for (int i = 0; i < d; ++i) {
            a[static_cast<std::size_t>(i)] = u01() + 1e-6;
            b[static_cast<std::size_t>(i)] = u01() + 1e-6;
            sa += a[static_cast<std::size_t>(i)];
            sb += b[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < d; ++i) {
            a[static_cast<std::size_t>(i)] /= sa;
            b[static_cast<std::size_t>(i)] /= sb;
        }
        Distribution p1(a), p2(b);
        double l1 = l1_distance(p1, p2);
        CHECK(rel_entropy(p1, p2) >= l1 * l1 / (2.0 * kLn2) - 1e-12);
    }
}

TEST_CASE("schedule validation") {
    CHECK_NOTHROW(PowerLawSchedule{}.validate());
    CHECK_THROWS_AS((PowerLawSchedule{1.0, 0.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((PowerLawSchedule{1.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((PowerLawSchedule{-1.0, 0.25}.validate()), std::invalid_argument);
    CHECK(PowerLawSchedule{2.0, 0.25}.eps(16) == doctest::Approx(1.0));
}

TEST_CASE("experiment with omega = {q} separates nothing") {
    Distribution q = Distribution::bernoulli(0.5);
    auto points = classical_sanov_experiment({q}, q, {5, 20, 80, 200}, PowerLawSchedule{});
    for (const auto& pt : points) {
        CHECK(pt.exponent == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(pt.exponent_upper_ok);
        CHECK(pt.slack_ok);
        CHECK(pt.monotone_ok);
    }
    double last_rate = -points.back().log2_q_measure / 200.0;
    CHECK(last_rate >= 0.0);
    CHECK(last_rate < 0.05);
}

TEST_CASE("experiment on the bernoulli grid") {
    Distribution q = Distribution::bernoulli(0.5);
    auto omega = bern_grid(0.60, 0.80, 0.01);
    auto points = classical_sanov_experiment(omega, q, {10, 50, 100, 400}, PowerLawSchedule{});
    double prev = -kInf;
    for (const auto& pt : points) {
        CHECK(pt.exponent_upper_ok);
        CHECK(pt.slack_ok);
        CHECK(pt.monotone_ok);
        CHECK(pt.exponent >= prev - 1e-12);
        prev = pt.exponent;
        CHECK(pt.divergence == doctest::Approx(bern_divergence(0.60, 0.5)).epsilon(1e-12));
    }
    // Threaded evaluation returns the same rows.
    auto threaded = classical_sanov_experiment(omega, q, {10, 50, 100, 400}, PowerLawSchedule{}, 4);
    for (std::size_t i = 0; i < points.size(); ++i) {
        CHECK(points[i].log2_q_measure == doctest::Approx(threaded[i].log2_q_measure).epsilon(1e-15));
        CHECK(points[i].exponent == doctest::Approx(threaded[i].exponent).epsilon(1e-15));
    }
}

TEST_CASE("experiment input validation") {
    Distribution q = Distribution::bernoulli(0.5);
    CHECK_THROWS_AS(classical_sanov_experiment({q}, q, {10, 5}, PowerLawSchedule{}), std::invalid_argument);
    CHECK_THROWS_AS(classical_sanov_experiment({q}, q, {}, PowerLawSchedule{}), std::invalid_argument);
    CHECK_THROWS_AS(classical_sanov_experiment({q}, q, {10}, PowerLawSchedule{1.0, 0.9}),
                    std::invalid_argument);
}

TEST_CASE("experiment with empty omega_1 reports infinite divergence") {
    Distribution q({0.0, 1.0});
    Distribution p({1.0, 0.0});
    auto points = classical_sanov_experiment({p}, q, {3, 6}, PowerLawSchedule{});
    for (const auto& pt : points) {
        CHECK(pt.exponent == kInf);
        CHECK(pt.divergence == kInf);
        CHECK(pt.log2_q_measure == -kInf);
        CHECK(pt.exponent_upper_ok);
        CHECK(pt.p_measures[0] == doctest::Approx(1.0));
    }
}

TEST_CASE("concentration tail bound holds from some point on") {
    Distribution q = Distribution::bernoulli(0.5);
    auto omega = bern_grid(0.60, 0.80, 0.01);
    std::vector<std::int64_t> ns{25, 50, 100, 200, 400};
    auto points = classical_sanov_experiment(omega, q, ns, PowerLawSchedule{});
    const double b = 1.0 / (2.0 * kLn2);
    for (std::size_t s = 0; s < omega.size(); ++s) {
        const auto& last = points.back();
        double bound = std::exp2(2.0 * std::log2(static_cast<double>(last.n) + 1.0) -
                                 static_cast<double>(last.n) * b * last.eps_n * last.eps_n);
        CHECK(1.0 - last.p_measures[s] <= bound + 1e-12);
    }
}
