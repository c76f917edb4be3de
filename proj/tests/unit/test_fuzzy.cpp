#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "mfpotts/critical.hpp"
#include "mfpotts/errors.hpp"
#include "mfpotts/finite_volume.hpp"
#include "mfpotts/fuzzy.hpp"

using namespace mfpotts;

namespace {

double row_sum(const std::vector<double>& row) {
    double s = 0.0;
    for (double v : row) s += v;
    return s;
}

/// Largest jump of q_infinity(0 | (1-t, t)) between adjacent points of a t-grid.
double max_adjacent_jump(double beta, double z, const SpinPartition& part, double step) {
    double worst = 0.0;
    double prev = q_infinity(0, std::vector<double>{1.0, 0.0}, beta, z, part);
    for (double t = step; t <= 1.0 + 1e-12; t += step) {
        const double tt = std::min(t, 1.0);
        const double v = q_infinity(0, std::vector<double>{1.0 - tt, tt}, beta, z, part);
        worst = std::max(worst, std::abs(v - prev));
        prev = v;
    }
    return worst;
}

}  // namespace

TEST_CASE("spin partitions") {
    CHECK_THROWS_AS(SpinPartition({}), DomainError);
    CHECK_THROWS_AS(SpinPartition({2, 0}), DomainError);
    const SpinPartition p({2, 3});
    CHECK(p.q() == 5);
    CHECK(p.classes() == 2);
    CHECK_NOTHROW(p.require_proper());
    CHECK_THROWS_AS(SpinPartition({5}).require_proper(), DomainError);
    CHECK_THROWS_AS(SpinPartition({1, 1, 1}).require_proper(), DomainError);
}

TEST_CASE("c_factor") {
    CHECK(c_factor(0.0, 3, 3) == doctest::Approx(3.0));
    for (double x : {0.0, 0.5, 4.0, 40.0}) CHECK(c_factor(x, 1, 3) == doctest::Approx(std::exp(x)));
    CHECK(c_factor(1.0, 3, 2.5) == doctest::Approx(3 * std::exp(1.0 / std::pow(3.0, 1.5))));

    SUBCASE("supercritical branch") {
        const double u = largest_mf_solution({2, 3, 3});
        const double expected = std::exp(3 * std::pow((1 - u) / 2, 2)) + std::exp(3 * std::pow((1 + u) / 2, 2));
        CHECK(c_factor(3.0, 2, 3) == doctest::Approx(expected).epsilon(1e-12));
        // r A(x, r, M) approaches C(x, r) as M grows
        const double a = 2 * partition_expectation(3.0, 2, 4000, 3);
        CHECK(a == doctest::Approx(expected).epsilon(2e-2));
    }

    SUBCASE("raises at the class critical temperature") {
        const double bc = class_critical_beta(3, 3);
        CHECK_THROWS_AS(c_factor(bc, 3, 3), AtDiscontinuity);
        CHECK_THROWS_AS(c_factor(bc + 5e-10, 3, 3), AtDiscontinuity);
        CHECK_NOTHROW(c_factor(bc - 1e-6, 3, 3));
        CHECK_NOTHROW(c_factor(bc + 1e-6, 3, 3));
        CHECK_THROWS_AS(c_factor(-1.0, 3, 3), DomainError);
    }

    SUBCASE("subcritical branch continuous up to the threshold") {
        const double bc = class_critical_beta(3, 3);
        const double limit = 3 * std::exp(bc / 9);
        for (double h : {1e-2, 1e-4, 1e-6}) CHECK(std::abs(c_factor(bc - h, 3, 3) - limit) <= 2 * h);
    }
}

TEST_CASE("class critical temperatures") {
    CHECK(std::isinf(class_critical_beta(1, 3)));
    CHECK(class_critical_beta(2, 3) == 2.0);
    CHECK(class_critical_beta(3, 2) == doctest::Approx(4 * std::log(2.0)).epsilon(1e-9));
    CHECK(class_critical_beta(3, 3) == critical_temperatures(3, 3).beta_c);

    SUBCASE("concurrent lookups agree") {
        std::vector<double> results(8);
        std::vector<std::thread> pool;
        for (int i = 0; i < 8; ++i) {
            pool.emplace_back([&, i] { results[static_cast<std::size_t>(i)] = class_critical_beta(4 + i % 2, 2.75); });
        }
        for (auto& t : pool) t.join();
        for (int i = 0; i < 8; ++i) CHECK(results[static_cast<std::size_t>(i)] == class_critical_beta(4 + i % 2, 2.75));
    }
}

TEST_CASE("kernel rows") {
    const SpinPartition equal({2, 2, 2});
    for (double beta : {0.0, 0.7, 3.0, 10.0}) {
        const auto row = q_infinity_row(std::vector<double>(3, 1.0 / 3), beta, 3, equal);
        for (double v : row) CHECK(v == doctest::Approx(1.0 / 3));
    }

    const SpinPartition p23({2, 3});
    for (double a : {0.1, 0.5, 0.9}) {
        const auto row = q_infinity_row(std::vector<double>{a, 1 - a}, 0.0, 3, p23);
        CHECK(row[0] == doctest::Approx(0.4));
        CHECK(row[1] == doctest::Approx(0.6));
    }

    const SpinPartition p12({1, 2});
    const std::vector<double> half{0.5, 0.5};
    const double c1 = c_factor(0.25, 1, 3), c2 = c_factor(0.25, 2, 3);
    CHECK(q_infinity(0, half, 1.0, 3, p12) == doctest::Approx(c1 / (c1 + c2)).epsilon(1e-14));

    CHECK_THROWS_AS(q_infinity(2, half, 1.0, 3, p12), DomainError);
    CHECK_THROWS_AS(q_infinity_row(std::vector<double>{0.5, 0.4}, 1.0, 3, p12), DomainError);
    CHECK_THROWS_AS(q_infinity_row(std::vector<double>{1.0}, 1.0, 3, p12), DomainError);

    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> unif(0, 1);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> nu{unif(g), unif(g), unif(g)};
        const double s = nu[0] + nu[1] + nu[2];
        for (double& v : nu) v /= s;
        nu[2] = 1.0 - nu[0] - nu[1];
        const auto row = q_infinity_row(nu, 8 * unif(g), 2 + 4 * unif(g), SpinPartition({1, 2, 4}));
        CHECK(std::abs(row_sum(row) - 1.0) <= 1e-12);
    }
}

TEST_CASE("kernel discontinuity names the class") {
    const SpinPartition p({2, 3});
    const double bc = class_critical_beta(3, 3);
    const double beta = 1.2 * bc;
    const double nu_star = std::sqrt(bc / beta);
    try {
        q_infinity_row(std::vector<double>{1 - nu_star, nu_star}, beta, 3, p);
        FAIL("expected AtDiscontinuity");
    } catch (const AtDiscontinuity& e) {
        CHECK(e.class_index() == 1);
        CHECK(e.critical_beta() == bc);
    }

    SUBCASE("one-sided limits differ") {
        const auto side = [&](double eps) {
            return q_infinity(1, std::vector<double>{1 - nu_star - eps, nu_star + eps}, beta, 3, p);
        };
        const double below = side(-1e-7), above = side(1e-7);
        CHECK(std::abs(above - below) > 1e-3);
        CHECK(std::abs(side(-1e-8) - below) < 1e-5);
        CHECK(std::abs(side(1e-8) - above) < 1e-5);
    }
}

TEST_CASE("r_star and r_hash") {
    const SpinPartition p23({2, 3});
    CHECK(r_star(p23, 3) == 3);
    CHECK(r_hash(p23) == 2);
    CHECK(r_star(p23, 5) == 2);
    CHECK(r_star(p23, 4) == 3);
    const SpinPartition ones({1, 1, 1});
    CHECK_FALSE(r_star(ones, 3).has_value());
    CHECK_FALSE(r_star(ones, 6).has_value());
    CHECK_FALSE(r_hash(ones).has_value());
}

TEST_CASE("classify") {
    for (double beta : {0.0, 1.0, 100.0}) {
        const auto v = classify(beta, 5, 3, SpinPartition({2, 2, 1}));
        CHECK(v.gibbs_for_all_beta);
        CHECK_FALSE(v.non_gibbs);
        CHECK_FALSE(v.threshold_beta.has_value());
        CHECK(v.discontinuities.empty());
        CHECK(v.regime == GibbsRegime::AllSmallClasses);
    }

    const double bc33 = critical_temperatures(3, 3).beta_c;
    const auto below = classify(bc33 - 1e-6, 5, 3, SpinPartition({2, 3}));
    CHECK_FALSE(below.non_gibbs);
    REQUIRE(below.threshold_beta.has_value());
    CHECK(*below.threshold_beta == bc33);
    CHECK(below.governing_class_size == 3);
    CHECK(below.regime == GibbsRegime::ZTwoToFour);
    CHECK(classify(bc33, 5, 3, SpinPartition({2, 3})).non_gibbs);
    const auto above = classify(1.2 * bc33, 5, 3, SpinPartition({2, 3}));
    CHECK(above.non_gibbs);
    REQUIRE(above.discontinuities.size() == 1);
    CHECK(above.discontinuities[0].class_index == 1);
    CHECK(above.discontinuities[0].nu == doctest::Approx(std::sqrt(1 / 1.2)));

    const double bc25 = critical_temperatures(2, 5).beta_c;
    const auto high = classify(bc25, 5, 5, SpinPartition({2, 3}));
    CHECK(high.non_gibbs);
    CHECK(high.regime == GibbsRegime::ZAboveFour);
    CHECK(high.governing_class_size == 2);
    CHECK(*high.threshold_beta == bc25);
    CHECK_FALSE(classify(bc25 - 1e-6, 5, 5, SpinPartition({2, 3})).non_gibbs);

    CHECK(classify(1.0, 4, 2, SpinPartition({3, 1})).inherited_quadratic_case);
    CHECK_FALSE(classify(1.0, 4, 2.5, SpinPartition({3, 1})).inherited_quadratic_case);

    CHECK_THROWS_AS(classify(1.0, 6, 3, SpinPartition({2, 3})), DomainError);
    CHECK_THROWS_AS(classify(1.0, 5, 3, SpinPartition({5})), DomainError);
    CHECK_THROWS_AS(classify(-1.0, 5, 3, SpinPartition({2, 3})), DomainError);

    SUBCASE("verdict matches the discontinuity scan") {
        std::mt19937_64 g(17);
        std::uniform_int_distribution<int> size(1, 4), count(2, 3);
        std::uniform_real_distribution<double> zd(2, 6), bd(0, 1);
        for (int i = 0; i < 20; ++i) {
            std::vector<int> sizes;
            const int s = count(g);
            for (int j = 0; j < s; ++j) sizes.push_back(size(g));
            if (std::all_of(sizes.begin(), sizes.end(), [](int r) { return r == 1; })) sizes[0] = 2;
            const SpinPartition part(sizes);
            const double z = zd(g);
            const double beta = 3 * bd(g) * beta_one(4, z);
            const auto v = classify(beta, part.q(), z, part);
            bool all_inside = !v.discontinuities.empty();
            for (const auto& d : v.discontinuities) all_inside = all_inside && d.nu < 1.0;
            CAPTURE(z);
            CAPTURE(beta);
            CHECK(v.non_gibbs == all_inside);
            // each flagged point is a genuine jump of the kernel
            for (const auto& d : v.discontinuities) {
                std::vector<double> lo(part.classes(), 0.0), hi(part.classes(), 0.0);
                const std::size_t other = d.class_index == 0 ? 1 : 0;
                lo[d.class_index] = d.nu - 1e-7;
                lo[other] = 1 - lo[d.class_index];
                hi[d.class_index] = d.nu + 1e-7;
                hi[other] = 1 - hi[d.class_index];
                const double a = q_infinity(d.class_index, lo, beta, z, part);
                const double b = q_infinity(d.class_index, hi, beta, z, part);
                CHECK(std::abs(a - b) > 1e-6 * std::max(a, b));
            }
        }
    }
}

TEST_CASE("kernel is Lipschitz below the threshold") {
    const SpinPartition p({2, 3});
    const double beta = 0.8 * class_critical_beta(3, 3);
    const double j1 = max_adjacent_jump(beta, 3, p, 0.01);
    const double j2 = max_adjacent_jump(beta, 3, p, 0.005);
    const double j3 = max_adjacent_jump(beta, 3, p, 0.0025);
    CHECK(j2 / j1 == doctest::Approx(0.5).epsilon(0.1));
    CHECK(j3 / j2 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("regime names") {
    CHECK(to_string(GibbsRegime::AllSmallClasses) == "all_small_classes");
    CHECK(to_string(GibbsRegime::ZAboveFour) == "z_above_four");
    CHECK(to_string(GibbsRegime::ZTwoToFour) == "z_two_to_four");
}
