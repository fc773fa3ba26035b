#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <cstdint>
#include <random>
#include <vector>

#include "partitions/statistics.hpp"

using namespace partitions;

TEST_SUITE("statistics") {

TEST_CASE("moment accumulator against hand-computed sums") {
    MomentAccumulator acc(2);
    acc.add({1.0, 2.0});
    acc.add({3.0, 4.0});
    acc.add({5.0, 12.0});
    CHECK(acc.count() == 3);
    CHECK(acc.dim() == 2);
    // Means (3, 6); unbiased variances 4 and 28; covariance 10.
    CHECK(acc.mean(0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(acc.mean(1) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(acc.variance(0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(acc.variance(1) == doctest::Approx(28.0).epsilon(1e-12));
    CHECK(acc.covariance(0, 1) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(acc.covariance(1, 0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(acc.correlation(0, 1) == doctest::Approx(10.0 / std::sqrt(4.0 * 28.0)).epsilon(1e-12));
    CHECK(acc.mean_stderr(0) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("merging equals streaming in one accumulator") {
    std::mt19937 gen(321);
    std::uniform_real_distribution<double> dist(-2.0, 5.0);
    MomentAccumulator whole(3), left(3), right(3);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> x = {dist(gen), dist(gen), dist(gen)};
        whole.add(x);
        (i < 80 ? left : right).add(x);
    }
    left.merge(right);
    CHECK(left.count() == whole.count());
    for (int i = 0; i < 3; ++i) {
        CHECK(left.mean(i) == doctest::Approx(whole.mean(i)).epsilon(1e-12));
        for (int j = 0; j < 3; ++j)
            CHECK(left.covariance(i, j) == doctest::Approx(whole.covariance(i, j)).epsilon(1e-12));
    }
}

TEST_CASE("accumulator edge cases") {
    MomentAccumulator acc(2);
    acc.add({1.0, 1.0});
    acc.add({1.0, 2.0});
    acc.add({1.0, 3.0});
    // The first coordinate is constant: zero variance, correlation defined as 0.
    CHECK(acc.variance(0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(acc.correlation(0, 1) == 0.0);
    CHECK_THROWS_AS(acc.add({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MomentAccumulator(0), std::invalid_argument);
    MomentAccumulator single(1);
    single.add({5.0});
    CHECK_THROWS_AS(single.variance(0), std::logic_error);
}

TEST_CASE("chi-square tail probabilities against closed forms") {
    // df = 2: survival function is exp(-x/2).
    CHECK(chi_square_pvalue(2.5, 2.0) == doctest::Approx(std::exp(-1.25)).epsilon(1e-12));
    // df = 1: 2*(1 - Phi(sqrt(x))); at x = 1 this is 0.31731050786291410.
    CHECK(chi_square_pvalue(1.0, 1.0) == doctest::Approx(0.31731050786291410).epsilon(1e-10));
    CHECK(chi_square_pvalue(0.0, 5.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(chi_square_pvalue(-3.0, 5.0) == 1.0);
    CHECK(chi_square_pvalue(1e4, 3.0) < 1e-12);
}

TEST_CASE("normality test accepts normal samples, continuous and lattice") {
    std::mt19937 gen(777);
    std::normal_distribution<double> normal(1.3, 2.0);
    std::vector<double> continuous, lattice;
    for (int i = 0; i < 5000; ++i) {
        const double x = normal(gen);
        continuous.push_back(x);
        // Discretized at ~0.3 sigma: exactly the situation the binned test
        // must tolerate.
        lattice.push_back(0.6 * std::round(x / 0.6));
    }
    const NormalityResult a = normality_test(continuous);
    INFO("continuous: stat = ", a.statistic, " df = ", a.df, " p = ", a.p_value);
    CHECK(a.pass);
    CHECK_FALSE(a.degenerate);
    CHECK(a.df > 0);
    const NormalityResult b = normality_test(lattice);
    INFO("lattice: stat = ", b.statistic, " df = ", b.df, " p = ", b.p_value);
    CHECK(b.pass);
    CHECK_FALSE(b.degenerate);
}

TEST_CASE("normality test rejects a skewed distribution") {
    std::mt19937 gen(888);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> values;
    for (int i = 0; i < 5000; ++i) values.push_back(expo(gen));
    const NormalityResult r = normality_test(values);
    INFO("stat = ", r.statistic, " df = ", r.df, " p = ", r.p_value);
    CHECK_FALSE(r.pass);
    CHECK(r.p_value < 1e-6);
}

TEST_CASE("normality test degenerates gracefully") {
    // Too few points to form enough cells.
    std::vector<double> few = {0.1, 0.4, -0.2, 0.9, 0.3, -0.5};
    const NormalityResult a = normality_test(few);
    CHECK(a.degenerate);
    CHECK(a.pass);
    CHECK_FALSE(a.note.empty());
    // Constant sample: no spacing to detect.
    std::vector<double> constant(100, 2.5);
    const NormalityResult b = normality_test(constant);
    CHECK(b.degenerate);
    CHECK(b.pass);
}

}  // TEST_SUITE
