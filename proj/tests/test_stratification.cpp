#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <cstdint>
#include <vector>

#include "partitions/errors.hpp"
#include "partitions/model_params.hpp"
#include "partitions/partition.hpp"
#include "partitions/stratification.hpp"
#include "partitions/theory.hpp"
#include "partitions/tilt.hpp"

using namespace partitions;

TEST_SUITE("stratification") {

TEST_CASE("threshold boundaries at an exactly known scale") {
    // p = 1, C = 1, N = 10000: the scale is exactly sqrt(N) = 100.
    const ModelParams params = ModelParams::power_law(1.0, 1.0);
    const StratificationPlan plan =
        StratificationPlan::threshold(params, 10000, StrataGrid::from_cuts({1.0, 2.5}));
    CHECK(plan.regime() == Regime::Threshold);
    CHECK(plan.N() == 10000);
    CHECK(plan.q() == 2);
    REQUIRE(plan.M().size() == 4);
    CHECK(plan.M(0) == 0);
    CHECK(plan.M(1) == 100);
    CHECK(plan.M(2) == 250);
    CHECK(plan.M(3) == 10001);
    CHECK(plan.rho().empty());
    CHECK(plan.grid().q() == 2);

    // First cut below one part-size, or two cuts landing on the same integer,
    // cannot define strata.
    CHECK_THROWS_AS(
        StratificationPlan::threshold(params, 10000, StrataGrid::from_cuts({0.005})),
        std::invalid_argument);
    CHECK_THROWS_AS(
        StratificationPlan::threshold(params, 10000, StrataGrid::from_cuts({1.0, 1.001})),
        std::invalid_argument);
}

TEST_CASE("small-size boundaries and limiting ratios") {
    const ModelParams params = ModelParams::power_law(1.0, 1.0);
    const StratificationPlan plan =
        StratificationPlan::small_size(params, 100000, {1.0, 2.0}, 0.25);
    CHECK(plan.regime() == Regime::SmallSize);
    CHECK(plan.q() == 2);
    REQUIRE(plan.M().size() == 4);
    CHECK(plan.M(0) == 0);
    CHECK(plan.M(1) == 18);   // ceil(100000^0.25)
    CHECK(plan.M(2) == 36);   // ceil(2 * 100000^0.25)
    CHECK(plan.M(3) == 100001);
    REQUIRE(plan.rho().size() == 2);
    CHECK(plan.rho()[0] == 0.0);
    CHECK(plan.rho()[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(plan.grid(), std::logic_error);

    // gamma must stay below 1/(p+1); coefficients must be positive and
    // strictly increasing; the regime needs power-law weights.
    CHECK_THROWS_AS(StratificationPlan::small_size(params, 100000, {1.0, 2.0}, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(StratificationPlan::small_size(params, 100000, {2.0, 1.0}, 0.25),
                    std::invalid_argument);
    CHECK_THROWS_AS(StratificationPlan::small_size(params, 100000, {0.0, 1.0}, 0.25),
                    std::invalid_argument);
    CHECK_THROWS_AS(StratificationPlan::small_size(ModelParams::explicit_table({1.0, 1.0}),
                                                   100000, {1.0, 2.0}, 0.25),
                    std::invalid_argument);
}

TEST_CASE("explicit cut points") {
    const StratificationPlan plan =
        StratificationPlan::explicit_cuts(100, {5, 20}, Regime::SmallSize);
    CHECK(plan.q() == 2);
    CHECK(plan.M(1) == 5);
    CHECK(plan.M(2) == 20);
    CHECK(plan.M(3) == 101);
    REQUIRE(plan.rho().size() == 2);
    CHECK(plan.rho()[0] == 0.0);
    CHECK(plan.rho()[1] == doctest::Approx(0.25).epsilon(1e-14));

    CHECK_THROWS_AS(StratificationPlan::explicit_cuts(100, {0, 20}, Regime::SmallSize),
                    std::invalid_argument);
    CHECK_THROWS_AS(StratificationPlan::explicit_cuts(100, {20, 20}, Regime::SmallSize),
                    std::invalid_argument);
    CHECK_THROWS_AS(StratificationPlan::explicit_cuts(100, {5, 101}, Regime::SmallSize),
                    std::invalid_argument);
    CHECK_THROWS_AS(StratificationPlan::explicit_cuts(100, {5, 20}, Regime::Threshold).grid(),
                    std::logic_error);
}

TEST_CASE("moment tables match brute-force stratum sums") {
    const ModelParams params = ModelParams::power_law(1.0, 1.3);
    const std::int64_t N = 200;
    const StratificationPlan plan =
        StratificationPlan::threshold(params, N, StrataGrid::from_cuts({0.5, 1.5}));
    const double delta = 0.1;
    const MomentTables tables = compute_moment_tables(params, plan, delta);
    CHECK(tables.delta == delta);
    const int q = plan.q();
    REQUIRE(tables.S_star.size() == std::size_t(q + 1));
    REQUIRE(tables.S.size() == std::size_t(q + 1));

    for (int j = 0; j <= q; ++j) {
        double s = 0.0, e = 0.0, v = 0.0;
        const std::int64_t lo = std::max<std::int64_t>(plan.M(j), 1);
        const std::int64_t hi = std::min<std::int64_t>(plan.M(j + 1) - 1, N);
        for (std::int64_t k = lo; k <= hi; ++k) {
            const double w = params.a(k) * std::exp(-delta * double(k));
            s += w;
            e += double(k) * w;
            v += double(k) * double(k) * w;
        }
        CHECK(tables.S_star[(std::size_t)j] == doctest::Approx(s).epsilon(1e-12));
        CHECK(tables.E_star[(std::size_t)j] == doctest::Approx(e).epsilon(1e-12));
        CHECK(tables.V_star[(std::size_t)j] == doctest::Approx(v).epsilon(1e-12));
    }

    // Cumulative: head value for index 0, exact suffix sums above.
    CHECK(tables.S[0] == tables.S_star[0]);
    CHECK(tables.E[0] == tables.E_star[0]);
    CHECK(tables.V[0] == tables.V_star[0]);
    for (int j = 1; j <= q; ++j) {
        double s = 0.0, e = 0.0, v = 0.0;
        for (int i = j; i <= q; ++i) {
            s += tables.S_star[(std::size_t)i];
            e += tables.E_star[(std::size_t)i];
            v += tables.V_star[(std::size_t)i];
        }
        CHECK(tables.S[(std::size_t)j] == doctest::Approx(s).epsilon(1e-13));
        CHECK(tables.E[(std::size_t)j] == doctest::Approx(e).epsilon(1e-13));
        CHECK(tables.V[(std::size_t)j] == doctest::Approx(v).epsilon(1e-13));
    }

    // At the solved tilt, the stratum mean masses account for all of N.
    const double root = solve_tilt(params, N).delta;
    const MomentTables at_root = compute_moment_tables(params, plan, root);
    double total = 0.0;
    for (int j = 0; j <= q; ++j) total += at_root.E_star[(std::size_t)j];
    CHECK(total == doctest::Approx(double(N)).epsilon(1e-6));
}

TEST_CASE("threshold scaling recovers the raw statistics of a known partition") {
    const ModelParams params = ModelParams::power_law(1.0, 1.0);
    const std::int64_t N = 12;
    // Scale is sqrt(12) = 3.46..: cuts at 1.0 and 2.0 give M = [0, 3, 6, 13].
    const StratificationPlan plan =
        StratificationPlan::threshold(params, N, StrataGrid::from_cuts({1.0, 2.0}));
    REQUIRE(plan.M(1) == 3);
    REQUIRE(plan.M(2) == 6);

    const double delta = solve_tilt(params, N).delta;
    const MomentTables tables = compute_moment_tables(params, plan, delta);
    const Partition eta = Partition::from_parts({5, 3, 3, 1});
    const ScaledStats stats = scale_stats(eta, plan, tables, params);
    CHECK(stats.regime == Regime::Threshold);
    REQUIRE(stats.nu_star_hat.size() == 3);
    REQUIRE(stats.K_star_hat.size() == 3);
    REQUIRE(stats.nu_hat.size() == 3);
    REQUIRE(stats.K_hat.size() == 2);

    // Invert the affine normalization and compare with counts by hand:
    // parts {5,3,3,1} give per-stratum counts (1,3,0) and masses (1,11,0).
    const double u1 = plan.grid().u(1);
    const double scale_nu = std::sqrt((b_r(params, 0.0, 0.0) - b_r(params, 0.0, u1)) / tables.S[0]);
    const double scale_K = std::sqrt((b_r(params, 2.0, 0.0) - b_r(params, 2.0, u1)) / tables.V[0]);
    const double raw_nu[3] = {1.0, 3.0, 0.0};
    const double raw_K[3] = {1.0, 11.0, 0.0};
    for (int j = 0; j <= 2; ++j) {
        const double nu =
            stats.nu_star_hat[(std::size_t)j] / scale_nu + tables.S_star[(std::size_t)j];
        const double K =
            stats.K_star_hat[(std::size_t)j] / scale_K + tables.E_star[(std::size_t)j];
        CHECK(nu == doctest::Approx(raw_nu[j]).epsilon(1e-10).scale(1.0));
        CHECK(K == doctest::Approx(raw_K[j]).epsilon(1e-10).scale(1.0));
    }

    // Cumulative raw values: tail counts (from M_1, M_2) are 3 and 0, tail
    // masses 11 and 0; index 0 repeats the first-stratum count.
    CHECK(stats.nu_hat[0] == stats.nu_star_hat[0]);
    const double raw_nu_tail[2] = {3.0, 0.0};
    const double raw_K_tail[2] = {11.0, 0.0};
    for (int j = 1; j <= 2; ++j) {
        const double nu =
            stats.nu_hat[(std::size_t)j] / scale_nu + tables.S[(std::size_t)j];
        const double K = stats.K_hat[(std::size_t)(j - 1)] / scale_K + tables.E[(std::size_t)j];
        CHECK(nu == doctest::Approx(raw_nu_tail[j - 1]).epsilon(1e-10).scale(1.0));
        CHECK(K == doctest::Approx(raw_K_tail[j - 1]).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("per-sample linear identities between scaled forms") {
    const ModelParams params = ModelParams::power_law(1.0, 1.0);
    const std::int64_t N = 10000;
    const StratificationPlan plan =
        StratificationPlan::threshold(params, N, StrataGrid::from_cuts({0.7, 1.4, 2.8}));
    const double delta = solve_tilt(params, N).delta;
    const MomentTables tables = compute_moment_tables(params, plan, delta);
    const int q = plan.q();

    // A few structurally different partitions of N.
    std::vector<Partition> etas;
    etas.push_back(Partition::from_counts({{1, 10000}}));
    etas.push_back(Partition::from_counts({{1, 4}, {2, 3}, {90, 10}, {150, 20}, {6090, 1}}));
    etas.push_back(Partition::from_counts({{250, 40}}));
    for (const Partition& eta : etas) {
        REQUIRE(eta.total() == N);
        const ScaledStats s = scale_stats(eta, plan, tables, params);

        // Tail sums of the per-stratum values reproduce the cumulative ones.
        CHECK(s.nu_hat[0] == s.nu_star_hat[0]);
        for (int j = 1; j <= q; ++j) {
            double nu_sum = 0.0, K_sum = 0.0;
            for (int i = j; i <= q; ++i) {
                nu_sum += s.nu_star_hat[(std::size_t)i];
                K_sum += s.K_star_hat[(std::size_t)i];
            }
            CHECK(s.nu_hat[(std::size_t)j] ==
                  doctest::Approx(nu_sum).epsilon(1e-10).scale(1.0));
            CHECK(s.K_hat[(std::size_t)(j - 1)] ==
                  doctest::Approx(K_sum).epsilon(1e-10).scale(1.0));
        }

        // The fixed total makes the scaled masses sum to (nearly) zero: the
        // defect is the tilt residual times a tiny scale factor.
        double K_all = 0.0;
        for (int j = 0; j <= q; ++j) K_all += s.K_star_hat[(std::size_t)j];
        CHECK(std::abs(K_all) <= 1e-6);
    }
}

TEST_CASE("scaling rejects mismatched totals and empty strata") {
    const ModelParams params = ModelParams::power_law(1.0, 1.0);
    const StratificationPlan plan =
        StratificationPlan::threshold(params, 12, StrataGrid::from_cuts({1.0, 2.0}));
    const MomentTables tables = compute_moment_tables(params, plan, 0.2);
    CHECK_THROWS_AS(scale_stats(Partition::from_parts({5, 3, 3}), plan, tables, params),
                    std::invalid_argument);

    // A stratum holding no defined part sizes has zero weight and cannot be
    // normalized.
    const ModelParams tiny = ModelParams::explicit_table({1.0});
    const StratificationPlan empty_stratum =
        StratificationPlan::explicit_cuts(4, {2, 3}, Regime::SmallSize);
    const MomentTables tiny_tables = compute_moment_tables(tiny, empty_stratum, 0.1);
    CHECK_THROWS_AS(
        scale_stats(Partition::from_counts({{1, 4}}), empty_stratum, tiny_tables, tiny),
        NumericError);
}

TEST_CASE("small-size scaling recovers raw statistics with per-stratum normalizers") {
    const ModelParams params = ModelParams::power_law(1.0, 1.0);
    const std::int64_t N = 12;
    const StratificationPlan plan =
        StratificationPlan::explicit_cuts(N, {3, 6}, Regime::SmallSize);
    const double delta = solve_tilt(params, N).delta;
    const MomentTables tables = compute_moment_tables(params, plan, delta);
    const ScaledStats stats =
        scale_stats(Partition::from_parts({5, 3, 3, 1}), plan, tables, params);
    CHECK(stats.regime == Regime::SmallSize);
    REQUIRE(stats.nu_star_hat.size() == 3);
    REQUIRE(stats.K_star_hat.size() == 2);  // terminal stratum carries no mass entry
    CHECK(stats.nu_hat.empty());
    CHECK(stats.K_hat.empty());

    const double raw_nu[3] = {1.0, 3.0, 0.0};
    const double raw_K[2] = {1.0, 11.0};
    for (int j = 0; j <= 2; ++j) {
        const double nu = stats.nu_star_hat[(std::size_t)j] *
                              std::sqrt(tables.S_star[(std::size_t)j]) +
                          tables.S_star[(std::size_t)j];
        CHECK(nu == doctest::Approx(raw_nu[j]).epsilon(1e-10).scale(1.0));
    }
    for (int j = 0; j <= 1; ++j) {
        const double K = stats.K_star_hat[(std::size_t)j] *
                             std::sqrt(tables.V_star[(std::size_t)j]) +
                         tables.E_star[(std::size_t)j];
        CHECK(K == doctest::Approx(raw_K[j]).epsilon(1e-10).scale(1.0));
    }
}

}  // TEST_SUITE
