#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "partitions/errors.hpp"
#include "partitions/model_params.hpp"
#include "partitions/tilt.hpp"

using namespace partitions;

namespace {

// Independent root finder: plain full-range sum and interval bisection, no
// shared code with the production solver beyond the parameter accessors.
double bisect_tilt(const ModelParams& params, std::int64_t N) {
    auto weighted_sum = [&](double delta) {
        double s = 0.0;
        const std::int64_t k_max = std::min<std::int64_t>(N, params.max_size());
        for (std::int64_t k = 1; k <= k_max; ++k)
            s += double(k) * params.a(k) * std::exp(-delta * double(k));
        return s - double(N);
    };
    // The root can be negative when the weight table is short relative to N,
    // so bracket both signs. Overflow to +inf at the low end is harmless.
    double lo = -64.0, hi = 64.0;
    REQUIRE(weighted_sum(lo) > 0.0);
    REQUIRE(weighted_sum(hi) < 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (weighted_sum(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("tilt") {

TEST_CASE("solver meets the residual contract across parameters") {
    for (double p : {0.5, 1.0, 2.0}) {
        for (double C : {1.0, 4.0}) {
            const ModelParams params = ModelParams::power_law(C, p);
            for (std::int64_t N : {std::int64_t(10), std::int64_t(1000), std::int64_t(1000000)}) {
                const TiltSolution sol = solve_tilt(params, N);
                INFO("p = ", p, " C = ", C, " N = ", N);
                CHECK(sol.residual <= 1e-9 * double(N));
                CHECK(sol.N == N);
            }
        }
    }
}

TEST_CASE("solver agrees with an independent bisection oracle") {
    const ModelParams params = ModelParams::power_law(1.0, 1.5);
    const std::int64_t N = 5000;
    const TiltSolution sol = solve_tilt(params, N);
    const double oracle = bisect_tilt(params, N);
    CHECK(sol.delta == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("asymptotic scaling of the root") {
    // delta_N * N^{1/(p+1)} / h approaches 1; at N = 1e6 it must lie within
    // ten percent.
    for (double p : {1.0, 2.0}) {
        const ModelParams params = ModelParams::power_law(1.0, p);
        const std::int64_t N = 1000000;
        const TiltSolution sol = solve_tilt(params, N);
        const ScalingInfo scaling = scaling_info(params, N);
        const double ratio = sol.delta * std::pow(double(N), 1.0 / (p + 1.0)) / scaling.h;
        INFO("p = ", p, " ratio = ", ratio);
        CHECK(ratio >= 0.9);
        CHECK(ratio <= 1.1);
    }
}

TEST_CASE("scaling constants in closed form") {
    {
        const ScalingInfo s = scaling_info(ModelParams::power_law(1.0, 1.0), 400);
        CHECK(s.h == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(s.r_N == doctest::Approx(20.0).epsilon(1e-12));
    }
    {
        // h = (C Gamma(p+1))^{1/(p+1)} = 2^{1/3} at p = 2, C = 1.
        const ScalingInfo s = scaling_info(ModelParams::power_law(1.0, 2.0), 1000);
        CHECK(s.h == doctest::Approx(1.25992104989487316).epsilon(1e-13));
        CHECK(s.r_N == doctest::Approx(10.0 / 1.25992104989487316).epsilon(1e-12));
    }
    CHECK_THROWS_AS(scaling_info(ModelParams::explicit_table({1.0, 2.0}), 10),
                    std::invalid_argument);
}

TEST_CASE("solver works on explicit weight tables") {
    const ModelParams params = ModelParams::explicit_table({1.0, 2.0, 3.0});
    const TiltSolution sol = solve_tilt(params, 50);
    CHECK(sol.residual <= 1e-9 * 50.0);
    // Only three weights: the equation balances at a negative tilt.
    CHECK(sol.delta < 0.0);
    CHECK(sol.delta == doctest::Approx(bisect_tilt(params, 50)).epsilon(1e-8));
}

TEST_CASE("weighted sums: early scan stop matches the full range") {
    const ModelParams params = ModelParams::power_law(1.0, 1.0);
    const std::int64_t N = 100000;
    const double delta = 0.004;
    double full = 0.0;
    for (std::int64_t k = 1; k <= N; ++k)
        full += double(k) * params.a(k) * std::exp(-delta * double(k));
    CHECK(tilted_sum(params, N, delta, 1) == doctest::Approx(full).epsilon(1e-11));
    // Monotone decreasing in delta.
    CHECK(tilted_sum(params, N, 0.002, 1) > tilted_sum(params, N, 0.004, 1));
    CHECK(tilted_sum(params, N, 0.004, 1) > tilted_sum(params, N, 0.02, 1));
}

}  // TEST_SUITE
