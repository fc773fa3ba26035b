#include <doctest.h>

#include <cmath>
#include <string>
#include <sstream>
#include <vector>

#include "partitions/model_params.hpp"
#include "partitions/oracle.hpp"
#include "partitions/partition.hpp"
#include "partitions/partition_function.hpp"

using namespace partitions;

namespace {

// Independent normalizing constant: direct enumeration sum of the product
// weights Π a_k^{n_k} / n_k!.
double enumeration_c(std::int64_t N, const ModelParams& params) {
    double c = 0.0;
    for_each_partition(N, [&](const Partition& eta) {
        double w = 1.0;
        for (const auto& [k, n] : eta.counts()) {
            w *= std::pow(params.a(k), double(n)) / std::tgamma(double(n) + 1.0);
        }
        c += w;
    });
    return c;
}

}  // namespace

TEST_SUITE("partition_core") {

TEST_CASE("partition accessors on a hand-built example") {
    const Partition eta = Partition::from_parts({5, 3, 3, 1});
    CHECK(eta.total() == 12);
    CHECK(eta.component_count() == 4);
    CHECK(eta.largest_component() == 5);
    CHECK(eta.multiplicity(3) == 2);
    CHECK(eta.multiplicity(1) == 1);
    CHECK(eta.multiplicity(2) == 0);
    CHECK(eta.tail_count(1) == 4);
    CHECK(eta.tail_count(3) == 3);
    CHECK(eta.tail_count(4) == 1);
    CHECK(eta.tail_count(6) == 0);
    CHECK(eta.tail_mass(1) == 12);
    CHECK(eta.tail_mass(3) == 11);
    CHECK(eta.tail_mass(6) == 0);
    // nu(u) counts components of size >= ceil(u).
    CHECK(eta.nu(0.0) == 4);
    CHECK(eta.nu(2.5) == 3);
    CHECK(eta.nu(3.0) == 3);
    CHECK(eta.nu(3.5) == 1);

    const Partition same = Partition::from_counts({{1, 1}, {3, 2}, {5, 1}});
    CHECK(eta == same);
}

TEST_CASE("partition json round trip") {
    const Partition eta = Partition::from_parts({4, 2, 2, 1, 1, 1});
    const Partition back = Partition::from_json(eta.to_json());
    CHECK(eta == back);
    const Partition empty;
    CHECK(Partition::from_json(empty.to_json()) == empty);
}

TEST_CASE("young curve integral equals total over N") {
    const Partition eta = Partition::from_parts({4, 2, 2, 1});
    const YoungCurve raw = young_curve(eta);
    CHECK(curve_integral(raw) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(curve_value(raw, 0.0) == doctest::Approx(4.0));
    const double r = 3.0;
    const YoungCurve scaled = young_curve(eta, r);
    CHECK(curve_integral(scaled) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalizing constants match exact rational sequences") {
    // Constant weights a_k = 1: c = 1, 1, 3/2, 13/6, 73/24, 167/40.
    {
        const PartitionFunctionTable table(ModelParams::power_law(1.0, 1.0), 5);
        const double expected[] = {1.0, 1.0, 1.5, 13.0 / 6.0, 73.0 / 24.0, 167.0 / 40.0};
        for (int n = 0; n <= 5; ++n)
            CHECK(std::exp(table.log_c(n)) == doctest::Approx(expected[n]).epsilon(1e-12));
    }
    // Linear weights a_k = k: c = 1, 1, 5/2, 31/6, 241/24.
    {
        const PartitionFunctionTable table(ModelParams::power_law(1.0, 2.0), 4);
        const double expected[] = {1.0, 1.0, 2.5, 31.0 / 6.0, 241.0 / 24.0};
        for (int n = 0; n <= 4; ++n)
            CHECK(std::exp(table.log_c(n)) == doctest::Approx(expected[n]).epsilon(1e-12));
    }
}

TEST_CASE("recurrence equals enumeration sums for several parameter sets") {
    struct Case {
        double C, p;
    };
    for (const Case pc : {Case{1.0, 1.0}, Case{1.0, 2.0}, Case{4.0, 1.0}, Case{1.0, 0.5}}) {
        const ModelParams params = ModelParams::power_law(pc.C, pc.p);
        const PartitionFunctionTable table(params, 10);
        for (std::int64_t n = 1; n <= 10; ++n) {
            const double direct = enumeration_c(n, params);
            INFO("C = ", pc.C, " p = ", pc.p, " n = ", n);
            CHECK(std::exp(table.log_c(n)) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("explicit weight tables use the defined sizes only") {
    const ModelParams params = ModelParams::explicit_table({2.0, 1.0, 0.5});
    CHECK(params.max_size() == 3);
    CHECK(params.a(2) == doctest::Approx(1.0));
    const PartitionFunctionTable table(params, 6);
    // c_1 = a_1 = 2; c_2 = (1*2*c_1 + 2*1*c_0)/2 = 3;
    // c_3 = (2*c_2 + 2*c_1 + 3*0.5*c_0)/3 = (6 + 4 + 1.5)/3.
    CHECK(std::exp(table.log_c(1)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::exp(table.log_c(2)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::exp(table.log_c(3)) == doctest::Approx(11.5 / 3.0).epsilon(1e-12));
    // Against the enumeration oracle for every n in range.
    for (std::int64_t n = 1; n <= 6; ++n) {
        double direct = 0.0;
        for_each_partition(n, [&](const Partition& eta) {
            double w = 1.0;
            bool feasible = true;
            for (const auto& [k, m] : eta.counts()) {
                if (k > params.max_size()) {
                    feasible = false;
                    break;
                }
                w *= std::pow(params.a(k), double(m)) / std::tgamma(double(m) + 1.0);
            }
            if (feasible) direct += w;
        });
        CHECK(std::exp(table.log_c(n)) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("ratio accessors are consistent with the stored values") {
    const ModelParams params = ModelParams::power_law(1.0, 2.0);
    const PartitionFunctionTable table(params, 50);
    for (std::int64_t m : {1, 7, 50})
        CHECK(table.c_ratio_down(m) ==
              doctest::Approx(std::exp(table.log_c(m - 1) - table.log_c(m))).epsilon(1e-14));
    for (std::int64_t k : {1, 10, 49})
        CHECK(table.weight_ratio(k) ==
              doctest::Approx((double(k) + 1.0) * params.a(k + 1) /
                              (double(k) * params.a(k)))
                  .epsilon(1e-12));
}

TEST_CASE("early-break rows agree with the full recurrence scan") {
    const PartitionFunctionTable table(ModelParams::power_law(1.0, 1.0), 2000);
    for (std::int64_t n : {600, 1337, 2000}) {
        CHECK(table.log_c(n) == doctest::Approx(table.recompute_log_c(n)).epsilon(1e-11));
    }
    // Larger exponent changes the peak position; check there as well.
    const PartitionFunctionTable table3(ModelParams::power_law(2.0, 3.0), 1500);
    for (std::int64_t n : {700, 1500}) {
        CHECK(table3.log_c(n) == doctest::Approx(table3.recompute_log_c(n)).epsilon(1e-11));
    }
}

TEST_CASE("pmf sums to one and matches hand values") {
    const ModelParams params = ModelParams::power_law(1.0, 1.0);
    const PartitionFunctionTable table(params, 5);
    double sum = 0.0;
    for_each_partition(5, [&](const Partition& eta) { sum += std::exp(log_pmf(eta, table)); });
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // P({5}) = a_5 / c_5 = 40/167 for constant weights.
    CHECK(std::exp(log_pmf(Partition::from_parts({5}), table)) ==
          doctest::Approx(40.0 / 167.0).epsilon(1e-12));
    // P({1,1,1,1,1}) = (1/5!) / c_5 = 40/(120*167) = 1/501.
    CHECK(std::exp(log_pmf(Partition::from_parts({1, 1, 1, 1, 1}), table)) ==
          doctest::Approx(1.0 / 501.0).epsilon(1e-12));
}

TEST_CASE("csv export has the pinned header and one row per size") {
    const PartitionFunctionTable table(ModelParams::power_law(1.0, 1.0), 3);
    std::ostringstream os;
    table.write_csv(os);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "n,logc");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 4);
}

}  // TEST_SUITE
