#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "partitions/model_params.hpp"
#include "partitions/partition.hpp"

namespace partitions {

// Exact law of a scalar statistic: sorted (value, probability) pairs.
struct ExactDistribution {
    std::vector<std::pair<double, double>> support;

    // Throws NumericError unless probabilities are >= 0 and sum to 1
    // within 1e-12.
    void validate() const;

    double probability(double value) const;  // 0 for values off the support
};

// Every partition of N exactly once, in reverse-lexicographic order of the
// non-increasing part lists ((N), (N-1,1), ..., (1,...,1)). Guarded by a cap
// of N <= 40 (37338 partitions) against combinatorial blowup.
std::vector<Partition> enumerate_partitions(std::int64_t N);

// Streaming form of the same enumeration (no storage of the full list).
void for_each_partition(std::int64_t N, const std::function<void(const Partition&)>& visit);

// Exact law of statistic(η) under the measure with the given parameters,
// by full enumeration. N is subject to the enumeration cap.
ExactDistribution exact_distribution(std::int64_t N, const ModelParams& params,
                                     const std::function<double(const Partition&)>& statistic);

// Empirical distribution of a sample (relative frequencies).
ExactDistribution empirical_distribution(const std::vector<double>& values);

// Total variation distance ½ Σ |p₁ - p₂| over the union support; in [0, 1].
double total_variation(const ExactDistribution& d1, const ExactDistribution& d2);

struct GofResult {
    double statistic = 0.0;
    std::int64_t df = 0;
    double p_value = 1.0;
    bool pass = true;
    bool degenerate = false;  // all mass pooled into one cell; auto-pass
    std::string note;
};

// Pearson goodness-of-fit of sampled statistic values against an exact law.
// Expected cells are pooled (in support order) until each group's expected
// count reaches pool_threshold; pass iff the p-value is >= significance.
// Observed values outside the support fail outright (impossible under the
// exact law). Degenerate pooling (single group) auto-passes with a warning
// note.
GofResult chi_square_gof(const std::vector<double>& samples, const ExactDistribution& expected,
                         double significance = 1e-3, double pool_threshold = 5.0);

}  // namespace partitions
