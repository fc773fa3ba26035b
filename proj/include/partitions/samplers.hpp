#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "partitions/model_params.hpp"
#include "partitions/partition.hpp"
#include "partitions/partition_function.hpp"
#include "partitions/rng.hpp"
#include "partitions/tilt.hpp"

namespace partitions {

enum class SampleMethod {
    Auto,       // Recursive for N <= 10^4 (table reuse), Boltzmann above
    Recursive,  // top-down walk on the partition-function recurrence
    Boltzmann,  // independent geometric-weight counts + rejection on total
};

struct SamplerConfig {
    std::uint64_t seed = 0;
    SampleMethod method = SampleMethod::Auto;
    std::int64_t replica_count = 1;
    std::int64_t max_rejections = 50'000'000;
    int threads = 1;

    void validate() const;
};

// One exact draw by the recursive method: pick a component size k from the
// remaining mass n with probability k*a_k*c_{n-k}/(n*c_n), remove it, repeat.
// Requires N <= table.n_max(). Consumes one uniform per removed component.
Partition recursive_sample(const PartitionFunctionTable& table, std::int64_t N, Pcg64& rng);

struct BoltzmannDraw {
    Partition partition;
    std::int64_t rejections = 0;  // failed attempts before the accepted one
};

// Reusable rejection sampler: component counts are independent Poissons with
// means a_k e^{-delta k}; a draw is accepted iff the total mass equals N.
// Implemented by poissonization of the whole configuration: the number of
// components is Poisson(S), S = sum of means, and sizes are then iid with
// probability proportional to the means — distributionally identical to
// per-size Poisson counts, but the work per attempt is proportional to the
// number of components rather than to N. Sizes with mean below 1e-18 are
// dropped (their count is 0 beyond floating resolution).
class BoltzmannSampler {
public:
    BoltzmannSampler(const ModelParams& params, std::int64_t N, const TiltSolution& tilt);

    // Throws SamplerError once max_rejections attempts have been rejected.
    BoltzmannDraw sample(Pcg64& rng, std::int64_t max_rejections) const;

    double total_mean() const { return total_mean_; }          // S
    double predicted_acceptance() const { return predicted_acceptance_; }

private:
    std::int64_t N_;
    std::vector<std::int64_t> sizes_;  // sizes with non-negligible mean
    AliasTable alias_;
    double total_mean_;
    double predicted_acceptance_;
};

// Single Boltzmann draw (builds the sampler internally).
BoltzmannDraw boltzmann_sample(const ModelParams& params, std::int64_t N,
                               const TiltSolution& tilt, Pcg64& rng,
                               std::int64_t max_rejections = 50'000'000);

// Resolved draw facility shared by the batch API and the streaming
// experiment runners: owns (or borrows) whatever the chosen method needs and
// hands out one exact sample per call. Immutable after construction, so a
// single handle serves concurrent replica workers.
class SamplerHandle {
public:
    // Resolves Auto to Recursive for N <= 10^4 and Boltzmann above. A
    // prebuilt table covering N is borrowed when the method is Recursive.
    SamplerHandle(const ModelParams& params, std::int64_t N, SampleMethod method,
                  const PartitionFunctionTable* table = nullptr);

    SampleMethod method() const { return method_; }

    // One exact draw; rejections (Boltzmann only) reported via out-param.
    Partition draw(Pcg64& rng, std::int64_t max_rejections,
                   std::int64_t* rejections = nullptr) const;

private:
    std::int64_t N_;
    SampleMethod method_;
    const PartitionFunctionTable* table_ = nullptr;
    std::unique_ptr<PartitionFunctionTable> owned_table_;
    std::unique_ptr<BoltzmannSampler> boltzmann_;
};

struct BatchResult {
    std::vector<Partition> partitions;    // index = replica index
    std::int64_t total_rejections = 0;    // Boltzmann only
    SampleMethod method_used = SampleMethod::Recursive;
};

// replica_count exact draws, one per independent RNG stream derived from
// (config.seed, replica). Output order is by replica index, so results are
// identical for any thread count. An optional prebuilt table is used when
// the method resolves to Recursive; otherwise one is built internally.
BatchResult sample_batch(const SamplerConfig& config, const ModelParams& params,
                         std::int64_t N, const PartitionFunctionTable* table = nullptr);

}  // namespace partitions
