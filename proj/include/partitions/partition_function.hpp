#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "partitions/model_params.hpp"
#include "partitions/partition.hpp"

namespace partitions {

// Exact log-space table of the partition functions c_0..c_{N_max} of the
// measure, built by the convolution recurrence n·c_n = Σ_{k=1}^n k·a_k·c_{n-k}
// evaluated with log-sum-exp (c_0 = 1). For an explicit parameter table the
// recurrence sums only over sizes with a defined a_k.
//
// The table is immutable once built and safe to share across threads. It also
// carries the per-size log a_k values 1..N_max and the step ratios used by the
// recursive sampler.
class PartitionFunctionTable {
public:
    PartitionFunctionTable(ModelParams params, std::int64_t n_max);

    std::int64_t n_max() const { return n_max_; }
    const ModelParams& params() const { return params_; }

    double log_c(std::int64_t n) const;
    double log_a(std::int64_t k) const { return log_a_[std::size_t(k)]; }

    // exp(logc[m-1] - logc[m]), 1 <= m <= N_max.
    double c_ratio_down(std::int64_t m) const { return c_down_[std::size_t(m)]; }
    // (k+1)·a_{k+1} / (k·a_k), 1 <= k < N_max; 0 when a_{k+1} is undefined.
    double weight_ratio(std::int64_t k) const { return w_ratio_[std::size_t(k)]; }

    // Recomputes log c_n from the recurrence with a full scan (no early break);
    // used by verification tests.
    double recompute_log_c(std::int64_t n) const;

    // CSV export with header "n,logc".
    void write_csv(std::ostream& os) const;

private:
    ModelParams params_;
    std::int64_t n_max_ = 0;
    std::vector<double> log_c_;
    std::vector<double> log_a_;   // index k, [1..n_max]; -inf where undefined
    std::vector<double> c_down_;  // index m, [1..n_max]
    std::vector<double> w_ratio_;  // index k, [1..n_max-1]
};

// log μ_N(η) = Σ_k (n_k·log a_k − log n_k!) − log c_N with N = η.total().
// Requires η.total() <= table.n_max(); throws std::invalid_argument when a
// size in η has no defined a_k.
double log_pmf(const Partition& eta, const PartitionFunctionTable& table);

}  // namespace partitions
