#include "partitions/samplers.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <stdexcept>
#include <thread>
#include <utility>

#include "partitions/errors.hpp"

namespace partitions {

void SamplerConfig::validate() const {
    if (replica_count < 1) throw std::invalid_argument("SamplerConfig: replica_count must be >= 1");
    if (max_rejections < 1) throw std::invalid_argument("SamplerConfig: max_rejections must be >= 1");
    if (threads < 1) throw std::invalid_argument("SamplerConfig: threads must be >= 1");
}

Partition recursive_sample(const PartitionFunctionTable& table, std::int64_t N, Pcg64& rng) {
    if (N < 0) throw std::invalid_argument("recursive_sample: N must be >= 0");
    if (N > table.n_max()) throw std::invalid_argument("recursive_sample: N exceeds table range");

    const double a1 = std::exp(table.log_a(1));
    Partition::CountsMap counts;
    std::int64_t n = N;
    while (n > 0) {
        const double target = rng.next_double();
        // Walk k = 1..n through the selection weights t_k = k·a_k·c_{n-k}/(n·c_n),
        // which sum to 1 by the recurrence. Consecutive weights differ by the
        // precomputed ratios t_{k+1}/t_k = weight_ratio(k)·c_ratio_down(n-k),
        // so the scan is pure multiply/add.
        double t = a1 * table.c_ratio_down(n) / double(n);
        double cum = t;
        std::int64_t k = 1;
        std::int64_t last_positive = t > 0.0 ? 1 : 0;
        while (cum <= target && k < n) {
            t *= table.weight_ratio(k) * table.c_ratio_down(n - k);
            ++k;
            if (t > 0.0) last_positive = k;
            cum += t;
        }
        // cum can fall a few ulps short of 1 after the full scan; land the
        // residual mass on the largest size that had positive weight.
        const std::int64_t chosen =
            cum > target ? k : (last_positive > 0 ? last_positive : n);
        counts[chosen] += 1;
        n -= chosen;
    }
    return Partition::from_counts(std::move(counts));
}

namespace {

struct WeightScan {
    std::vector<std::int64_t> sizes;
    std::vector<double> weights;
    double total = 0.0;
};

// Means a_k e^{-delta k} for k = 1..min(N, max defined size), dropping values
// below 1e-18. For decaying power-law weights the scan stops at the first
// negligible term past the peak of k^{p-1}e^{-delta k}.
WeightScan scan_weights(const ModelParams& params, std::int64_t N, double delta) {
    WeightScan scan;
    const std::int64_t k_max = std::min<std::int64_t>(N, params.max_size());
    const bool decaying = params.is_power_law() && delta > 0.0;
    const double peak = decaying && params.p() > 1.0 ? (params.p() - 1.0) / delta : 0.0;
    double sum = 0.0, comp = 0.0;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        const double w = std::exp(params.log_a(k) - delta * double(k));
        if (w < 1e-18) {
            if (decaying && double(k) >= peak) break;
            continue;
        }
        scan.sizes.push_back(k);
        scan.weights.push_back(w);
        const double y = w - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    scan.total = sum;
    return scan;
}

}  // namespace

BoltzmannSampler::BoltzmannSampler(const ModelParams& params, std::int64_t N,
                                   const TiltSolution& tilt)
    : N_(N) {
    if (N < 1) throw std::invalid_argument("BoltzmannSampler: N must be >= 1");
    WeightScan scan = scan_weights(params, N, tilt.delta);
    if (scan.sizes.empty())
        throw SamplerError("BoltzmannSampler: all size weights negligible", 0.0);
    sizes_ = std::move(scan.sizes);
    alias_ = AliasTable(scan.weights);
    total_mean_ = scan.total;
    const double var_z = tilted_sum(params, N, tilt.delta, 2);
    predicted_acceptance_ = 1.0 / std::sqrt(2.0 * M_PI * var_z);
}

BoltzmannDraw BoltzmannSampler::sample(Pcg64& rng, std::int64_t max_rejections) const {
    std::vector<std::int64_t> parts;
    parts.reserve(64);
    std::int64_t rejections = 0;
    for (;;) {
        if (rejections >= max_rejections) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "Boltzmann sampler: %lld attempts rejected (predicted acceptance %.3e)",
                          (long long)rejections, predicted_acceptance_);
            throw SamplerError(buf, 0.0);
        }
        // Component count is Poisson(S); sizes are then iid with probability
        // proportional to the per-size means. Reject as soon as the running
        // total overshoots.
        const std::int64_t m = sample_poisson(rng, total_mean_);
        parts.clear();
        std::int64_t sum = 0;
        bool overshoot = false;
        for (std::int64_t i = 0; i < m; ++i) {
            const std::int64_t k = sizes_[alias_.sample(rng)];
            sum += k;
            if (sum > N_) {
                overshoot = true;
                break;
            }
            parts.push_back(k);
        }
        if (!overshoot && sum == N_) {
            Partition::CountsMap counts;
            for (std::int64_t k : parts) counts[k] += 1;
            return BoltzmannDraw{Partition::from_counts(std::move(counts)), rejections};
        }
        ++rejections;
    }
}

BoltzmannDraw boltzmann_sample(const ModelParams& params, std::int64_t N,
                               const TiltSolution& tilt, Pcg64& rng,
                               std::int64_t max_rejections) {
    const BoltzmannSampler sampler(params, N, tilt);
    return sampler.sample(rng, max_rejections);
}

SamplerHandle::SamplerHandle(const ModelParams& params, std::int64_t N, SampleMethod method,
                             const PartitionFunctionTable* table)
    : N_(N), method_(method) {
    if (N < 0) throw std::invalid_argument("SamplerHandle: N must be >= 0");
    if (method_ == SampleMethod::Auto)
        method_ = N <= 10'000 ? SampleMethod::Recursive : SampleMethod::Boltzmann;
    if (N == 0) return;  // draws are the empty partition; nothing to build
    if (method_ == SampleMethod::Recursive) {
        if (table != nullptr && table->n_max() >= N) {
            table_ = table;
        } else {
            owned_table_ = std::make_unique<PartitionFunctionTable>(params, N);
            table_ = owned_table_.get();
        }
    } else {
        const TiltSolution tilt = solve_tilt(params, N);
        boltzmann_ = std::make_unique<BoltzmannSampler>(params, N, tilt);
    }
}

Partition SamplerHandle::draw(Pcg64& rng, std::int64_t max_rejections,
                              std::int64_t* rejections) const {
    if (rejections != nullptr) *rejections = 0;
    if (N_ == 0) return Partition();
    if (method_ == SampleMethod::Recursive) return recursive_sample(*table_, N_, rng);
    BoltzmannDraw d = boltzmann_->sample(rng, max_rejections);
    if (rejections != nullptr) *rejections = d.rejections;
    return std::move(d.partition);
}

BatchResult sample_batch(const SamplerConfig& config, const ModelParams& params,
                         std::int64_t N, const PartitionFunctionTable* table) {
    config.validate();
    const SamplerHandle sampler(params, N, config.method, table);

    BatchResult out;
    out.method_used = sampler.method();
    out.partitions.resize((std::size_t)config.replica_count);

    std::vector<std::int64_t> rejections((std::size_t)config.replica_count, 0);
    auto run_range = [&](std::int64_t lo, std::int64_t hi, std::exception_ptr& err) noexcept {
        try {
            for (std::int64_t r = lo; r < hi; ++r) {
                Pcg64 rng = replica_rng(config.seed, (std::uint64_t)r);
                out.partitions[(std::size_t)r] =
                    sampler.draw(rng, config.max_rejections, &rejections[(std::size_t)r]);
            }
        } catch (...) {
            err = std::current_exception();
        }
    };

    const std::int64_t R = config.replica_count;
    const int threads = (int)std::min<std::int64_t>(config.threads, R);
    if (threads <= 1) {
        std::exception_ptr err;
        run_range(0, R, err);
        if (err) std::rethrow_exception(err);
    } else {
        // Contiguous replica chunks; every replica owns its stream and output
        // slot, so the merged result is independent of the thread count.
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs((std::size_t)threads);
        const std::int64_t chunk = (R + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::int64_t lo = (std::int64_t)t * chunk;
            const std::int64_t hi = std::min<std::int64_t>(R, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi, std::ref(errs[(std::size_t)t]));
        }
        for (auto& th : pool) th.join();
        for (const auto& err : errs)
            if (err) std::rethrow_exception(err);
    }

    for (std::int64_t r : rejections) out.total_rejections += r;
    return out;
}

}  // namespace partitions
