#include "partitions/partition_function.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "partitions/special_functions.hpp"

namespace partitions {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Log-sum-exp over terms[0..count) given their maximum.
double lse(const std::vector<double>& terms, std::size_t count, double max_term) {
    if (count == 0 || max_term == kNegInf) return kNegInf;
    // Terms more than 46 log-units below the maximum each contribute less
    // than 1e-20 relative mass; skipping them avoids the exp call.
    const double cut = max_term - 46.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        if (terms[i] > cut) acc += std::exp(terms[i] - max_term);
    }
    return max_term + std::log(acc);
}

}  // namespace

PartitionFunctionTable::PartitionFunctionTable(ModelParams params, std::int64_t n_max)
    : params_(std::move(params)), n_max_(n_max) {
    if (n_max < 0) throw std::invalid_argument("PartitionFunctionTable: N_max must be >= 0");

    const std::size_t sz = std::size_t(n_max) + 1;
    log_c_.assign(sz, 0.0);
    log_a_.assign(sz, kNegInf);
    const std::int64_t a_limit = std::min<std::int64_t>(n_max, params_.max_size());
    for (std::int64_t k = 1; k <= a_limit; ++k) log_a_[std::size_t(k)] = params_.log_a(k);

    // Early break applies only to power-law rows: there the term sequence
    // log k + log a_k + logc[n-k] is unimodal in k, so once terms sit far
    // below the running max for long enough the remaining tail is noise.
    const bool allow_break = params_.is_power_law();
    constexpr double kLogTailCut = 46.0;   // e^-46 ~ 1e-20 per term
    constexpr int kBreakHysteresis = 64;

    std::vector<double> log_k(sz, 0.0);
    for (std::int64_t k = 1; k <= n_max; ++k) log_k[std::size_t(k)] = std::log(double(k));

    std::vector<double> terms(sz, kNegInf);
    for (std::int64_t n = 1; n <= n_max; ++n) {
        double max_term = kNegInf;
        std::size_t count = 0;
        int below = 0;
        for (std::int64_t k = 1; k <= n; ++k) {
            double t = log_a_[std::size_t(k)];
            if (t == kNegInf) {
                terms[count++] = kNegInf;
                continue;
            }
            t += log_k[std::size_t(k)] + log_c_[std::size_t(n - k)];
            terms[count++] = t;
            if (t > max_term) {
                max_term = t;
                below = 0;
            } else if (allow_break && n >= 512 && t < max_term - kLogTailCut) {
                if (++below >= kBreakHysteresis) break;
            } else {
                below = 0;
            }
        }
        log_c_[std::size_t(n)] = lse(terms, count, max_term) - std::log(double(n));
    }

    c_down_.assign(sz, 0.0);
    for (std::int64_t m = 1; m <= n_max; ++m)
        c_down_[std::size_t(m)] = std::exp(log_c_[std::size_t(m - 1)] - log_c_[std::size_t(m)]);
    if (n_max >= 1) {
        w_ratio_.assign(sz, 0.0);
        for (std::int64_t k = 1; k < n_max; ++k) {
            if (log_a_[std::size_t(k)] == kNegInf || log_a_[std::size_t(k + 1)] == kNegInf)
                continue;
            w_ratio_[std::size_t(k)] = std::exp(log_a_[std::size_t(k + 1)] -
                                                log_a_[std::size_t(k)]) *
                                       (double(k) + 1.0) / double(k);
        }
    }
}

double PartitionFunctionTable::log_c(std::int64_t n) const {
    if (n < 0 || n > n_max_)
        throw std::invalid_argument("PartitionFunctionTable: n outside table range");
    return log_c_[std::size_t(n)];
}

double PartitionFunctionTable::recompute_log_c(std::int64_t n) const {
    if (n < 1 || n > n_max_)
        throw std::invalid_argument("recompute_log_c: need 1 <= n <= N_max");
    std::vector<double> terms;
    terms.reserve(std::size_t(n));
    double max_term = kNegInf;
    for (std::int64_t k = 1; k <= n; ++k) {
        double t = log_a_[std::size_t(k)];
        if (t == kNegInf) continue;
        t += std::log(double(k)) + log_c_[std::size_t(n - k)];
        terms.push_back(t);
        max_term = std::max(max_term, t);
    }
    return lse(terms, terms.size(), max_term) - std::log(double(n));
}

void PartitionFunctionTable::write_csv(std::ostream& os) const {
    os << "n,logc\n";
    char buf[64];
    for (std::int64_t n = 0; n <= n_max_; ++n) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g\n", (long long)n, log_c_[std::size_t(n)]);
        os << buf;
    }
}

double log_pmf(const Partition& eta, const PartitionFunctionTable& table) {
    if (eta.total() > table.n_max())
        throw std::invalid_argument("log_pmf: partition total exceeds table range");
    double acc = 0.0;
    for (const auto& [k, n] : eta.counts()) {
        // Sizes beyond an explicit table carry weight zero: the measure is
        // supported on partitions whose parts all have defined weights.
        if (k > table.params().max_size()) return -std::numeric_limits<double>::infinity();
        acc += double(n) * table.params().log_a(k) - log_factorial(n);
    }
    return acc - table.log_c(eta.total());
}

}  // namespace partitions
