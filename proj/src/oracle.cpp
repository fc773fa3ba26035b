#include "partitions/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "partitions/errors.hpp"
#include "partitions/partition_function.hpp"
#include "partitions/statistics.hpp"

namespace partitions {

namespace {

constexpr std::int64_t kEnumerationCap = 40;

// Emits all non-increasing part lists summing to n with parts <= cap,
// largest part first (reverse-lexicographic order overall).
void emit_partitions(std::int64_t n, std::int64_t cap, std::vector<std::int64_t>& parts,
                     const std::function<void(const Partition&)>& visit) {
    if (n == 0) {
        visit(Partition::from_parts(parts));
        return;
    }
    for (std::int64_t first = std::min(n, cap); first >= 1; --first) {
        parts.push_back(first);
        emit_partitions(n - first, first, parts, visit);
        parts.pop_back();
    }
}

}  // namespace

void ExactDistribution::validate() const {
    double total = 0.0;
    for (const auto& [value, prob] : support) {
        (void)value;
        if (prob < 0.0) throw NumericError("ExactDistribution: negative probability");
        total += prob;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw NumericError("ExactDistribution: probabilities do not sum to 1");
}

double ExactDistribution::probability(double value) const {
    auto it = std::lower_bound(support.begin(), support.end(), value,
                               [](const auto& pair, double v) { return pair.first < v; });
    if (it != support.end() && it->first == value) return it->second;
    return 0.0;
}

void for_each_partition(std::int64_t N, const std::function<void(const Partition&)>& visit) {
    if (N < 0 || N > kEnumerationCap)
        throw std::invalid_argument("for_each_partition: N must lie in [0, 40]");
    std::vector<std::int64_t> parts;
    emit_partitions(N, N == 0 ? 1 : N, parts, visit);
}

std::vector<Partition> enumerate_partitions(std::int64_t N) {
    std::vector<Partition> all;
    for_each_partition(N, [&](const Partition& eta) { all.push_back(eta); });
    return all;
}

ExactDistribution exact_distribution(std::int64_t N, const ModelParams& params,
                                     const std::function<double(const Partition&)>& statistic) {
    const PartitionFunctionTable table(params, N);
    std::map<double, double> law;
    for_each_partition(N, [&](const Partition& eta) {
        law[statistic(eta)] += std::exp(log_pmf(eta, table));
    });
    ExactDistribution dist;
    dist.support.assign(law.begin(), law.end());
    dist.validate();
    return dist;
}

ExactDistribution empirical_distribution(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("empirical_distribution: empty sample");
    std::map<double, double> freq;
    for (double v : values) freq[v] += 1.0;
    ExactDistribution dist;
    dist.support.reserve(freq.size());
    for (const auto& [value, count] : freq)
        dist.support.emplace_back(value, count / (double)values.size());
    return dist;
}

double total_variation(const ExactDistribution& d1, const ExactDistribution& d2) {
    double tv = 0.0;
    std::size_t i = 0, j = 0;
    while (i < d1.support.size() || j < d2.support.size()) {
        if (j >= d2.support.size() ||
            (i < d1.support.size() && d1.support[i].first < d2.support[j].first)) {
            tv += d1.support[i].second;
            ++i;
        } else if (i >= d1.support.size() || d2.support[j].first < d1.support[i].first) {
            tv += d2.support[j].second;
            ++j;
        } else {
            tv += std::fabs(d1.support[i].second - d2.support[j].second);
            ++i;
            ++j;
        }
    }
    return 0.5 * tv;
}

GofResult chi_square_gof(const std::vector<double>& samples, const ExactDistribution& expected,
                         double significance, double pool_threshold) {
    GofResult res;
    if (samples.empty()) throw std::invalid_argument("chi_square_gof: empty sample");

    // Count observations per support value; anything off-support is
    // impossible under the exact law.
    std::map<double, std::int64_t> counts;
    for (double v : samples) counts[v] += 1;
    for (const auto& [value, count] : counts) {
        (void)count;
        if (expected.probability(value) == 0.0) {
            res.pass = false;
            res.p_value = 0.0;
            res.note = "observed value outside the exact support";
            return res;
        }
    }

    const double n = (double)samples.size();
    std::vector<std::pair<double, double>> grouped;  // (observed, expected)
    double group_obs = 0.0, group_exp = 0.0;
    for (const auto& [value, prob] : expected.support) {
        auto it = counts.find(value);
        group_obs += it == counts.end() ? 0.0 : (double)it->second;
        group_exp += n * prob;
        if (group_exp >= pool_threshold) {
            grouped.emplace_back(group_obs, group_exp);
            group_obs = 0.0;
            group_exp = 0.0;
        }
    }
    if (group_exp > 0.0 || group_obs > 0.0) {
        if (!grouped.empty() && group_exp < pool_threshold) {
            grouped.back().first += group_obs;
            grouped.back().second += group_exp;
        } else {
            grouped.emplace_back(group_obs, group_exp);
        }
    }

    if (grouped.size() <= 1) {
        res.degenerate = true;
        res.note = "all mass pooled into one cell; test has no power";
        return res;
    }

    double stat = 0.0;
    for (const auto& [obs, exp] : grouped)
        stat += (obs - exp) * (obs - exp) / exp;

    res.statistic = stat;
    res.df = (std::int64_t)grouped.size() - 1;
    res.p_value = chi_square_pvalue(stat, (double)res.df);
    res.pass = res.p_value >= significance;
    return res;
}

}  // namespace partitions
