#include "partitions/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "partitions/special_functions.hpp"

namespace partitions {

MomentAccumulator::MomentAccumulator(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("MomentAccumulator: dim must be >= 1");
    sum_.assign((std::size_t)dim, 0.0);
    sum_prod_.assign((std::size_t)dim * dim, 0.0);
}

void MomentAccumulator::add(const std::vector<double>& x) {
    if ((int)x.size() != dim_)
        throw std::invalid_argument("MomentAccumulator: dimension mismatch");
    ++n_;
    for (int i = 0; i < dim_; ++i) {
        sum_[(std::size_t)i] += x[(std::size_t)i];
        for (int j = i; j < dim_; ++j)
            sum_prod_[(std::size_t)i * dim_ + j] += x[(std::size_t)i] * x[(std::size_t)j];
    }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.dim_ != dim_)
        throw std::invalid_argument("MomentAccumulator: dimension mismatch");
    n_ += other.n_;
    for (std::size_t i = 0; i < sum_.size(); ++i) sum_[i] += other.sum_[i];
    for (std::size_t i = 0; i < sum_prod_.size(); ++i) sum_prod_[i] += other.sum_prod_[i];
}

double MomentAccumulator::mean(int i) const {
    if (n_ < 1) throw std::logic_error("MomentAccumulator: empty");
    return sum_[(std::size_t)i] / (double)n_;
}

double MomentAccumulator::covariance(int i, int j) const {
    if (n_ < 2) throw std::logic_error("MomentAccumulator: need at least 2 samples");
    if (i > j) std::swap(i, j);
    const double n = (double)n_;
    const double cross = sum_prod_[(std::size_t)i * dim_ + j];
    return (cross - sum_[(std::size_t)i] * sum_[(std::size_t)j] / n) / (n - 1.0);
}

double MomentAccumulator::correlation(int i, int j) const {
    const double denom = std::sqrt(variance(i) * variance(j));
    if (!(denom > 0.0)) return 0.0;
    return covariance(i, j) / denom;
}

double MomentAccumulator::mean_stderr(int i) const {
    return std::sqrt(variance(i) / (double)n_);
}

double chi_square_pvalue(double stat, double df) {
    if (stat <= 0.0) return 1.0;
    return reg_gamma_Q(0.5 * df, 0.5 * stat);
}

NormalityResult normality_test(const std::vector<double>& values, double significance) {
    NormalityResult res;
    const std::size_t n = values.size();
    if (n < 50) {
        res.degenerate = true;
        res.note = "fewer than 50 samples";
        return res;
    }

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    double mean = 0.0;
    for (double v : sorted) mean += v;
    mean /= (double)n;
    double var = 0.0;
    for (double v : sorted) var += (v - mean) * (v - mean);
    var /= (double)(n - 1);
    if (!(var > 0.0)) {
        res.degenerate = true;
        res.note = "zero variance";
        return res;
    }
    const double sd = std::sqrt(var);

    // Lattice spacing: smallest gap between distinct sorted values.
    double spacing = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double gap = sorted[i] - sorted[i - 1];
        if (gap > 0.0 && (spacing == 0.0 || gap < spacing)) spacing = gap;
    }
    if (spacing == 0.0) {
        res.degenerate = true;
        res.note = "all values identical";
        return res;
    }

    // Histogram on lattice cells [origin + (m-1/2)·spacing, origin + (m+1/2)·spacing).
    const double origin = sorted.front();
    const std::int64_t m_max = (std::int64_t)std::llround((sorted.back() - origin) / spacing);
    if (m_max > 1'000'000) {
        // Effectively continuous data; fall back to equal-width binning at a
        // resolution the sample can support.
        spacing = (sorted.back() - origin) / 512.0;
    }
    const std::int64_t cells =
        (std::int64_t)std::llround((sorted.back() - origin) / spacing) + 1;
    std::vector<std::int64_t> observed((std::size_t)cells, 0);
    for (double v : sorted) {
        std::int64_t idx = (std::int64_t)std::llround((v - origin) / spacing);
        if (idx < 0) idx = 0;
        if (idx >= cells) idx = cells - 1;
        ++observed[(std::size_t)idx];
    }

    // Expected mass per cell from the fitted normal, with unbounded edge
    // cells; pool left to right until each group expects >= 5.
    auto cell_prob = [&](std::int64_t idx) {
        const double lo = origin + ((double)idx - 0.5) * spacing;
        const double hi = lo + spacing;
        const double lo_cdf = idx == 0 ? 0.0 : normal_cdf((lo - mean) / sd);
        const double hi_cdf = idx == cells - 1 ? 1.0 : normal_cdf((hi - mean) / sd);
        return hi_cdf - lo_cdf;
    };

    std::vector<std::pair<double, double>> grouped;  // (observed, expected)
    double group_obs = 0.0, group_exp = 0.0;
    for (std::int64_t idx = 0; idx < cells; ++idx) {
        group_obs += (double)observed[(std::size_t)idx];
        group_exp += (double)n * cell_prob(idx);
        if (group_exp >= 5.0) {
            grouped.emplace_back(group_obs, group_exp);
            group_obs = 0.0;
            group_exp = 0.0;
        }
    }
    if (group_exp > 0.0 || group_obs > 0.0) {
        // Trailing partial group: merge into the last full one.
        if (!grouped.empty() && group_exp < 5.0) {
            grouped.back().first += group_obs;
            grouped.back().second += group_exp;
        } else {
            grouped.emplace_back(group_obs, group_exp);
        }
    }

    if ((std::int64_t)grouped.size() < 4) {
        res.degenerate = true;
        res.note = "too few cells after pooling";
        return res;
    }

    double stat = 0.0;
    for (const auto& [obs, exp] : grouped)
        stat += (obs - exp) * (obs - exp) / exp;

    res.statistic = stat;
    res.df = (std::int64_t)grouped.size() - 3;  // mean and variance fitted
    res.p_value = chi_square_pvalue(stat, (double)res.df);
    res.pass = res.p_value >= significance;
    return res;
}

}  // namespace partitions
