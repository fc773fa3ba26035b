#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace partitions {

// First and second moment sums of a stream of fixed-dimension vectors.
// Merging two accumulators gives exactly the sums of the concatenated
// streams, so replica results can be combined in any grouping as long as the
// final reduction order is fixed.
class MomentAccumulator {
public:
    explicit MomentAccumulator(int dim);

    int dim() const { return dim_; }
    std::int64_t count() const { return n_; }

    void add(const std::vector<double>& x);
    void merge(const MomentAccumulator& other);

    double mean(int i) const;
    // Unbiased covariance / variance; requires count >= 2.
    double covariance(int i, int j) const;
    double variance(int i) const { return covariance(i, i); }
    double correlation(int i, int j) const;
    // Standard error of mean(i).
    double mean_stderr(int i) const;

private:
    int dim_;
    std::int64_t n_ = 0;
    std::vector<double> sum_;       // Σ x_i
    std::vector<double> sum_prod_;  // Σ x_i x_j, dense row-major
};

// Upper tail probability of the chi-square distribution: P(X >= stat) with
// df degrees of freedom.
double chi_square_pvalue(double stat, double df);

struct NormalityResult {
    double statistic = 0.0;   // Pearson chi-square over lattice cells
    std::int64_t df = 0;
    double p_value = 1.0;
    bool pass = true;
    bool degenerate = false;  // too few cells to test; auto-pass
    std::string note;
};

// Tests whether values are compatible with a normal distribution, respecting
// their lattice structure: the scaled statistics here take values on an
// affine integer lattice, so distance tests against a continuous normal
// (Kolmogorov-Smirnov and relatives) reject spuriously once the sample size
// resolves the lattice spacing. Instead the values are binned at the lattice
// spacing (detected as the smallest gap between distinct sorted values),
// expected cell masses come from the fitted normal CDF at cell edges, cells
// are pooled to expected count >= 5, and a Pearson chi-square with
// cells - 3 degrees of freedom (mean and variance fitted) decides at the
// given significance.
NormalityResult normality_test(const std::vector<double>& values, double significance = 1e-3);

}  // namespace partitions
