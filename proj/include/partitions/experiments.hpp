#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "partitions/model_params.hpp"
#include "partitions/samplers.hpp"
#include "partitions/statistics.hpp"
#include "partitions/stratification.hpp"
#include "partitions/theory.hpp"

namespace partitions {

struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::int64_t samples = 1000;
    SampleMethod method = SampleMethod::Auto;
    int threads = 1;
    std::int64_t max_rejections = 50'000'000;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Mean scaled boundary curve vs the limiting curve.

struct LimitShapeResult {
    std::vector<double> u;            // evaluation abscissas
    std::vector<double> mean;         // Monte Carlo mean of the scaled boundary
    std::vector<double> stderr_mean;  // its standard error, per point
    std::vector<double> l_theory;     // limiting curve values
    double sup_deviation = 0.0;       // max over grid of |mean - l_theory|
    double band = 0.1;                // per-sample deviation band
    double within_band_fraction = 0.0;  // samples with sup-dev <= band
    double mean_nu0 = 0.0;            // mean total component count
    double mean_nu0_stderr = 0.0;
    double r_N = 0.0;
    std::int64_t samples = 0;
};

LimitShapeResult run_limit_shape(const ModelParams& params, std::int64_t N,
                                 const std::vector<double>& eval_u,
                                 const ExperimentConfig& config, double band = 0.1);

// Uniform grid helper: from, from+step, ..., up to and including to (within
// half a step).
std::vector<double> uniform_grid(double from, double to, double step);

// ---------------------------------------------------------------------------
// Central limit behaviour of the scaled stratum statistics near the scale r_N.

struct MarginalNormality {
    std::string label;
    NormalityResult test;
};

struct CltResult {
    int q = 0;
    double delta = 0.0;  // tilt used for centering
    double r_N = 0.0;

    CovarianceSpec theory_theta;      // limiting covariance, per-stratum form
    CovarianceSpec theory_e;          // limiting covariance, cumulative form
    std::vector<double> emp_theta;    // empirical covariances, row-major (2q+1)^2
    std::vector<double> emp_e;
    double max_abs_delta_theta = 0.0;  // max |empirical - limit| entrywise
    double max_abs_delta_e = 0.0;

    double cov_nu_star_01 = 0.0;  // empirical covariance of the first two counts

    std::vector<MarginalNormality> normality;  // cumulative-vector marginals

    // Fluctuation-field proportionality: per j = 1..q the regression slope of
    // the scaled cumulative count on the raw boundary deviation at u_j, which
    // should approach sqrt(C*Gamma(p+1)*N/r_N).
    std::vector<double> relat_slope;
    double relat_predicted = 0.0;

    std::int64_t samples = 0;
};

CltResult run_clt_fluctuations(const ModelParams& params, std::int64_t N,
                               const StrataGrid& grid, const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Small-size regime: within-block correlations and cross-block independence
// of the interleaved vector (count_0, mass_0, ..., count_{q-1}, mass_{q-1},
// count_q).

struct SmallSizeResult {
    int q = 0;
    double delta = 0.0;
    std::vector<std::int64_t> M;  // boundaries, M_0..M_{q+1}

    std::vector<std::string> labels;  // interleaved vector labels, dim 2q+1
    std::vector<double> emp_corr;     // empirical correlations, row-major (2q+1)^2

    std::vector<double> alpha_limit;   // limiting within-block correlations, j=0..q
    std::vector<double> alpha_finite;  // finite-N values E*_j/sqrt(V*_j S*_j), j=0..q
    std::vector<double> corr_within;   // empirical corr(count_j, mass_j), j=0..q-1
    double max_cross_block_abs_corr = 0.0;

    double var_last = 0.0;         // empirical variance of the final count
    double var_last_theory = 0.0;  // 1 - alpha_q^2

    std::int64_t samples = 0;
};

SmallSizeResult run_smallsize_independence(const ModelParams& params, std::int64_t N,
                                           const StratificationPlan& plan,
                                           const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Largest-component scale and mass concentration diagnostics.

struct ThresholdResult {
    double r_N = 0.0;
    std::vector<double> x_grid;  // multiples of r_N
    std::vector<double> cdf;     // empirical P(largest component <= x*r_N)
    double w_lo = 0.1, w_hi = 10.0;
    double mean_mass_fraction = 0.0;  // mass carried by sizes in [w_lo*r, w_hi*r]
    double max_largest_over_N = 0.0;
    std::int64_t macroscopic_count = 0;  // samples whose largest component > N/2
    std::int64_t samples = 0;
};

ThresholdResult run_threshold_diag(const ModelParams& params, std::int64_t N,
                                   const ExperimentConfig& config,
                                   std::vector<double> x_grid = {}, double w_lo = 0.1,
                                   double w_hi = 10.0);

}  // namespace partitions
