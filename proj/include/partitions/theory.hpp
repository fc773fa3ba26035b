#pragma once

#include <string>
#include <vector>

#include "partitions/model_params.hpp"

namespace partitions {

// Stratification abscissas 0 = u_0 < u_1 < ... < u_q (in units of the scale
// r_N), with an implicit final boundary at +infinity.
class StrataGrid {
public:
    // Full vector (u_0, ..., u_q); u_0 must be 0 and the sequence strictly
    // increasing, q >= 1.
    explicit StrataGrid(std::vector<double> u);

    // Convenience: build from the positive cut points (u_1, ..., u_q).
    static StrataGrid from_cuts(const std::vector<double>& cuts);

    int q() const { return (int)u_.size() - 1; }
    double u(int j) const { return u_.at((std::size_t)j); }
    const std::vector<double>& points() const { return u_; }

private:
    std::vector<double> u_;
};

// Dense symmetric covariance matrix with per-index labels naming the scaled
// statistic each row/column refers to.
struct CovarianceSpec {
    int dim = 0;
    std::vector<double> entries;       // row-major, dim*dim
    std::vector<std::string> labels;   // size dim

    double at(int m, int k) const { return entries[(std::size_t)m * dim + k]; }
    double& at(int m, int k) { return entries[(std::size_t)m * dim + k]; }

    double min_eigenvalue() const;
    // Throws NumericError if the matrix is asymmetric or has an eigenvalue
    // below -1e-10 (limiting covariances are positive semidefinite).
    void verify() const;
};

// b_r(u) = C * Gamma(r+1, u): the tail weight of the size density x^r e^{-x}
// above u. Requires r > -1.
double b_r(const ModelParams& params, double r, double u);

// Per-stratum weights f_j(s) = C * integral of x^s e^{-x} over [u_j, u_{j+1}]
// for j = 0..q (last stratum extends to infinity). Evaluated as differences
// of incomplete-gamma tails, so the sum over j telescopes to C*Gamma(s+1)
// exactly. Requires s > -1.
std::vector<double> f_strata(const ModelParams& params, double s, const StrataGrid& grid);

// Limiting scaled boundary curve: l(u) = Gamma(p, u) / Gamma(p+1).
// Decreasing from 1/p at u = 0, with unit integral over [0, inf).
double limit_shape_l(double p, double u);

// Limiting covariance of the (2q+1)-vector of scaled per-stratum statistics
// (counts for strata 0..q, then masses for strata 1..q). All entries are
// built from f_j values, with the shared denominator C*Gamma(p+2).
CovarianceSpec cov_theta_star(const ModelParams& params, const StrataGrid& grid);

// Limiting covariance of the (2q+1)-vector of scaled cumulative (tail)
// statistics: counts above u_0..u_q, then masses above u_1..u_q. Equal to the
// congruence transform of cov_theta_star under tail summation; computed here
// in closed form from b_r values.
CovarianceSpec cov_e(const ModelParams& params, const StrataGrid& grid);

// Limiting within-stratum correlations between scaled counts and masses in
// the small-size regime. rho holds the q ratios rho_0..rho_{q-1} in [0, 1)
// (lim M_j / M_{j+1}); the returned vector has q+1 entries, the last being
// the terminal-stratum constant sqrt(p/(p+1)).
std::vector<double> small_size_alphas(double p, const std::vector<double>& rho);

// Comparison boundary curves for the two classical occupancy variants with
// geometric, i.e. unbounded (BoseEinstein) or zero/one (FermiDirac),
// component counts.
enum class ShapeKind { BoseEinstein, FermiDirac };

// Normalizing constant c = c(kind, p) fixed by requiring the curve below to
// have unit integral: integral of x^p e^{-cx} / (1 -+ e^{-cx}) dx over
// (0, inf) equals 1. Solved by bisection with adaptive quadrature.
double comparison_shape_constant(ShapeKind kind, double p);

// Curve value: integral of x^{p-1} e^{-cx} / (1 -+ e^{-cx}) dx over
// (u, inf), with c from comparison_shape_constant. Requires p >= 1, u >= 0.
// The BoseEinstein curve diverges at u = 0 when p = 1 (returns +inf).
double comparison_shape(ShapeKind kind, double p, double u);

// Same, with the normalizing constant supplied by the caller (avoids
// re-solving when evaluating the curve on a grid).
double comparison_shape_value(ShapeKind kind, double p, double u, double c);

}  // namespace partitions
