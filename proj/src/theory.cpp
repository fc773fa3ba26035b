#include "partitions/theory.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "partitions/errors.hpp"
#include "partitions/special_functions.hpp"

namespace partitions {

StrataGrid::StrataGrid(std::vector<double> u) : u_(std::move(u)) {
    if (u_.size() < 2) throw std::invalid_argument("StrataGrid: need at least one positive cut");
    if (u_[0] != 0.0) throw std::invalid_argument("StrataGrid: first point must be 0");
    for (std::size_t i = 1; i < u_.size(); ++i) {
        if (!(u_[i] > u_[i - 1]) || !std::isfinite(u_[i]))
            throw std::invalid_argument("StrataGrid: points must be finite and strictly increasing");
    }
}

StrataGrid StrataGrid::from_cuts(const std::vector<double>& cuts) {
    std::vector<double> u;
    u.reserve(cuts.size() + 1);
    u.push_back(0.0);
    u.insert(u.end(), cuts.begin(), cuts.end());
    return StrataGrid(std::move(u));
}

double CovarianceSpec::min_eigenvalue() const {
    return symmetric_min_eigenvalue(entries.data(), dim);
}

void CovarianceSpec::verify() const {
    for (int m = 0; m < dim; ++m)
        for (int k = m + 1; k < dim; ++k)
            if (std::fabs(at(m, k) - at(k, m)) > 1e-12)
                throw NumericError("covariance matrix is not symmetric");
    const double lambda = min_eigenvalue();
    if (lambda < -1e-10) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "covariance matrix not PSD: min eigenvalue %.3e", lambda);
        throw NumericError(buf);
    }
}

double b_r(const ModelParams& params, double r, double u) {
    if (!(r > -1.0)) throw std::invalid_argument("b_r: requires r > -1");
    return params.C() * upper_incomplete_gamma(r + 1.0, u);
}

std::vector<double> f_strata(const ModelParams& params, double s, const StrataGrid& grid) {
    if (!(s > -1.0)) throw std::invalid_argument("f_strata: requires s > -1");
    const int q = grid.q();
    std::vector<double> f((std::size_t)q + 1);
    // Tail weights at each boundary; the last stratum's upper tail is 0.
    double upper = 0.0;
    for (int j = q; j >= 0; --j) {
        const double lower = b_r(params, s, grid.u(j));
        f[(std::size_t)j] = lower - upper;
        upper = lower;
    }
    return f;
}

double limit_shape_l(double p, double u) {
    if (!(p > 0.0)) throw std::invalid_argument("limit_shape_l: requires p > 0");
    if (u < 0.0) throw std::invalid_argument("limit_shape_l: requires u >= 0");
    // Gamma(p, u) / Gamma(p+1) = Q(p, u) / p.
    return reg_gamma_Q(p, u) / p;
}

namespace {

std::string index_label(const char* stem, int j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%d", stem, j);
    return std::string(buf);
}

std::vector<std::string> stat_labels(int q, const char* count_stem, const char* mass_stem) {
    std::vector<std::string> labels;
    labels.reserve((std::size_t)(2 * q + 1));
    for (int j = 0; j <= q; ++j) labels.push_back(index_label(count_stem, j));
    for (int j = 1; j <= q; ++j) labels.push_back(index_label(mass_stem, j));
    return labels;
}

}  // namespace

CovarianceSpec cov_theta_star(const ModelParams& params, const StrataGrid& grid) {
    const int q = grid.q();
    const double p = params.p();
    const double denom = params.C() * gamma_fn(p + 2.0);  // C*Gamma(p+2)

    const std::vector<double> fm1 = f_strata(params, p - 1.0, grid);
    const std::vector<double> f0 = f_strata(params, p, grid);
    const std::vector<double> fp1 = f_strata(params, p + 1.0, grid);

    CovarianceSpec cov;
    cov.dim = 2 * q + 1;
    cov.entries.assign((std::size_t)cov.dim * cov.dim, 0.0);
    cov.labels = stat_labels(q, "count_stratum", "mass_stratum");

    // Index layout: 0..q are per-stratum counts, q+1..2q are per-stratum
    // masses for strata 1..q (the stratum-0 mass is determined by the total).
    for (int m = 0; m < cov.dim; ++m) {
        for (int k = m; k < cov.dim; ++k) {
            double value;
            if (m <= q && k <= q) {
                value = (m == k ? fm1[(std::size_t)m] : 0.0) -
                        f0[(std::size_t)m] * f0[(std::size_t)k] / denom;
            } else if (m <= q) {  // count vs mass
                const int kk = k - q;
                value = (m == kk ? f0[(std::size_t)m] : 0.0) -
                        f0[(std::size_t)m] * fp1[(std::size_t)kk] / denom;
            } else {  // mass vs mass
                const int mm = m - q, kk = k - q;
                value = (mm == kk ? fp1[(std::size_t)mm] : 0.0) -
                        fp1[(std::size_t)mm] * fp1[(std::size_t)kk] / denom;
            }
            cov.at(m, k) = value;
            cov.at(k, m) = value;
        }
    }
    cov.verify();
    return cov;
}

CovarianceSpec cov_e(const ModelParams& params, const StrataGrid& grid) {
    const int q = grid.q();
    const double p = params.p();
    const double denom = params.C() * gamma_fn(p + 2.0);

    // Tail weights at the grid points for the three exponents in play.
    std::vector<double> bm1((std::size_t)q + 1), b0((std::size_t)q + 1), bp1((std::size_t)q + 1);
    for (int j = 0; j <= q; ++j) {
        bm1[(std::size_t)j] = b_r(params, p - 1.0, grid.u(j));
        b0[(std::size_t)j] = b_r(params, p, grid.u(j));
        bp1[(std::size_t)j] = b_r(params, p + 1.0, grid.u(j));
    }
    // Head weight of the first stratum (its count is per-stratum, not a tail).
    const double f0_pm1 = bm1[0] - bm1[1];
    const double f0_p = b0[0] - b0[1];

    CovarianceSpec cov;
    cov.dim = 2 * q + 1;
    cov.entries.assign((std::size_t)cov.dim * cov.dim, 0.0);
    cov.labels = stat_labels(q, "count_above", "mass_above");

    for (int m = 0; m < cov.dim; ++m) {
        for (int k = m; k < cov.dim; ++k) {
            double value;
            if (m == 0 && k == 0) {
                value = f0_pm1 - f0_p * f0_p / denom;
            } else if (m == 0 && k <= q) {
                value = -f0_p * b0[(std::size_t)k] / denom;
            } else if (m == 0) {
                value = -f0_p * bp1[(std::size_t)(k - q)] / denom;
            } else if (m <= q && k <= q) {
                value = bm1[(std::size_t)std::max(m, k)] -
                        b0[(std::size_t)m] * b0[(std::size_t)k] / denom;
            } else if (m <= q) {  // cumulative count vs cumulative mass
                const int kk = k - q;
                value = b0[(std::size_t)std::max(m, kk)] -
                        b0[(std::size_t)m] * bp1[(std::size_t)kk] / denom;
            } else {
                const int mm = m - q, kk = k - q;
                value = bp1[(std::size_t)std::max(mm, kk)] -
                        bp1[(std::size_t)mm] * bp1[(std::size_t)kk] / denom;
            }
            cov.at(m, k) = value;
            cov.at(k, m) = value;
        }
    }
    cov.verify();
    return cov;
}

std::vector<double> small_size_alphas(double p, const std::vector<double>& rho) {
    if (!(p > 0.0)) throw std::invalid_argument("small_size_alphas: requires p > 0");
    std::vector<double> alpha;
    alpha.reserve(rho.size() + 1);
    const double lead = std::sqrt(p * (p + 2.0)) / (p + 1.0);
    for (double r : rho) {
        if (!(r >= 0.0) || !(r < 1.0))
            throw std::invalid_argument("small_size_alphas: ratios must lie in [0, 1)");
        const double num = 1.0 - std::pow(r, p + 1.0);
        const double den = std::sqrt((1.0 - std::pow(r, p + 2.0)) * (1.0 - std::pow(r, p)));
        alpha.push_back(lead * num / den);
    }
    // Terminal stratum: Gamma(p+1)/sqrt(Gamma(p)Gamma(p+2)) = sqrt(p/(p+1)).
    alpha.push_back(std::sqrt(p / (p + 1.0)));
    return alpha;
}

namespace {

// Occupancy weight factor e^{-t}/(1 -+ e^{-t}); expm1 keeps the geometric
// branch accurate for small t.
inline double occupancy_factor(ShapeKind kind, double t) {
    if (kind == ShapeKind::BoseEinstein) return 1.0 / std::expm1(t);
    return 1.0 / (std::exp(t) + 1.0);
}

struct ShapeIntegrand {
    ShapeKind kind;
    double exponent;  // power of x in the integrand
    double c;
    double offset;    // lower endpoint u; x = offset + t/(1-t)
};

// Transformed integrand over t in [0, 1) for the integral of
// x^exponent * occupancy_factor(c*x) over (offset, inf).
double shape_integrand(double t, const void* ctx) {
    const ShapeIntegrand& s = *static_cast<const ShapeIntegrand*>(ctx);
    if (t >= 1.0 - 1e-12) return 0.0;
    const double om = 1.0 - t;
    const double x = s.offset + t / om;
    const double cx = s.c * x;
    if (cx > 700.0) return 0.0;  // weight below 1e-300: truncated tail
    double value;
    if (cx == 0.0) {
        // Analytic limit at x = 0: the geometric factor behaves like 1/(cx),
        // the zero/one factor like 1/2.
        if (s.kind == ShapeKind::BoseEinstein) {
            if (s.exponent > 1.0)
                value = 0.0;
            else if (s.exponent == 1.0)
                value = 1.0 / s.c;
            else
                return std::numeric_limits<double>::infinity();
        } else {
            value = s.exponent > 0.0 ? 0.0 : 0.5;
        }
    } else {
        value = std::pow(x, s.exponent) * occupancy_factor(s.kind, cx);
    }
    return value / (om * om);
}

// Head of the geometric-occupancy integral when it starts at 0 with
// exponent in (0,1): integrate y^{exponent-1} * (y / expm1(y)) over (0, 1]
// after y = w^m, which turns the integrable singularity into the regular
// integrand m * w^{m*exponent-1} * g(w^m).
struct BeHeadIntegrand {
    double exponent;
    int m;
};

double be_head_integrand(double w, const void* ctx) {
    const BeHeadIntegrand& h = *static_cast<const BeHeadIntegrand*>(ctx);
    const double y = std::pow(w, double(h.m));
    const double g = y == 0.0 ? 1.0 : y / std::expm1(y);
    return double(h.m) * std::pow(w, double(h.m) * h.exponent - 1.0) * g;
}

double shape_integral(ShapeKind kind, double exponent, double c, double from) {
    // Substitute y = c*x first: the integrand then decays on a unit scale for
    // every c, so the compactifying map t -> c*from + t/(1-t) never squeezes
    // significant mass against t = 1 (which would stall the quadrature on
    // roundoff noise when c is small during the bisection for the constant).
    const double scale = std::pow(c, -(exponent + 1.0));
    const double y0 = c * from;
    if (kind == ShapeKind::BoseEinstein && exponent > 0.0 && exponent < 1.0 && y0 < 1.0) {
        // The integrand behaves like y^{exponent-1} near the origin: finite
        // integral, but a spike the plain quadrature cannot resolve once the
        // lower limit is small. Flatten the stretch (y0, 1] by substitution
        // (regular for any lower limit), keep the regular tail from y = 1.
        BeHeadIntegrand h{exponent, (int)std::ceil(2.0 / exponent)};
        const double w0 = std::pow(y0, 1.0 / double(h.m));
        const double head = adaptive_simpson(&be_head_integrand, &h, w0, 1.0, 1e-12);
        ShapeIntegrand tail{kind, exponent, 1.0, 1.0};
        return scale * (head + adaptive_simpson(&shape_integrand, &tail, 0.0, 1.0, 1e-12));
    }
    ShapeIntegrand s{kind, exponent, 1.0, y0};
    return scale * adaptive_simpson(&shape_integrand, &s, 0.0, 1.0, 1e-12);
}

}  // namespace

double comparison_shape_constant(ShapeKind kind, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("comparison_shape_constant: requires p >= 1");
    // The unit-mass integral decreases strictly in c; bisect on c.
    double lo = 1e-2, hi = 1.0;
    auto mass = [&](double c) { return shape_integral(kind, p, c, 0.0); };
    while (mass(hi) > 1.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw NumericError("comparison_shape_constant: bracket expansion failed");
    }
    while (mass(lo) < 1.0) {
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-12) throw NumericError("comparison_shape_constant: bracket expansion failed");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mass(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double comparison_shape_value(ShapeKind kind, double p, double u, double c) {
    if (!(p >= 1.0)) throw std::invalid_argument("comparison_shape: requires p >= 1");
    if (u < 0.0) throw std::invalid_argument("comparison_shape: requires u >= 0");
    if (u == 0.0 && p == 1.0 && kind == ShapeKind::BoseEinstein)
        return std::numeric_limits<double>::infinity();
    return shape_integral(kind, p - 1.0, c, u);
}

double comparison_shape(ShapeKind kind, double p, double u) {
    return comparison_shape_value(kind, p, u, comparison_shape_constant(kind, p));
}

}  // namespace partitions
