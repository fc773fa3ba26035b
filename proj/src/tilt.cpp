#include "partitions/tilt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "partitions/errors.hpp"
#include "partitions/special_functions.hpp"

namespace partitions {

double tilted_sum(const ModelParams& params, std::int64_t N, double delta, int moment) {
    if (N < 1) throw std::invalid_argument("tilted_sum: N must be >= 1");
    const std::int64_t limit = std::min<std::int64_t>(N, params.max_size());
    const double tail_cut = 1e-18 * double(N);
    // Early break is justified by unimodality of the term sequence, which
    // holds for the power-law family; explicit tables are summed in full.
    const bool may_break = delta > 0.0 && params.is_power_law();

    double sum = 0.0, comp = 0.0;  // Kahan
    double peak = -std::numeric_limits<double>::infinity();
    int below = 0;
    for (std::int64_t k = 1; k <= limit; ++k) {
        double lt = params.log_a(k) + double(moment) * std::log(double(k)) - delta * double(k);
        if (lt > 700.0) return std::numeric_limits<double>::infinity();
        double term = std::exp(lt);
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (term >= peak) {
            peak = term;
            below = 0;
        } else if (may_break && term < tail_cut) {
            // Past the peak and 8 consecutive negligible terms: the remaining
            // tail is below ~1e-12·N, three orders under the residual budget.
            if (++below >= 8) break;
        } else {
            below = 0;
        }
    }
    return sum;
}

namespace {

double initial_guess(const ModelParams& params, std::int64_t N) {
    if (params.is_power_law()) {
        double p = params.p();
        double h = std::pow(params.C() * gamma_fn(p + 1.0), 1.0 / (p + 1.0));
        return h * std::pow(double(N), -1.0 / (p + 1.0));
    }
    return 1.0 / double(N);
}

}  // namespace

TiltSolution solve_tilt(const ModelParams& params, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("solve_tilt: N must be >= 1");
    const double target = double(N);
    const double tol = 1e-12 * target;
    const double contract = 1e-9 * target;
    int iters = 0;

    auto lhs = [&](double d) {
        ++iters;
        return tilted_sum(params, N, d, 1);
    };

    // Bracket the root: lhs is strictly decreasing in δ.
    double d0 = initial_guess(params, N);
    double lo, hi;  // lhs(lo) >= target >= lhs(hi)
    double f0 = lhs(d0);
    double step = std::max(std::fabs(d0), 1.0 / double(N));
    if (f0 >= target) {
        lo = d0;
        hi = d0 + step;
        while (lhs(hi) > target) {
            lo = hi;
            step *= 2.0;
            hi += step;
            if (iters > 200) throw SolverError("solve_tilt: failed to bracket", lo, hi);
        }
    } else {
        hi = d0;
        lo = d0 - step;
        while (lhs(lo) < target) {
            hi = lo;
            step *= 2.0;
            lo -= step;
            if (iters > 200) throw SolverError("solve_tilt: failed to bracket", lo, hi);
        }
    }

    // Safeguarded Newton: derivative of lhs is -Σ k²·a_k·e^{-δk}.
    double d = 0.5 * (lo + hi);
    double f = lhs(d) - target;
    for (int i = 0; i < 200; ++i) {
        if (std::fabs(f) <= tol) break;
        if (f > 0.0) lo = d; else hi = d;
        double deriv = -tilted_sum(params, N, d, 2);
        double d_new = d - f / deriv;
        if (!(d_new > lo && d_new < hi)) d_new = 0.5 * (lo + hi);
        d = d_new;
        f = lhs(d) - target;
    }
    if (std::fabs(f) > contract)
        throw SolverError("solve_tilt: residual above contract after iteration cap", lo, hi);

    TiltSolution sol;
    sol.delta = d;
    sol.residual = std::fabs(f);
    sol.N = N;
    sol.iterations = iters;
    return sol;
}

ScalingInfo scaling_info(const ModelParams& params, std::int64_t N) {
    if (!params.is_power_law())
        throw std::invalid_argument("scaling_info: requires power-law parameters");
    if (N < 1) throw std::invalid_argument("scaling_info: N must be >= 1");
    ScalingInfo info;
    info.p = params.p();
    info.C = params.C();
    info.h = std::pow(info.C * gamma_fn(info.p + 1.0), 1.0 / (info.p + 1.0));
    info.r_N = std::pow(double(N), 1.0 / (info.p + 1.0)) / info.h;
    return info;
}

}  // namespace partitions
