#include "partitions/stratification.hpp"

#include <cmath>
#include <stdexcept>

#include "partitions/errors.hpp"
#include "partitions/special_functions.hpp"
#include "partitions/tilt.hpp"

namespace partitions {

namespace {

void check_boundaries(const std::vector<std::int64_t>& M, std::int64_t N) {
    // M = (M_0=0, M_1, ..., M_q, N+1); interior cuts strictly increasing in [1, N].
    for (std::size_t j = 1; j + 1 < M.size(); ++j) {
        if (M[j] < 1)
            throw std::invalid_argument("StratificationPlan: cut points must be >= 1");
        if (M[j] <= M[j - 1])
            throw std::invalid_argument("StratificationPlan: cut points must be strictly increasing");
        if (M[j] > N)
            throw std::invalid_argument("StratificationPlan: cut points must be <= N");
    }
}

}  // namespace

StratificationPlan StratificationPlan::threshold(const ModelParams& params, std::int64_t N,
                                                 const StrataGrid& grid) {
    if (N < 1) throw std::invalid_argument("StratificationPlan: N must be >= 1");
    const ScalingInfo scaling = scaling_info(params, N);
    StratificationPlan plan;
    plan.regime_ = Regime::Threshold;
    plan.N_ = N;
    plan.q_ = grid.q();
    plan.M_.reserve((std::size_t)grid.q() + 2);
    for (int j = 0; j <= grid.q(); ++j)
        plan.M_.push_back((std::int64_t)std::floor(grid.u(j) * scaling.r_N));
    plan.M_.push_back(N + 1);
    check_boundaries(plan.M_, N);
    plan.grid_ = grid;
    return plan;
}

StratificationPlan StratificationPlan::small_size(const ModelParams& params, std::int64_t N,
                                                  const std::vector<double>& coeffs,
                                                  double gamma) {
    if (N < 1) throw std::invalid_argument("StratificationPlan: N must be >= 1");
    if (coeffs.empty()) throw std::invalid_argument("StratificationPlan: need at least one cut");
    const double p = params.p();
    if (!(gamma > 0.0) || !(gamma < 1.0 / (p + 1.0)))
        throw std::invalid_argument("StratificationPlan: exponent must lie in (0, 1/(p+1))");

    StratificationPlan plan;
    plan.regime_ = Regime::SmallSize;
    plan.N_ = N;
    plan.q_ = (int)coeffs.size();
    plan.M_.reserve(coeffs.size() + 2);
    plan.M_.push_back(0);
    const double scale = std::pow((double)N, gamma);
    for (double c : coeffs) {
        if (!(c > 0.0)) throw std::invalid_argument("StratificationPlan: coeffs must be > 0");
        plan.M_.push_back((std::int64_t)std::ceil(c * scale));
    }
    plan.M_.push_back(N + 1);
    check_boundaries(plan.M_, N);

    plan.rho_.reserve(coeffs.size());
    plan.rho_.push_back(0.0);  // M_0 = 0
    for (std::size_t j = 0; j + 1 < coeffs.size(); ++j) {
        const double rho = coeffs[j] / coeffs[j + 1];
        if (!(rho < 1.0))
            throw std::invalid_argument("StratificationPlan: coeffs must be strictly increasing");
        plan.rho_.push_back(rho);
    }
    return plan;
}

StratificationPlan StratificationPlan::explicit_cuts(std::int64_t N,
                                                     const std::vector<std::int64_t>& cuts,
                                                     Regime regime) {
    if (N < 1) throw std::invalid_argument("StratificationPlan: N must be >= 1");
    if (cuts.empty()) throw std::invalid_argument("StratificationPlan: need at least one cut");
    StratificationPlan plan;
    plan.regime_ = regime;
    plan.N_ = N;
    plan.q_ = (int)cuts.size();
    plan.M_.reserve(cuts.size() + 2);
    plan.M_.push_back(0);
    plan.M_.insert(plan.M_.end(), cuts.begin(), cuts.end());
    plan.M_.push_back(N + 1);
    check_boundaries(plan.M_, N);
    if (regime == Regime::SmallSize) {
        plan.rho_.reserve(cuts.size());
        plan.rho_.push_back(0.0);
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
            plan.rho_.push_back((double)cuts[j] / (double)cuts[j + 1]);
    } else {
        // Threshold scalings need grid abscissas; explicit threshold cuts are
        // accepted only for raw stratum counting, not for scale_stats.
    }
    return plan;
}

const StrataGrid& StratificationPlan::grid() const {
    if (!grid_.has_value())
        throw std::logic_error("StratificationPlan: no grid attached (not a threshold plan)");
    return *grid_;
}

MomentTables compute_moment_tables(const ModelParams& params, const StratificationPlan& plan,
                                   double delta) {
    const int q = plan.q();
    MomentTables t;
    t.delta = delta;
    t.S_star.assign((std::size_t)q + 1, 0.0);
    t.E_star.assign((std::size_t)q + 1, 0.0);
    t.V_star.assign((std::size_t)q + 1, 0.0);

    const std::int64_t size_cap = std::min<std::int64_t>(plan.N(), params.max_size());
    for (int j = 0; j <= q; ++j) {
        const std::int64_t lo = std::max<std::int64_t>(plan.M(j), 1);
        const std::int64_t hi = std::min<std::int64_t>(plan.M(j + 1) - 1, size_cap);
        double s = 0.0, sc = 0.0, e = 0.0, ec = 0.0, v = 0.0, vc = 0.0;
        for (std::int64_t k = lo; k <= hi; ++k) {
            const double w = std::exp(params.log_a(k) - delta * (double)k);
            double y = w - sc;
            double acc = s + y;
            sc = (acc - s) - y;
            s = acc;
            const double kw = (double)k * w;
            y = kw - ec;
            acc = e + y;
            ec = (acc - e) - y;
            e = acc;
            const double kkw = (double)k * kw;
            y = kkw - vc;
            acc = v + y;
            vc = (acc - v) - y;
            v = acc;
        }
        t.S_star[(std::size_t)j] = s;
        t.E_star[(std::size_t)j] = e;
        t.V_star[(std::size_t)j] = v;
    }

    // Cumulative forms: j = 0 is the head stratum itself; j >= 1 are tails
    // from M_j, accumulated as suffix sums so the telescoping identity
    // S_j = Σ_{i>=j} S*_i holds exactly.
    t.S.assign((std::size_t)q + 1, 0.0);
    t.E.assign((std::size_t)q + 1, 0.0);
    t.V.assign((std::size_t)q + 1, 0.0);
    t.S[0] = t.S_star[0];
    t.E[0] = t.E_star[0];
    t.V[0] = t.V_star[0];
    double s_tail = 0.0, e_tail = 0.0, v_tail = 0.0;
    for (int j = q; j >= 1; --j) {
        s_tail += t.S_star[(std::size_t)j];
        e_tail += t.E_star[(std::size_t)j];
        v_tail += t.V_star[(std::size_t)j];
        t.S[(std::size_t)j] = s_tail;
        t.E[(std::size_t)j] = e_tail;
        t.V[(std::size_t)j] = v_tail;
    }
    return t;
}

ScaledStats scale_stats(const Partition& eta, const StratificationPlan& plan,
                        const MomentTables& tables, const ModelParams& params) {
    if (eta.total() != plan.N())
        throw std::invalid_argument("scale_stats: partition total differs from plan N");
    const int q = plan.q();

    // Raw per-stratum counts and masses from the integer tail sums.
    std::vector<double> nu_star((std::size_t)q + 1), K_star((std::size_t)q + 1);
    std::vector<double> nu_tail((std::size_t)q + 1), K_tail((std::size_t)q + 1);
    for (int j = 0; j <= q; ++j) {
        const std::int64_t lo = std::max<std::int64_t>(plan.M(j), 1);
        const std::int64_t hi = plan.M(j + 1);  // exclusive
        nu_star[(std::size_t)j] = (double)(eta.tail_count(lo) - eta.tail_count(hi));
        K_star[(std::size_t)j] = (double)(eta.tail_mass(lo) - eta.tail_mass(hi));
        nu_tail[(std::size_t)j] = (double)eta.tail_count(lo);
        K_tail[(std::size_t)j] = (double)eta.tail_mass(lo);
    }

    ScaledStats out;
    out.regime = plan.regime();

    if (plan.regime() == Regime::Threshold) {
        const double p = params.p();
        const StrataGrid& grid = plan.grid();
        // First-stratum integral weights f_0(s) = C ∫_0^{u_1} x^s e^{-x} dx.
        const double f0_m = b_r(params, p - 1.0, 0.0) - b_r(params, p - 1.0, grid.u(1));
        const double f0_p = b_r(params, p + 1.0, 0.0) - b_r(params, p + 1.0, grid.u(1));
        const double scale_nu = std::sqrt(f0_m / tables.S[0]);
        const double scale_K = std::sqrt(f0_p / tables.V[0]);

        out.nu_star_hat.resize((std::size_t)q + 1);
        out.K_star_hat.resize((std::size_t)q + 1);
        out.nu_hat.resize((std::size_t)q + 1);
        out.K_hat.resize((std::size_t)q);
        for (int j = 0; j <= q; ++j) {
            out.nu_star_hat[(std::size_t)j] =
                scale_nu * (nu_star[(std::size_t)j] - tables.S_star[(std::size_t)j]);
            out.K_star_hat[(std::size_t)j] =
                scale_K * (K_star[(std::size_t)j] - tables.E_star[(std::size_t)j]);
        }
        // Cumulative scalings: the j = 0 entry is the head stratum itself.
        out.nu_hat[0] = out.nu_star_hat[0];
        for (int j = 1; j <= q; ++j) {
            out.nu_hat[(std::size_t)j] =
                scale_nu * (nu_tail[(std::size_t)j] - tables.S[(std::size_t)j]);
            out.K_hat[(std::size_t)(j - 1)] =
                scale_K * (K_tail[(std::size_t)j] - tables.E[(std::size_t)j]);
        }
    } else {
        out.nu_star_hat.resize((std::size_t)q + 1);
        out.K_star_hat.resize((std::size_t)q);
        for (int j = 0; j <= q; ++j) {
            const double s = tables.S_star[(std::size_t)j];
            if (!(s > 0.0)) throw NumericError("scale_stats: empty stratum (zero weight)");
            out.nu_star_hat[(std::size_t)j] = (nu_star[(std::size_t)j] - s) / std::sqrt(s);
        }
        for (int j = 0; j < q; ++j) {
            const double v = tables.V_star[(std::size_t)j];
            if (!(v > 0.0)) throw NumericError("scale_stats: empty stratum (zero weight)");
            out.K_star_hat[(std::size_t)j] = (K_star[(std::size_t)j] - tables.E_star[(std::size_t)j]) / std::sqrt(v);
        }
    }
    return out;
}

}  // namespace partitions
