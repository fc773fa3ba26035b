#include "partitions/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "partitions/special_functions.hpp"
#include "partitions/tilt.hpp"

namespace partitions {

void ExperimentConfig::validate() const {
    if (samples < 1) throw std::invalid_argument("ExperimentConfig: samples must be >= 1");
    if (threads < 1) throw std::invalid_argument("ExperimentConfig: threads must be >= 1");
    if (max_rejections < 1)
        throw std::invalid_argument("ExperimentConfig: max_rejections must be >= 1");
}

namespace {

// Runs row_fn once per replica (deterministic stream per replica index) and
// returns the rows in replica order. Worker threads fill disjoint slots, so
// the result — and everything accumulated from it sequentially — is identical
// for any thread count.
template <typename RowFn>
std::vector<std::vector<double>> replica_rows(std::int64_t samples, std::uint64_t seed,
                                              int threads, const RowFn& row_fn) {
    std::vector<std::vector<double>> rows((std::size_t)samples);
    auto run_range = [&](std::int64_t lo, std::int64_t hi, std::exception_ptr& err) noexcept {
        try {
            for (std::int64_t r = lo; r < hi; ++r) {
                Pcg64 rng = replica_rng(seed, (std::uint64_t)r);
                rows[(std::size_t)r] = row_fn(rng);
            }
        } catch (...) {
            err = std::current_exception();
        }
    };
    const int workers = (int)std::min<std::int64_t>(threads, samples);
    if (workers <= 1) {
        std::exception_ptr err;
        run_range(0, samples, err);
        if (err) std::rethrow_exception(err);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs((std::size_t)workers);
        const std::int64_t chunk = (samples + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            const std::int64_t lo = (std::int64_t)t * chunk;
            const std::int64_t hi = std::min<std::int64_t>(samples, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi, std::ref(errs[(std::size_t)t]));
        }
        for (auto& th : pool) th.join();
        for (const auto& err : errs)
            if (err) std::rethrow_exception(err);
    }
    return rows;
}

}  // namespace

std::vector<double> uniform_grid(double from, double to, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("uniform_grid: step must be > 0");
    std::vector<double> grid;
    for (double u = from; u <= to + 0.5 * step; u += step) grid.push_back(u);
    return grid;
}

LimitShapeResult run_limit_shape(const ModelParams& params, std::int64_t N,
                                 const std::vector<double>& eval_u,
                                 const ExperimentConfig& config, double band) {
    config.validate();
    if (eval_u.empty()) throw std::invalid_argument("run_limit_shape: empty grid");
    const ScalingInfo scaling = scaling_info(params, N);
    const double r = scaling.r_N;
    const double p = params.p();

    std::vector<double> l_theory(eval_u.size());
    for (std::size_t i = 0; i < eval_u.size(); ++i)
        l_theory[i] = limit_shape_l(p, eval_u[i]);

    const SamplerHandle sampler(params, N, config.method);
    const std::size_t dim = eval_u.size();
    // Row layout: scaled boundary at each grid point, then the component
    // count, then the per-sample sup deviation from the limiting curve.
    const auto rows = replica_rows(
        config.samples, config.seed, config.threads, [&](Pcg64& rng) {
            const Partition eta = sampler.draw(rng, config.max_rejections);
            std::vector<double> row(dim + 2);
            double sup = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double value = (r / (double)N) * (double)eta.nu(r * eval_u[i]);
                row[i] = value;
                sup = std::max(sup, std::fabs(value - l_theory[i]));
            }
            row[dim] = (double)eta.component_count();
            row[dim + 1] = sup;
            return row;
        });

    MomentAccumulator acc((int)dim + 1);
    std::int64_t within = 0;
    std::vector<double> head(dim + 1);
    for (const auto& row : rows) {
        std::copy(row.begin(), row.begin() + (std::ptrdiff_t)dim + 1, head.begin());
        acc.add(head);
        if (row[dim + 1] <= band) ++within;
    }

    LimitShapeResult res;
    res.u = eval_u;
    res.l_theory = std::move(l_theory);
    res.mean.resize(dim);
    res.stderr_mean.resize(dim);
    double sup_dev = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        res.mean[i] = acc.mean((int)i);
        res.stderr_mean[i] = acc.mean_stderr((int)i);
        sup_dev = std::max(sup_dev, std::fabs(res.mean[i] - res.l_theory[i]));
    }
    res.sup_deviation = sup_dev;
    res.band = band;
    res.within_band_fraction = (double)within / (double)config.samples;
    res.mean_nu0 = acc.mean((int)dim);
    res.mean_nu0_stderr = acc.mean_stderr((int)dim);
    res.r_N = r;
    res.samples = config.samples;
    return res;
}

CltResult run_clt_fluctuations(const ModelParams& params, std::int64_t N,
                               const StrataGrid& grid, const ExperimentConfig& config) {
    config.validate();
    const StratificationPlan plan = StratificationPlan::threshold(params, N, grid);
    const TiltSolution tilt = solve_tilt(params, N);
    const MomentTables tables = compute_moment_tables(params, plan, tilt.delta);
    const ScalingInfo scaling = scaling_info(params, N);
    const int q = grid.q();
    const int dim = 2 * q + 1;
    const double p = params.p();

    CltResult res;
    res.q = q;
    res.delta = tilt.delta;
    res.r_N = scaling.r_N;
    res.theory_theta = cov_theta_star(params, grid);
    res.theory_e = cov_e(params, grid);
    res.relat_predicted = std::sqrt(params.C() * gamma_fn(p + 1.0) * (double)N / scaling.r_N);

    std::vector<double> l_at_u((std::size_t)q + 1);
    for (int j = 1; j <= q; ++j) l_at_u[(std::size_t)j] = limit_shape_l(p, grid.u(j));

    const SamplerHandle sampler(params, N, config.method);
    // Row layout: theta* vector (dim), cumulative vector (dim), boundary
    // deviations at u_1..u_q (q).
    const auto rows = replica_rows(
        config.samples, config.seed, config.threads, [&](Pcg64& rng) {
            const Partition eta = sampler.draw(rng, config.max_rejections);
            const ScaledStats stats = scale_stats(eta, plan, tables, params);
            std::vector<double> row;
            row.reserve((std::size_t)(2 * dim + q));
            for (int j = 0; j <= q; ++j) row.push_back(stats.nu_star_hat[(std::size_t)j]);
            for (int j = 1; j <= q; ++j) row.push_back(stats.K_star_hat[(std::size_t)j]);
            for (int j = 0; j <= q; ++j) row.push_back(stats.nu_hat[(std::size_t)j]);
            for (int j = 1; j <= q; ++j) row.push_back(stats.K_hat[(std::size_t)(j - 1)]);
            for (int j = 1; j <= q; ++j) {
                const double scaled_nu =
                    (scaling.r_N / (double)N) * (double)eta.nu(scaling.r_N * grid.u(j));
                row.push_back(scaled_nu - l_at_u[(std::size_t)j]);
            }
            return row;
        });

    MomentAccumulator acc_theta(dim), acc_e(dim);
    MomentAccumulator acc_relat(2 * q);  // (deviation_j, nu_hat_j) pairs
    std::vector<std::vector<double>> marginals((std::size_t)dim);
    for (auto& m : marginals) m.reserve((std::size_t)config.samples);

    std::vector<double> v_theta((std::size_t)dim), v_e((std::size_t)dim), v_relat((std::size_t)(2 * q));
    for (const auto& row : rows) {
        for (int i = 0; i < dim; ++i) v_theta[(std::size_t)i] = row[(std::size_t)i];
        for (int i = 0; i < dim; ++i) v_e[(std::size_t)i] = row[(std::size_t)(dim + i)];
        for (int j = 0; j < q; ++j) {
            v_relat[(std::size_t)j] = row[(std::size_t)(2 * dim + j)];       // deviation
            v_relat[(std::size_t)(q + j)] = row[(std::size_t)(dim + 1 + j)];  // nu_hat_j, j>=1
        }
        acc_theta.add(v_theta);
        acc_e.add(v_e);
        if (q > 0) acc_relat.add(v_relat);
        for (int i = 0; i < dim; ++i) marginals[(std::size_t)i].push_back(v_e[(std::size_t)i]);
    }

    res.emp_theta.assign((std::size_t)dim * dim, 0.0);
    res.emp_e.assign((std::size_t)dim * dim, 0.0);
    for (int m = 0; m < dim; ++m) {
        for (int k = 0; k < dim; ++k) {
            const double t_emp = acc_theta.covariance(m, k);
            const double e_emp = acc_e.covariance(m, k);
            res.emp_theta[(std::size_t)m * dim + k] = t_emp;
            res.emp_e[(std::size_t)m * dim + k] = e_emp;
            res.max_abs_delta_theta =
                std::max(res.max_abs_delta_theta, std::fabs(t_emp - res.theory_theta.at(m, k)));
            res.max_abs_delta_e =
                std::max(res.max_abs_delta_e, std::fabs(e_emp - res.theory_e.at(m, k)));
        }
    }
    res.cov_nu_star_01 = q >= 1 ? acc_theta.covariance(0, 1) : 0.0;

    for (int i = 0; i < dim; ++i) {
        MarginalNormality mn;
        mn.label = res.theory_e.labels[(std::size_t)i];
        mn.test = normality_test(marginals[(std::size_t)i]);
        res.normality.push_back(std::move(mn));
    }

    res.relat_slope.resize((std::size_t)q);
    for (int j = 0; j < q; ++j) {
        const double var_dev = acc_relat.variance(j);
        res.relat_slope[(std::size_t)j] =
            var_dev > 0.0 ? acc_relat.covariance(j, q + j) / var_dev : 0.0;
    }

    res.samples = config.samples;
    return res;
}

SmallSizeResult run_smallsize_independence(const ModelParams& params, std::int64_t N,
                                           const StratificationPlan& plan,
                                           const ExperimentConfig& config) {
    config.validate();
    if (plan.regime() != Regime::SmallSize)
        throw std::invalid_argument("run_smallsize_independence: plan must be small-size");
    if (plan.N() != N) throw std::invalid_argument("run_smallsize_independence: plan N mismatch");
    const TiltSolution tilt = solve_tilt(params, N);
    const MomentTables tables = compute_moment_tables(params, plan, tilt.delta);
    const int q = plan.q();
    const int dim = 2 * q + 1;

    SmallSizeResult res;
    res.q = q;
    res.delta = tilt.delta;
    res.M = plan.M();
    res.alpha_limit = small_size_alphas(params.p(), plan.rho());
    res.alpha_finite.resize((std::size_t)q + 1);
    for (int j = 0; j <= q; ++j) {
        res.alpha_finite[(std::size_t)j] =
            tables.E_star[(std::size_t)j] /
            std::sqrt(tables.V_star[(std::size_t)j] * tables.S_star[(std::size_t)j]);
    }

    // Interleaved vector: (count_0, mass_0, ..., count_{q-1}, mass_{q-1}, count_q).
    res.labels.reserve((std::size_t)dim);
    for (int j = 0; j < q; ++j) {
        res.labels.push_back("count_stratum_" + std::to_string(j));
        res.labels.push_back("mass_stratum_" + std::to_string(j));
    }
    res.labels.push_back("count_stratum_" + std::to_string(q));

    const SamplerHandle sampler(params, N, config.method);
    const auto rows = replica_rows(
        config.samples, config.seed, config.threads, [&](Pcg64& rng) {
            const Partition eta = sampler.draw(rng, config.max_rejections);
            const ScaledStats stats = scale_stats(eta, plan, tables, params);
            std::vector<double> row((std::size_t)dim);
            for (int j = 0; j < q; ++j) {
                row[(std::size_t)(2 * j)] = stats.nu_star_hat[(std::size_t)j];
                row[(std::size_t)(2 * j + 1)] = stats.K_star_hat[(std::size_t)j];
            }
            row[(std::size_t)(2 * q)] = stats.nu_star_hat[(std::size_t)q];
            return row;
        });

    MomentAccumulator acc(dim);
    for (const auto& row : rows) acc.add(row);

    res.emp_corr.assign((std::size_t)dim * dim, 0.0);
    for (int m = 0; m < dim; ++m)
        for (int k = 0; k < dim; ++k)
            res.emp_corr[(std::size_t)m * dim + k] = acc.correlation(m, k);

    // Block of index i: i/2 for the interleaved pairs, q for the final count.
    auto block_of = [q](int i) { return i == 2 * q ? q : i / 2; };
    res.corr_within.resize((std::size_t)q);
    for (int j = 0; j < q; ++j)
        res.corr_within[(std::size_t)j] = acc.correlation(2 * j, 2 * j + 1);
    for (int m = 0; m < dim; ++m) {
        for (int k = m + 1; k < dim; ++k) {
            if (block_of(m) == block_of(k)) continue;
            res.max_cross_block_abs_corr =
                std::max(res.max_cross_block_abs_corr, std::fabs(acc.correlation(m, k)));
        }
    }

    res.var_last = acc.variance(2 * q);
    const double alpha_q = res.alpha_limit.back();
    res.var_last_theory = 1.0 - alpha_q * alpha_q;
    res.samples = config.samples;
    return res;
}

ThresholdResult run_threshold_diag(const ModelParams& params, std::int64_t N,
                                   const ExperimentConfig& config, std::vector<double> x_grid,
                                   double w_lo, double w_hi) {
    config.validate();
    if (x_grid.empty()) x_grid = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0};
    if (!(w_lo > 0.0) || !(w_hi > w_lo))
        throw std::invalid_argument("run_threshold_diag: need 0 < w_lo < w_hi");
    const ScalingInfo scaling = scaling_info(params, N);
    const double r = scaling.r_N;

    const std::int64_t lo_size = (std::int64_t)std::ceil(w_lo * r);
    const std::int64_t hi_size = (std::int64_t)std::floor(w_hi * r);

    const SamplerHandle sampler(params, N, config.method);
    // Row layout: largest/r, window mass fraction, largest/N.
    const auto rows = replica_rows(
        config.samples, config.seed, config.threads, [&](Pcg64& rng) {
            const Partition eta = sampler.draw(rng, config.max_rejections);
            const double largest = (double)eta.largest_component();
            const double window_mass =
                (double)(eta.tail_mass(lo_size) - eta.tail_mass(hi_size + 1));
            return std::vector<double>{largest / r, window_mass / (double)N,
                                       largest / (double)N};
        });

    ThresholdResult res;
    res.r_N = r;
    res.x_grid = std::move(x_grid);
    res.cdf.assign(res.x_grid.size(), 0.0);
    res.w_lo = w_lo;
    res.w_hi = w_hi;
    double mass_sum = 0.0;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < res.x_grid.size(); ++i)
            if (row[0] <= res.x_grid[i]) res.cdf[i] += 1.0;
        mass_sum += row[1];
        res.max_largest_over_N = std::max(res.max_largest_over_N, row[2]);
        if (row[2] > 0.5) ++res.macroscopic_count;
    }
    for (double& c : res.cdf) c /= (double)config.samples;
    res.mean_mass_fraction = mass_sum / (double)config.samples;
    res.samples = config.samples;
    return res;
}

}  // namespace partitions
