// Command-line front end: reproducible sampling and verification runs with
// machine-readable output. Prints a one-line JSON summary to stdout; writes
// CSV/JSON files into the output directory; errors go to stderr as JSON.
//
// Exit codes: 0 success, 1 check failure under --assert (or selftest),
// 2 usage error, 3 numeric/solver error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "partitions/errors.hpp"
#include "partitions/experiments.hpp"
#include "partitions/oracle.hpp"
#include "partitions/partition_function.hpp"
#include "partitions/samplers.hpp"
#include "partitions/special_functions.hpp"
#include "partitions/stratification.hpp"
#include "partitions/theory.hpp"
#include "partitions/tilt.hpp"

using nlohmann::json;
using namespace partitions;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string method_name(SampleMethod m) {
    switch (m) {
        case SampleMethod::Recursive: return "recursive";
        case SampleMethod::Boltzmann: return "boltzmann";
        default: return "auto";
    }
}

// All options shared by the subcommands, mirrored verbatim into every output
// for provenance.
struct RunConfig {
    std::string subcommand;
    double p = 1.0;
    double C = 1.0;
    std::string a_table;  // empty unless an explicit weight table is used
    std::int64_t N = 0;
    std::int64_t samples = 1000;
    std::uint64_t seed = 0;
    std::string method = "auto";
    int threads = 1;
    std::string out_dir;
    std::string format = "csv";
    bool assert_checks = false;
    double tol = 0.0;
    json grid = json::object();

    json to_json() const {
        return json{{"subcommand", subcommand},
                    {"p", p},
                    {"C", C},
                    {"a_table", a_table.empty() ? json() : json(a_table)},
                    {"N", N},
                    {"samples", samples},
                    {"seed", seed},
                    {"method", method},
                    {"threads", threads},
                    {"out_dir", out_dir},
                    {"format", format},
                    {"assert", assert_checks},
                    {"tol", tol},
                    {"grid", grid}};
    }
};

std::vector<double> load_a_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open weight table file: " + path);
    std::vector<double> a;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;  // ignore blank lines
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(line.substr(first), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("weight table line " + std::to_string(line_no) +
                                        " is not a number: " + path);
        }
        if (!(value > 0.0))
            throw std::invalid_argument("weight table line " + std::to_string(line_no) +
                                        " must be a positive real: " + path);
        a.push_back(value);
    }
    if (a.empty()) throw std::invalid_argument("weight table file is empty: " + path);
    return a;
}

ModelParams make_params(const RunConfig& cfg, bool theory_needed) {
    if (!cfg.a_table.empty()) {
        if (theory_needed)
            throw std::invalid_argument(
                "subcommand '" + cfg.subcommand +
                "' requires power-law weights (--p/--C); --a-table is not supported here");
        return ModelParams::explicit_table(load_a_table(cfg.a_table));
    }
    return ModelParams::power_law(cfg.C, cfg.p);
}

SampleMethod parse_method(const std::string& name) {
    if (name == "auto") return SampleMethod::Auto;
    if (name == "recursive") return SampleMethod::Recursive;
    if (name == "boltzmann") return SampleMethod::Boltzmann;
    throw std::invalid_argument("unknown method: " + name);
}

std::string out_path(const RunConfig& cfg, const std::string& file) {
    if (cfg.out_dir.empty()) return file;
    return cfg.out_dir + "/" + file;
}

// CSV layout: one comment line carrying the full run configuration, then the
// header row, then data. Fixed column names per subcommand.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const RunConfig& cfg, const std::string& header)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path);
        out_ << "# config " << cfg.to_json().dump() << "\n" << header << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

void emit_summary(const json& j) { std::cout << j.dump() << std::endl; }

ExperimentConfig experiment_config(const RunConfig& cfg) {
    ExperimentConfig ec;
    ec.seed = cfg.seed;
    ec.samples = cfg.samples;
    ec.method = parse_method(cfg.method);
    ec.threads = cfg.threads;
    return ec;
}

json matrix_json(const std::vector<double>& m, int dim) {
    json rows = json::array();
    for (int i = 0; i < dim; ++i) {
        json row = json::array();
        for (int k = 0; k < dim; ++k) row.push_back(m[(std::size_t)i * dim + k]);
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------

int cmd_sample(const RunConfig& cfg) {
    const ModelParams params = make_params(cfg, false);
    SamplerConfig sc;
    sc.seed = cfg.seed;
    sc.method = parse_method(cfg.method);
    sc.replica_count = cfg.samples;
    sc.threads = cfg.threads;
    const BatchResult batch = sample_batch(sc, params, cfg.N);

    double mean_count = 0.0, mean_largest = 0.0;
    for (const auto& eta : batch.partitions) {
        mean_count += (double)eta.component_count();
        mean_largest += (double)eta.largest_component();
    }
    mean_count /= (double)cfg.samples;
    mean_largest /= (double)cfg.samples;

    if (cfg.format == "json") {
        json parts = json::array();
        for (const auto& eta : batch.partitions) parts.push_back(json::parse(eta.to_json()));
        write_json_file(out_path(cfg, "samples.json"),
                        json{{"config", cfg.to_json()}, {"partitions", parts}});
    } else {
        CsvWriter csv(out_path(cfg, "samples.csv"), cfg, "sample,size,multiplicity");
        for (std::size_t r = 0; r < batch.partitions.size(); ++r)
            for (const auto& [size, mult] : batch.partitions[r].counts())
                csv.row({std::to_string(r), std::to_string(size), std::to_string(mult)});
    }

    emit_summary(json{{"subcommand", "sample"},
                      {"config", cfg.to_json()},
                      {"method_used", method_name(batch.method_used)},
                      {"total_rejections", batch.total_rejections},
                      {"mean_component_count", mean_count},
                      {"mean_largest_component", mean_largest}});
    return kExitOk;
}

int cmd_pmf(const RunConfig& cfg) {
    const ModelParams params = make_params(cfg, false);
    const PartitionFunctionTable table(params, cfg.N);
    CsvWriter csv(out_path(cfg, "pmf_table.csv"), cfg, "n,logc");
    for (std::int64_t n = 0; n <= cfg.N; ++n)
        csv.row({std::to_string(n), fmt_double(table.log_c(n))});
    emit_summary(json{{"subcommand", "pmf"},
                      {"config", cfg.to_json()},
                      {"log_c_N", table.log_c(cfg.N)}});
    return kExitOk;
}

int cmd_tilt(const RunConfig& cfg) {
    const ModelParams params = make_params(cfg, true);
    const TiltSolution sol = solve_tilt(params, cfg.N);
    const ScalingInfo scaling = scaling_info(params, cfg.N);
    const double ratio = sol.delta * std::pow((double)cfg.N, 1.0 / (params.p() + 1.0)) / scaling.h;
    const json summary{{"subcommand", "tilt"},
                       {"config", cfg.to_json()},
                       {"delta", sol.delta},
                       {"h", scaling.h},
                       {"r_N", scaling.r_N},
                       {"residual", sol.residual},
                       {"iterations", sol.iterations},
                       {"delta_over_asymptotic", ratio}};
    write_json_file(out_path(cfg, "tilt.json"), summary);
    emit_summary(summary);
    if (cfg.assert_checks) {
        const bool ok = sol.residual <= 1e-9 * (double)cfg.N && ratio >= 0.9 && ratio <= 1.1;
        if (!ok) return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_limit_shape(RunConfig cfg, double u_min, double u_max, double u_step, double band) {
    cfg.grid = json{{"u_min", u_min}, {"u_max", u_max}, {"u_step", u_step}, {"band", band}};
    const ModelParams params = make_params(cfg, true);
    const std::vector<double> grid = uniform_grid(u_min, u_max, u_step);
    const LimitShapeResult res =
        run_limit_shape(params, cfg.N, grid, experiment_config(cfg), band);

    CsvWriter csv(out_path(cfg, "limit_shape.csv"), cfg, "u,mean,stderr,l_theory");
    for (std::size_t i = 0; i < res.u.size(); ++i)
        csv.row({fmt_double(res.u[i]), fmt_double(res.mean[i]), fmt_double(res.stderr_mean[i]),
                 fmt_double(res.l_theory[i])});

    const bool pass = res.sup_deviation <= cfg.tol;
    emit_summary(json{{"subcommand", "limit-shape"},
                      {"config", cfg.to_json()},
                      {"r_N", res.r_N},
                      {"sup_deviation", res.sup_deviation},
                      {"within_band_fraction", res.within_band_fraction},
                      {"mean_component_count", res.mean_nu0},
                      {"pass", pass}});
    return (cfg.assert_checks && !pass) ? kExitCheckFailed : kExitOk;
}

int cmd_fluctuations(RunConfig cfg, const std::vector<double>& cuts) {
    cfg.grid = json{{"cuts", cuts}};
    const ModelParams params = make_params(cfg, true);
    const StrataGrid grid = StrataGrid::from_cuts(cuts);
    const CltResult res = run_clt_fluctuations(params, cfg.N, grid, experiment_config(cfg));
    const int dim = 2 * res.q + 1;

    {
        CsvWriter csv(out_path(cfg, "fluctuations_theta.csv"), cfg,
                      "m,k,label_m,label_k,empirical,theory");
        for (int m = 0; m < dim; ++m)
            for (int k = 0; k < dim; ++k)
                csv.row({std::to_string(m), std::to_string(k),
                         res.theory_theta.labels[(std::size_t)m],
                         res.theory_theta.labels[(std::size_t)k],
                         fmt_double(res.emp_theta[(std::size_t)m * dim + k]),
                         fmt_double(res.theory_theta.at(m, k))});
    }
    {
        CsvWriter csv(out_path(cfg, "fluctuations_e.csv"), cfg,
                      "m,k,label_m,label_k,empirical,theory");
        for (int m = 0; m < dim; ++m)
            for (int k = 0; k < dim; ++k)
                csv.row({std::to_string(m), std::to_string(k),
                         res.theory_e.labels[(std::size_t)m],
                         res.theory_e.labels[(std::size_t)k],
                         fmt_double(res.emp_e[(std::size_t)m * dim + k]),
                         fmt_double(res.theory_e.at(m, k))});
    }

    // Check: cumulative-form variances within tol (relative) of the limit,
    // plus normality of every non-degenerate marginal.
    double max_var_rel_dev = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double theory = res.theory_e.at(i, i);
        if (theory > 0.0)
            max_var_rel_dev = std::max(
                max_var_rel_dev,
                std::fabs(res.emp_e[(std::size_t)i * dim + i] / theory - 1.0));
    }
    bool normal_ok = true;
    json normality = json::array();
    for (const auto& mn : res.normality) {
        normality.push_back(json{{"label", mn.label},
                                 {"statistic", mn.test.statistic},
                                 {"df", mn.test.df},
                                 {"p_value", mn.test.p_value},
                                 {"degenerate", mn.test.degenerate},
                                 {"pass", mn.test.pass}});
        normal_ok = normal_ok && mn.test.pass;
    }
    const bool pass = max_var_rel_dev <= cfg.tol && normal_ok;

    emit_summary(json{{"subcommand", "fluctuations"},
                      {"config", cfg.to_json()},
                      {"q", res.q},
                      {"delta", res.delta},
                      {"r_N", res.r_N},
                      {"max_abs_delta_theta", res.max_abs_delta_theta},
                      {"max_abs_delta_e", res.max_abs_delta_e},
                      {"max_var_rel_dev", max_var_rel_dev},
                      {"emp_e", matrix_json(res.emp_e, dim)},
                      {"normality", normality},
                      {"slope", res.relat_slope},
                      {"slope_predicted", res.relat_predicted},
                      {"pass", pass}});
    return (cfg.assert_checks && !pass) ? kExitCheckFailed : kExitOk;
}

int cmd_small_size(RunConfig cfg, const std::vector<double>& coeffs, double gamma) {
    cfg.grid = json{{"coeffs", coeffs}, {"gamma", gamma}};
    const ModelParams params = make_params(cfg, true);
    const StratificationPlan plan = StratificationPlan::small_size(params, cfg.N, coeffs, gamma);
    const SmallSizeResult res =
        run_smallsize_independence(params, cfg.N, plan, experiment_config(cfg));
    const int dim = 2 * res.q + 1;

    CsvWriter csv(out_path(cfg, "small_size_corr.csv"), cfg, "m,k,label_m,label_k,empirical");
    for (int m = 0; m < dim; ++m)
        for (int k = 0; k < dim; ++k)
            csv.row({std::to_string(m), std::to_string(k), res.labels[(std::size_t)m],
                     res.labels[(std::size_t)k],
                     fmt_double(res.emp_corr[(std::size_t)m * dim + k])});

    double max_alpha_dev = 0.0;
    for (int j = 0; j < res.q; ++j)
        max_alpha_dev = std::max(max_alpha_dev, std::fabs(res.corr_within[(std::size_t)j] -
                                                          res.alpha_limit[(std::size_t)j]));
    const bool pass = max_alpha_dev <= cfg.tol && res.max_cross_block_abs_corr <= cfg.tol;

    emit_summary(json{{"subcommand", "small-size"},
                      {"config", cfg.to_json()},
                      {"q", res.q},
                      {"M", res.M},
                      {"delta", res.delta},
                      {"alpha_limit", res.alpha_limit},
                      {"alpha_finite", res.alpha_finite},
                      {"corr_within", res.corr_within},
                      {"max_alpha_dev", max_alpha_dev},
                      {"max_cross_block_abs_corr", res.max_cross_block_abs_corr},
                      {"var_last", res.var_last},
                      {"var_last_theory", res.var_last_theory},
                      {"pass", pass}});
    return (cfg.assert_checks && !pass) ? kExitCheckFailed : kExitOk;
}

int cmd_threshold(RunConfig cfg, double w_lo, double w_hi) {
    cfg.grid = json{{"w_lo", w_lo}, {"w_hi", w_hi}};
    const ModelParams params = make_params(cfg, true);
    const ThresholdResult res =
        run_threshold_diag(params, cfg.N, experiment_config(cfg), {}, w_lo, w_hi);

    CsvWriter csv(out_path(cfg, "threshold_cdf.csv"), cfg, "x,cdf");
    for (std::size_t i = 0; i < res.x_grid.size(); ++i)
        csv.row({fmt_double(res.x_grid[i]), fmt_double(res.cdf[i])});

    double cdf_at_10 = 1.0;
    for (std::size_t i = 0; i < res.x_grid.size(); ++i)
        if (res.x_grid[i] == 10.0) cdf_at_10 = res.cdf[i];
    const bool pass = cdf_at_10 >= 0.99 && res.mean_mass_fraction >= 0.95 &&
                      res.macroscopic_count == 0;

    emit_summary(json{{"subcommand", "threshold"},
                      {"config", cfg.to_json()},
                      {"r_N", res.r_N},
                      {"cdf_at_10r", cdf_at_10},
                      {"mean_mass_fraction", res.mean_mass_fraction},
                      {"max_largest_over_N", res.max_largest_over_N},
                      {"macroscopic_count", res.macroscopic_count},
                      {"pass", pass}});
    return (cfg.assert_checks && !pass) ? kExitCheckFailed : kExitOk;
}

int cmd_compare_shapes(RunConfig cfg, double u_min, double u_max, double u_step) {
    cfg.grid = json{{"u_min", u_min}, {"u_max", u_max}, {"u_step", u_step}};
    const ModelParams params = make_params(cfg, true);
    const double p = params.p();
    const double c1 = comparison_shape_constant(ShapeKind::BoseEinstein, p);
    const double c2 = comparison_shape_constant(ShapeKind::FermiDirac, p);
    const std::vector<double> grid = uniform_grid(u_min, u_max, u_step);

    CsvWriter csv(out_path(cfg, "curves.csv"), cfg, "u,value,kind");
    for (const double u : grid) csv.row({fmt_double(u), fmt_double(limit_shape_l(p, u)), "limit"});
    for (const double u : grid)
        csv.row({fmt_double(u), fmt_double(comparison_shape_value(ShapeKind::BoseEinstein, p, u, c1)),
                 "bose_einstein"});
    for (const double u : grid)
        csv.row({fmt_double(u), fmt_double(comparison_shape_value(ShapeKind::FermiDirac, p, u, c2)),
                 "fermi_dirac"});

    emit_summary(json{{"subcommand", "compare-shapes"},
                      {"config", cfg.to_json()},
                      {"c_bose_einstein", c1},
                      {"c_fermi_dirac", c2},
                      {"points_per_curve", grid.size()}});
    return kExitOk;
}

int cmd_enumerate(const RunConfig& cfg) {
    const ModelParams params = make_params(cfg, false);
    const std::vector<Partition> all = enumerate_partitions(cfg.N);
    const PartitionFunctionTable table(params, cfg.N);

    auto parts_string = [](const Partition& eta) {
        std::string s;
        const auto& counts = eta.counts();
        for (auto it = counts.rbegin(); it != counts.rend(); ++it)
            for (std::int64_t i = 0; i < it->second; ++i) {
                if (!s.empty()) s += "+";
                s += std::to_string(it->first);
            }
        return s.empty() ? std::string("0") : s;
    };

    CsvWriter csv(out_path(cfg, "enumeration.csv"), cfg, "partition,probability");
    double total_prob = 0.0;
    json inline_table = json::array();
    for (const auto& eta : all) {
        const double prob = std::exp(log_pmf(eta, table));
        total_prob += prob;
        csv.row({parts_string(eta), fmt_double(prob)});
        if (all.size() <= 1000)
            inline_table.push_back(json{{"partition", parts_string(eta)}, {"probability", prob}});
    }

    json summary{{"subcommand", "enumerate"},
                 {"config", cfg.to_json()},
                 {"count", all.size()},
                 {"probability_sum", total_prob}};
    if (!inline_table.empty()) summary["table"] = std::move(inline_table);
    emit_summary(summary);
    return kExitOk;
}

int cmd_selftest(const RunConfig& cfg) {
    json checks = json::array();
    bool all_ok = true;
    auto record = [&](const std::string& name, bool ok) {
        checks.push_back(json{{"name", name}, {"pass", ok}});
        all_ok = all_ok && ok;
    };

    // Enumeration counts match the partition numbers p(5) = 7, p(10) = 42.
    record("enumeration_counts", enumerate_partitions(5).size() == 7 &&
                                     enumerate_partitions(10).size() == 42);

    // Normalizing-constant sequence for constant weights a_k = 1:
    // c = 1, 1, 3/2, 13/6, 73/24, 167/40.
    {
        const PartitionFunctionTable table(ModelParams::power_law(1.0, 1.0), 5);
        const double expected[] = {1.0, 1.0, 1.5, 13.0 / 6.0, 73.0 / 24.0, 167.0 / 40.0};
        bool ok = true;
        for (int n = 0; n <= 5; ++n)
            ok = ok && std::fabs(std::exp(table.log_c(n)) - expected[n]) < 1e-12;
        record("recurrence_constant_weights", ok);
    }

    // Exact law normalization at N = 8, p = 2.
    {
        const ModelParams params = ModelParams::power_law(1.0, 2.0);
        const PartitionFunctionTable table(params, 8);
        double sum = 0.0;
        for_each_partition(8, [&](const Partition& eta) { sum += std::exp(log_pmf(eta, table)); });
        record("pmf_normalization", std::fabs(sum - 1.0) < 1e-10);
    }

    // RNG streams are deterministic and replica-separated.
    {
        Pcg64 r1 = replica_rng(7, 0), r2 = replica_rng(7, 0), r3 = replica_rng(7, 1);
        bool same = true, distinct = false;
        for (int i = 0; i < 16; ++i) {
            const std::uint64_t a = r1.next_u64(), b = r2.next_u64(), c = r3.next_u64();
            same = same && a == b;
            distinct = distinct || a != c;
        }
        record("rng_streams", same && distinct);
    }

    // Tilt solver residual and asymptotic ratio at N = 1e5, p = 1.
    {
        const ModelParams params = ModelParams::power_law(1.0, 1.0);
        const TiltSolution sol = solve_tilt(params, 100000);
        const ScalingInfo scaling = scaling_info(params, 100000);
        const double ratio = sol.delta * std::sqrt(100000.0) / scaling.h;
        record("tilt_solver", sol.residual <= 1e-9 * 100000.0 && ratio > 0.8 && ratio < 1.2);
    }

    // Stratum weights sum to the full gamma integral; covariances verify.
    {
        const ModelParams params = ModelParams::power_law(1.0, 1.5);
        const StrataGrid grid({0.0, 0.7, 1.9});
        bool ok = true;
        for (const double s : {0.5, 1.5, 2.5}) {
            const auto f = f_strata(params, s, grid);
            double sum = 0.0;
            for (const double v : f) sum += v;
            ok = ok && std::fabs(sum - gamma_fn(s + 1.0)) < 1e-10;
        }
        try {
            cov_theta_star(params, grid).verify();
            cov_e(params, grid).verify();
        } catch (const NumericError&) {
            ok = false;
        }
        record("theory_invariants", ok);
    }

    // Comparison-shape constants at p = 1 match the closed forms
    // pi/sqrt(6) and pi/sqrt(12).
    {
        const double pi = 3.14159265358979323846;
        const double c1 = comparison_shape_constant(ShapeKind::BoseEinstein, 1.0);
        const double c2 = comparison_shape_constant(ShapeKind::FermiDirac, 1.0);
        bool ok = std::fabs(c1 - pi / std::sqrt(6.0)) < 1e-8 &&
                  std::fabs(c2 - pi / std::sqrt(12.0)) < 1e-8;
        // Closed form of the p = 1 curve: -(sqrt(6)/pi) log(1 - e^{-pi u / sqrt 6}).
        for (const double u : {0.5, 1.0, 2.0}) {
            const double closed = -(std::sqrt(6.0) / pi) * std::log(1.0 - std::exp(-pi * u / std::sqrt(6.0)));
            ok = ok && std::fabs(comparison_shape_value(ShapeKind::BoseEinstein, 1.0, u, c1) -
                                 closed) < 1e-8;
        }
        record("comparison_shapes", ok);
    }

    emit_summary(json{{"subcommand", "selftest"},
                      {"config", cfg.to_json()},
                      {"checks", checks},
                      {"pass", all_ok}});
    return all_ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gibbs partition sampling and verification toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env = std::getenv("GIBBS_PARTITIONS_OUT")) cfg.out_dir = env;

    // Shared options, attached to each subcommand so `sub --help` shows them.
    double u_min = 0.2, u_max = 4.0, u_step = 0.1, band = 0.1;
    double gamma = 0.25, w_lo = 0.1, w_hi = 10.0;
    std::vector<double> cuts{1.0};
    std::vector<double> coeffs{1.0, 2.0};

    std::map<const CLI::App*, double> tol_defaults;
    auto add_common = [&](CLI::App* sub, bool needs_n, double default_tol) {
        sub->add_option("--p", cfg.p, "Power-law exponent parameter (weights ~ C k^(p-1))")
            ->capture_default_str();
        sub->add_option("--C", cfg.C, "Power-law scale parameter")->capture_default_str();
        sub->add_option("--a-table", cfg.a_table,
                        "Explicit weight table file: one positive real per line, line k = a_k");
        auto* n_opt = sub->add_option("--N", cfg.N, "Total size to condition on");
        if (needs_n) n_opt->required();
        sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
        sub->add_option("--samples", cfg.samples, "Monte Carlo sample count")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        sub->add_option("--method", cfg.method, "Sampler: auto|recursive|boltzmann")
            ->capture_default_str()
            ->check(CLI::IsMember({"auto", "recursive", "boltzmann"}));
        sub->add_option("--threads", cfg.threads, "Worker threads for sampling")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out_dir,
                        "Output directory (default: GIBBS_PARTITIONS_OUT or current dir)");
        sub->add_option("--format", cfg.format, "Output format: csv|json")
            ->capture_default_str()
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--assert", cfg.assert_checks,
                      "Exit 1 when the subcommand's statistical checks fail");
        if (default_tol > 0.0) {
            cfg.tol = default_tol;
            tol_defaults[sub] = default_tol;
            sub->add_option("--tol", cfg.tol, "Tolerance for --assert checks")
                ->capture_default_str();
        }
    };

    auto* sample = app.add_subcommand("sample", "Draw exact samples and write them out");
    add_common(sample, true, 0.0);

    auto* pmf = app.add_subcommand("pmf", "Write the log normalizing-constant table");
    add_common(pmf, true, 0.0);

    auto* tilt = app.add_subcommand("tilt", "Solve the exponential tilt for the target size");
    add_common(tilt, true, 0.0);

    auto* limit_shape =
        app.add_subcommand("limit-shape", "Monte Carlo check of the scaled boundary curve");
    add_common(limit_shape, true, 0.05);
    limit_shape->add_option("--u-min", u_min, "Grid start")->capture_default_str();
    limit_shape->add_option("--u-max", u_max, "Grid end")->capture_default_str();
    limit_shape->add_option("--u-step", u_step, "Grid step")->capture_default_str();
    limit_shape->add_option("--band", band, "Per-sample sup-deviation band")->capture_default_str();

    auto* fluct =
        app.add_subcommand("fluctuations", "Covariance and normality of scaled stratum statistics");
    add_common(fluct, true, 0.15);
    fluct->add_option("--cuts", cuts, "Comma-separated stratum cut points u_1..u_q (units of r_N)")
        ->delimiter(',')
        ->capture_default_str();

    auto* small =
        app.add_subcommand("small-size", "Within-block correlation and cross-block independence");
    add_common(small, true, 0.1);
    small->add_option("--coeffs", coeffs, "Comma-separated boundary coefficients c_1..c_q")
        ->delimiter(',')
        ->capture_default_str();
    small->add_option("--gamma", gamma, "Boundary exponent: M_j = ceil(c_j N^gamma)")
        ->capture_default_str();

    auto* threshold =
        app.add_subcommand("threshold", "Largest-component scale and mass concentration");
    add_common(threshold, true, 0.0);
    threshold->add_option("--w-lo", w_lo, "Mass window lower edge (units of r_N)")
        ->capture_default_str();
    threshold->add_option("--w-hi", w_hi, "Mass window upper edge (units of r_N)")
        ->capture_default_str();

    auto* compare = app.add_subcommand(
        "compare-shapes", "Limiting curve vs Bose-Einstein and Fermi-Dirac comparison shapes");
    add_common(compare, false, 0.0);
    compare->add_option("--u-min", u_min, "Grid start")->capture_default_str();
    compare->add_option("--u-max", u_max, "Grid end")->capture_default_str();
    compare->add_option("--u-step", u_step, "Grid step")->capture_default_str();

    auto* enumerate = app.add_subcommand("enumerate", "Exact law by full enumeration (N <= 40)");
    add_common(enumerate, true, 0.0);

    auto* selftest = app.add_subcommand("selftest", "Quick deterministic sanity checks");
    add_common(selftest, false, 0.0);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump()
                  << std::endl;
        return kExitUsage;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        cfg.subcommand = sub->get_name();
        if (const auto it = tol_defaults.find(sub);
            it != tol_defaults.end() && sub->count("--tol") == 0)
            cfg.tol = it->second;
        if (sub == sample) return cmd_sample(cfg);
        if (sub == pmf) return cmd_pmf(cfg);
        if (sub == tilt) return cmd_tilt(cfg);
        if (sub == limit_shape) return cmd_limit_shape(cfg, u_min, u_max, u_step, band);
        if (sub == fluct) return cmd_fluctuations(cfg, cuts);
        if (sub == small) return cmd_small_size(cfg, coeffs, gamma);
        if (sub == threshold) return cmd_threshold(cfg, w_lo, w_hi);
        if (sub == compare) {
            // Denser default grid starting near the origin for curve output.
            if (compare->count("--u-min") == 0) u_min = 0.05;
            if (compare->count("--u-max") == 0) u_max = 5.0;
            if (compare->count("--u-step") == 0) u_step = 0.05;
            return cmd_compare_shapes(cfg, u_min, u_max, u_step);
        }
        if (sub == enumerate) return cmd_enumerate(cfg);
        if (sub == selftest) return cmd_selftest(cfg);
        std::cerr << json{{"error", {{"type", "usage"}, {"message", "unknown subcommand"}}}}.dump()
                  << std::endl;
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump()
                  << std::endl;
        return kExitUsage;
    } catch (const NumericError& e) {
        std::cerr << json{{"error", {{"type", "numeric"}, {"message", e.what()}}}}.dump()
                  << std::endl;
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump()
                  << std::endl;
        return kExitNumeric;
    }
}
