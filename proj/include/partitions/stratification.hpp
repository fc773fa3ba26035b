#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "partitions/model_params.hpp"
#include "partitions/partition.hpp"
#include "partitions/theory.hpp"

namespace partitions {

enum class Regime {
    Threshold,  // cuts at M_j = floor(u_j * r_N): sizes comparable to the scale
    SmallSize,  // cuts at M_j = ceil(c_j * N^gamma), gamma < 1/(p+1): sizes below the scale
};

// Size strata [M_j, M_{j+1}) for j = 0..q, with M_0 = 0 and M_{q+1} = N+1.
class StratificationPlan {
public:
    // Threshold regime from grid abscissas; enforces M_1 >= 1 and strict
    // increase (fails for cuts too close together at this N).
    static StratificationPlan threshold(const ModelParams& params, std::int64_t N,
                                        const StrataGrid& grid);

    // Small-size regime with M_j = ceil(c_j * N^gamma); requires power-law
    // params, 0 < gamma < 1/(p+1), and strictly increasing positive coeffs.
    // The limiting ratios are rho_0 = 0 and rho_j = c_j / c_{j+1}.
    static StratificationPlan small_size(const ModelParams& params, std::int64_t N,
                                         const std::vector<double>& coeffs, double gamma);

    // Direct cut points M_1 < ... < M_q (all >= 1, <= N), small-size ratios
    // taken as the finite-N values M_j / M_{j+1}.
    static StratificationPlan explicit_cuts(std::int64_t N, const std::vector<std::int64_t>& cuts,
                                            Regime regime);

    Regime regime() const { return regime_; }
    std::int64_t N() const { return N_; }
    int q() const { return q_; }

    // Boundaries M_0 = 0, M_1, ..., M_q, M_{q+1} = N+1 (size q+2).
    const std::vector<std::int64_t>& M() const { return M_; }
    std::int64_t M(int j) const { return M_[(std::size_t)j]; }

    // SmallSize: limiting ratios rho_0..rho_{q-1} for the alpha coefficients.
    const std::vector<double>& rho() const { return rho_; }

    // Threshold: the grid the plan was built from.
    const StrataGrid& grid() const;

private:
    StratificationPlan() = default;

    Regime regime_ = Regime::Threshold;
    std::int64_t N_ = 0;
    int q_ = 0;
    std::vector<std::int64_t> M_;
    std::vector<double> rho_;
    std::optional<StrataGrid> grid_;
};

// Exact weighted size sums over the strata at tilt delta: per stratum
//   S*_j = Σ a_k e^{-δk},  E*_j = Σ k a_k e^{-δk},  V*_j = Σ k² a_k e^{-δk}
// (k ranging over [M_j, M_{j+1}) intersected with the defined sizes), and the
// cumulative versions S_j, E_j, V_j (head sum for j = 0, tail sums from M_j
// for j >= 1), built as exact suffix sums of the starred values.
struct MomentTables {
    double delta = 0.0;
    std::vector<double> S_star, E_star, V_star;  // j = 0..q
    std::vector<double> S, E, V;                 // j = 0..q
};

MomentTables compute_moment_tables(const ModelParams& params, const StratificationPlan& plan,
                                   double delta);

// Centered/normalized per-stratum and cumulative statistics of one partition.
//
// Threshold regime: shared normalizers with the grid-dependent front factors,
//   nu*_j -> sqrt(f_0(p-1)) (nu*_j - S*_j)/sqrt(S_0),
//   K*_j  -> sqrt(f_0(p+1)) (K*_j - E*_j)/sqrt(V_0),    j = 0..q,
// plus the cumulative analogues (tail counts/masses from M_j).
//
// SmallSize regime: per-stratum normalizers,
//   nu*_j -> (nu*_j - S*_j)/sqrt(S*_j),  j = 0..q,
//   K*_j  -> (K*_j - E*_j)/sqrt(V*_j),   j = 0..q-1.
struct ScaledStats {
    Regime regime = Regime::Threshold;
    std::vector<double> nu_star_hat;  // j = 0..q
    std::vector<double> K_star_hat;   // Threshold: j = 0..q; SmallSize: j = 0..q-1
    std::vector<double> nu_hat;       // Threshold only: j = 0..q
    std::vector<double> K_hat;        // Threshold only: j = 1..q
};

ScaledStats scale_stats(const Partition& eta, const StratificationPlan& plan,
                        const MomentTables& tables, const ModelParams& params);

}  // namespace partitions
