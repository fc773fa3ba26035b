#pragma once

#include <cstdint>

#include "partitions/model_params.hpp"

namespace partitions {

// Solution of Σ_{k=1}^N k·a_k·e^{-δk} = N in δ. The left side is strictly
// decreasing and spans (0, ∞), so the root exists and is unique for N >= 1;
// it may be <= 0 for very small N.
struct TiltSolution {
    double delta = 0.0;
    double residual = 0.0;  // |Σ k a_k e^{-δk} - N| at the returned δ
    std::int64_t N = 0;
    int iterations = 0;
};

// Limit-shape scaling constants h = (C·Γ(p+1))^{1/(p+1)}, r_N = h^{-1}·N^{1/(p+1)}.
struct ScalingInfo {
    double h = 0.0;
    double r_N = 0.0;
    double p = 0.0;
    double C = 0.0;
};

// Σ_{k=1}^N k^moment·a_k·e^{-δk} with Kahan accumulation. For δ > 0 the scan
// stops once past-peak terms stay below 1e-18·N (their total is far inside
// the residual contract); for δ <= 0 the full range is summed and +inf is
// returned on overflow.
double tilted_sum(const ModelParams& params, std::int64_t N, double delta, int moment);

// Bracketed bisection seeded by the asymptotic guess δ_0 = h·N^{-1/(p+1)}
// (geometric expansion until the root is bracketed), then safeguarded Newton.
// Residual contract: |Σ - N| <= 1e-9·N. Throws SolverError (with the best
// bracket) if the iteration cap is reached first.
TiltSolution solve_tilt(const ModelParams& params, std::int64_t N);

// Throws std::invalid_argument for explicit-table parameters.
ScalingInfo scaling_info(const ModelParams& params, std::int64_t N);

}  // namespace partitions
