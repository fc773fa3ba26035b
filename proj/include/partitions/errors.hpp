#pragma once

#include <stdexcept>
#include <string>

namespace partitions {

// Numeric failures: quadrature non-convergence, degenerate denominators.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Root finder exhausted its iteration cap; carries the best bracket found.
class SolverError : public NumericError {
public:
    SolverError(const std::string& what, double lo, double hi)
        : NumericError(what), bracket_lo(lo), bracket_hi(hi) {}
    double bracket_lo;
    double bracket_hi;
};

// Rejection sampler exceeded its cap; carries the empirical acceptance rate.
class SamplerError : public NumericError {
public:
    SamplerError(const std::string& what, double acceptance)
        : NumericError(what), acceptance_rate(acceptance) {}
    double acceptance_rate;
};

}  // namespace partitions
