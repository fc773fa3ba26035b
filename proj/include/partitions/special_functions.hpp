#pragma once

#include <cstdint>

namespace partitions {

// log Γ(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
// Relative error below 1e-13 on (0, 1e6]; self-contained so that results
// do not depend on the platform's libm lgamma.
double log_gamma(double x);

// Γ(x) for x > 0.
double gamma_fn(double x);

// log(n!) for n >= 0.
double log_factorial(std::int64_t n);

// Regularized incomplete gamma functions, s > 0, u >= 0:
//   P(s,u) = γ(s,u)/Γ(s) (lower),  Q(s,u) = Γ(s,u)/Γ(s) (upper), P + Q = 1.
// Series expansion for u < s + 1, Lentz continued fraction otherwise.
// Relative accuracy ~1e-14, far inside the 1e-10 contract.
double reg_gamma_P(double s, double u);
double reg_gamma_Q(double s, double u);

// Upper incomplete gamma Γ(s,u) = ∫_u^∞ x^{s-1} e^{-x} dx; Γ(s,0) = Γ(s).
// Throws std::invalid_argument for s <= 0 or u < 0.
double upper_incomplete_gamma(double s, double u);

// Standard normal CDF.
double normal_cdf(double x);

// Adaptive Simpson quadrature of f over the finite interval [a, b] to
// absolute tolerance tol. Throws NumericError when the recursion depth cap
// is hit before the tolerance is met.
double adaptive_simpson(double (*f)(double, const void*), const void* ctx,
                        double a, double b, double tol);

template <typename F>
double integrate(F&& f, double a, double b, double tol) {
    struct Ctx { const F* f; };
    Ctx c{&f};
    auto thunk = [](double x, const void* p) -> double {
        return (*static_cast<const Ctx*>(p)->f)(x);
    };
    return adaptive_simpson(thunk, &c, a, b, tol);
}

// Smallest eigenvalue of a dense symmetric matrix (row-major, n x n),
// by cyclic Jacobi sweeps. Intended for the small covariance matrices
// produced by the theory layer.
double symmetric_min_eigenvalue(const double* m, int n);

}  // namespace partitions
