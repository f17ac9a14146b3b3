#pragma once

#include <complex>
#include <cstdint>
#include <string>

namespace shannon_markov {

// Continuous periodic bounds around the ceiling defect rho(u) and their
// Fejer (Cesaro-windowed Fourier) approximations. All functions require
// 0 < theta < 1/2 and throw ValidationError otherwise.

/// (1-theta)/theta <u> on [0, theta), 1 - <u> on [theta, 1).
double rho_minus(double u, double theta);
/// Triangle of height 1 and half-width theta centred on the integers.
double delta(double u, double theta);
double rho_plus(double u, double theta);

enum class SandwichFn { RhoMinus, Delta, RhoPlus };
SandwichFn parse_sandwich_fn(const std::string& name);
std::string to_string(SandwichFn f);
double evaluate(SandwichFn f, double u, double theta);

/// m-th Fourier coefficient of rho_minus; throws ZeroIndex for m = 0.
std::complex<double> fourier_a(std::int64_t m, double theta);
/// m-th Fourier coefficient of delta; throws ZeroIndex for m = 0.
double fourier_b(std::int64_t m, double theta);
/// Mean over one period: (1 - theta)/2, theta, and their sum.
double fourier_dc(SandwichFn f, double theta);

/// Fejer sum of order N: mean + sum_{0<|m|<=N} c_m (1 - |m|/(N+1)) e^{2 pi i m u}.
double fejer_sum(SandwichFn f, double u, double theta, int N);

/// K_N(u) = sin^2((N+1) pi u) / ((N+1) sin^2(pi u)), with K_N(integer) = N + 1.
double fejer_kernel(double u, int N);

/// inf over 0 < delta < 1/2 of delta/theta + 1/(N sin^2(pi delta)), by golden-section search.
double error_bound(int N, double theta);

/// Smallest N with error_bound(N, theta) <= epsilon.
std::int64_t n0(double epsilon, double theta);

}  // namespace shannon_markov
