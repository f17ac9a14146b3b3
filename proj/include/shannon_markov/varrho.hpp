#pragma once

#include <optional>

#include "shannon_markov/rational.hpp"

namespace shannon_markov {

/// A real number known approximately, and exactly when it happens to be rational.
struct LogReal {
    long double approx = 0.0L;
    std::optional<Rational> exact;
};

struct RhoResult {
    double value = 0.0;
    bool snapped = false;
};

/// Snap window for float-derived arguments of the ceiling defect.
inline constexpr double kSnapTolerance = 1e-9;

/// Ceiling defect rho(u) = ceil(u) - u, in [0, 1), rho(integer) = 0.
double varrho(double u);
long double varrho(long double u);
Rational varrho(const Rational& u);

/**
 * Ceiling defect of a LogReal: exact when the value is rational; otherwise a
 * value within `snap_tol` of an integer is treated as that integer (result 0,
 * snapped = true).
 */
RhoResult varrho(const LogReal& u, double snap_tol);

}  // namespace shannon_markov
