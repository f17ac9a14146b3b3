#include "shannon_markov/fejer.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "shannon_markov/errors.hpp"

namespace shannon_markov {

namespace {

constexpr double kPi = std::numbers::pi;

void check_theta(double theta) {
    if (!(theta > 0.0 && theta < 0.5)) throw ValidationError("theta must lie in (0, 1/2)");
}

void check_order(std::int64_t N) {
    if (N < 1) throw ValidationError("Fejer order N must be at least 1");
}

double frac_part(double u) {
    double f = u - std::floor(u);
    return f >= 1.0 ? 0.0 : f;
}

double bound_objective(double d, double theta, double N) {
    double s = std::sin(kPi * d);
    return d / theta + 1.0 / (N * s * s);
}

}  // namespace

double rho_minus(double u, double theta) {
    check_theta(theta);
    double f = frac_part(u);
    return f < theta ? (1.0 - theta) / theta * f : 1.0 - f;
}

double delta(double u, double theta) {
    check_theta(theta);
    double f = frac_part(u);
    if (f < theta) return 1.0 - f / theta;
    if (f < 1.0 - theta) return 0.0;
    return (f + theta - 1.0) / theta;
}

double rho_plus(double u, double theta) {
    return rho_minus(u, theta) + delta(u, theta);
}

SandwichFn parse_sandwich_fn(const std::string& name) {
    if (name == "rho_minus") return SandwichFn::RhoMinus;
    if (name == "delta") return SandwichFn::Delta;
    if (name == "rho_plus") return SandwichFn::RhoPlus;
    throw ParseError("unknown function '" + name + "' (expected rho_minus, delta or rho_plus)");
}

std::string to_string(SandwichFn f) {
    switch (f) {
        case SandwichFn::RhoMinus: return "rho_minus";
        case SandwichFn::Delta: return "delta";
        case SandwichFn::RhoPlus: return "rho_plus";
    }
    return "unknown";
}

double evaluate(SandwichFn f, double u, double theta) {
    switch (f) {
        case SandwichFn::RhoMinus: return rho_minus(u, theta);
        case SandwichFn::Delta: return delta(u, theta);
        case SandwichFn::RhoPlus: return rho_plus(u, theta);
    }
    return 0.0;
}

std::complex<double> fourier_a(std::int64_t m, double theta) {
    check_theta(theta);
    if (m == 0) throw ZeroIndex("a_0 is the mean (1 - theta)/2, not given by the coefficient formula");
    const double x = 2.0 * kPi * static_cast<double>(m);
    const std::complex<double> numer = 1.0 - std::polar(1.0, -x * theta);
    // (2 pi i m)^2 = -(2 pi m)^2
    return numer / (-(x * x) * theta);
}

double fourier_b(std::int64_t m, double theta) {
    check_theta(theta);
    if (m == 0) throw ZeroIndex("b_0 is the mean theta, not given by the coefficient formula");
    const double md = static_cast<double>(m);
    return (1.0 - std::cos(2.0 * kPi * md * theta)) / (2.0 * theta * kPi * kPi * md * md);
}

double fourier_dc(SandwichFn f, double theta) {
    check_theta(theta);
    switch (f) {
        case SandwichFn::RhoMinus: return 0.5 * (1.0 - theta);
        case SandwichFn::Delta: return theta;
        case SandwichFn::RhoPlus: return 0.5 * (1.0 - theta) + theta;
    }
    return 0.0;
}

double fejer_sum(SandwichFn f, double u, double theta, int N) {
    check_theta(theta);
    check_order(N);
    double sum = fourier_dc(f, theta);
    for (int m = 1; m <= N; ++m) {
        std::complex<double> c = 0.0;
        if (f != SandwichFn::Delta) c += fourier_a(m, theta);
        if (f != SandwichFn::RhoMinus) c += fourier_b(m, theta);
        const double window = 1.0 - static_cast<double>(m) / (N + 1);
        // c_{-m} = conj(c_m) for a real function, so the +-m pair is 2 Re(...)
        sum += 2.0 * window * (c * std::polar(1.0, 2.0 * kPi * m * u)).real();
    }
    return sum;
}

double fejer_kernel(double u, int N) {
    check_order(N);
    const double s = std::sin(kPi * u);
    if (std::fabs(u - std::nearbyint(u)) < 1e-12) return N + 1.0;
    const double t = std::sin((N + 1.0) * kPi * u);
    return t * t / ((N + 1.0) * s * s);
}

double error_bound(int N, double theta) {
    check_theta(theta);
    check_order(N);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 1e-9;
    double b = 0.5 - 1e-9;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = bound_objective(c, theta, N);
    double fd = bound_objective(d, theta, N);
    while (b - a > 1e-12 * std::max(1.0, std::fabs(c))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = bound_objective(c, theta, N);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = bound_objective(d, theta, N);
        }
    }
    return std::min(fc, fd);
}

std::int64_t n0(double epsilon, double theta) {
    check_theta(theta);
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    constexpr std::int64_t kMaxOrder = std::numeric_limits<int>::max();
    std::int64_t hi = 1;
    while (error_bound(static_cast<int>(hi), theta) > epsilon) {
        if (hi > kMaxOrder / 2) throw ResourceLimit("no Fejer order up to 2^31 reaches the requested epsilon");
        hi *= 2;
    }
    if (hi == 1) return 1;
    std::int64_t lo = hi / 2;  // error_bound(lo) > epsilon
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (error_bound(static_cast<int>(mid), theta) <= epsilon)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace shannon_markov
