#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shannon_markov/rational.hpp"

namespace shannon_markov {

class CoprimeBasis;

/**
 * A probability written as mantissa * 2^exp2 with a rational mantissa and a
 * rational power-of-two exponent.
 *
 * Canonical form folds every factor of two out of the mantissa, so the
 * mantissa's numerator and denominator are both odd. log2 of a canonical
 * mantissa is rational iff the mantissa is 1, which makes rationality of
 * base-2 logarithms decidable.
 */
class ExactProb {
public:
    /// Canonicalizes; throws std::domain_error unless the value lies in (0, 1].
    ExactProb(Rational mantissa, Rational exp2 = Rational(0));

    const Rational& mantissa() const { return mantissa_; }
    const Rational& exp2() const { return exp2_; }

    /// True when the value is a rational number (integer power of two exponent).
    bool is_rational_value() const { return exp2_.is_integer(); }
    /// The exact value when is_rational_value(); throws std::domain_error otherwise.
    Rational rational_value() const;
    bool is_dyadic() const { return mantissa_ == Rational(1) && exp2_.is_integer(); }

    long double to_long_double() const;
    double to_double() const { return static_cast<double>(to_long_double()); }
    std::string str() const;

    friend bool operator==(const ExactProb&, const ExactProb&) = default;

private:
    Rational mantissa_;
    Rational exp2_;
};

/// Either zero, an exact probability, or a floating probability in (0, 1].
class ProbValue {
public:
    enum class Kind { Zero, Exact, Float };

    ProbValue() = default;  // zero
    ProbValue(ExactProb p) : value_(p) {}  // NOLINT
    static ProbValue zero() { return {}; }
    /// 0.0 maps to Zero; anything outside [0, 1] throws std::domain_error.
    static ProbValue real(double p);

    Kind kind() const;
    bool is_zero() const { return kind() == Kind::Zero; }
    bool is_exact() const { return kind() == Kind::Exact; }
    bool is_float() const { return kind() == Kind::Float; }

    const ExactProb& exact() const { return std::get<ExactProb>(value_); }
    double real_value() const { return std::get<double>(value_); }

    long double to_long_double() const;
    double to_double() const { return static_cast<double>(to_long_double()); }
    std::string str() const;

    friend bool operator==(const ProbValue&, const ProbValue&) = default;

private:
    std::variant<std::monostate, ExactProb, double> value_;
};

/**
 * Parses a probability spec: "m/n * 2^(a/b)" with every fragment optional
 * ("1/3", "2^(-1/2)", "3 * 2^(-2)", "2^-3", "0", "1"). Throws ParseError.
 */
ProbValue parse_probspec(std::string_view text);

/// log2 of an exact probability split as exp2 + log2(mantissa).
struct ExactLog {
    Rational exp2;
    Rational mantissa;

    bool is_rational() const { return mantissa == Rational(1); }
    long double value() const;
};

using LogValue = std::variant<ExactLog, double>;

/// Base-2 logarithm; throws ZeroProbability for zero.
LogValue log2_prob(const ProbValue& v);

/**
 * Exact base-2 logarithm of a product of exact probabilities:
 *   rational + sum_i coeffs[i] * log2(basis[i])
 * over a pairwise-coprime basis. The value is rational iff all coeffs vanish.
 */
struct LogCoord {
    Rational rational;
    std::vector<std::int64_t> coeffs;

    bool is_rational() const;
    long double value(const std::vector<long double>& basis_logs) const;

    LogCoord& operator+=(const LogCoord& o);
    LogCoord& operator-=(const LogCoord& o);
    LogCoord& operator*=(std::int64_t k);
    friend LogCoord operator+(LogCoord a, const LogCoord& b) { return a += b; }
    friend LogCoord operator-(LogCoord a, const LogCoord& b) { return a -= b; }
    friend LogCoord operator*(LogCoord a, std::int64_t k) { return a *= k; }
    friend bool operator==(const LogCoord&, const LogCoord&) = default;
};

/// Coordinates of log2(p) over `basis` (which must contain p's mantissa parts).
LogCoord log_coord(const ExactProb& p, const CoprimeBasis& basis);

/// Fractional part of a real number, <u> = u - floor(u), in [0, 1).
long double frac(long double u);

}  // namespace shannon_markov
