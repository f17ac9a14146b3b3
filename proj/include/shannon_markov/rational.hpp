#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace shannon_markov {

/**
 * Exact rational number on 64-bit integers, always kept in lowest terms with a
 * positive denominator. Intermediate products are formed in 128 bits; any
 * result that does not fit back into 64 bits throws std::overflow_error.
 */
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit from integers is intended
    Rational(std::int64_t num, std::int64_t den);

    /// Parses "a", "-a", "a/b" (whitespace tolerant). Throws std::invalid_argument.
    static Rational parse(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    int sign() const { return (num_ > 0) - (num_ < 0); }

    std::int64_t floor() const;
    std::int64_t ceil() const;
    /// Fractional part <x> = x - floor(x), in [0, 1).
    Rational frac() const;

    double to_double() const;
    long double to_long_double() const;
    std::string str() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& other);
    Rational& operator-=(const Rational& other);
    Rational& operator*=(const Rational& other);
    Rational& operator/=(const Rational& other);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    static Rational from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

/// Least common multiple with overflow detection.
std::int64_t checked_lcm(std::int64_t a, std::int64_t b);

/**
 * Continued-fraction rationality heuristic for a floating value: returns the
 * first convergent p/q with q <= max_den and |x - p/q| <= tol, or nullopt.
 */
std::optional<Rational> approximate_rational(double x, std::int64_t max_den = 1'000'000,
                                             double tol = 1e-9);

/**
 * Pairwise-coprime factor base for a finite set of positive integers.
 *
 * Every inserted integer is a product of powers of base elements, and because
 * the elements are pairwise coprime their base-2 logarithms are linearly
 * independent over the rationals. That makes "is this integer combination of
 * logs rational?" an exact question: it is iff every base coefficient is zero.
 */
class CoprimeBasis {
public:
    CoprimeBasis() = default;
    explicit CoprimeBasis(const std::vector<std::uint64_t>& values);

    void insert(std::uint64_t value);

    /// Exponent vector of `value` over the base. Throws std::domain_error if
    /// the value does not factor completely (it was never inserted).
    std::vector<std::int64_t> exponents(std::uint64_t value) const;

    const std::vector<std::uint64_t>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }

private:
    void refine();

    std::vector<std::uint64_t> elements_;
};

}  // namespace shannon_markov
