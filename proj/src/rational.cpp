#include "shannon_markov/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace shannon_markov {

namespace {

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
constexpr __int128 kMin = std::numeric_limits<std::int64_t>::min();

__int128 wide_gcd(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::int64_t parse_int(std::string_view s) {
    s = trim(s);
    if (s.empty()) throw std::invalid_argument("empty integer");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("bad integer '" + std::string(s) + "'");
    __int128 v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("bad integer '" + std::string(s) + "'");
        v = v * 10 + (s[i] - '0');
        if (v > kMax + 1) throw std::overflow_error("integer out of range");
    }
    if (neg) v = -v;
    if (v > kMax || v < kMin) throw std::overflow_error("integer out of range");
    return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = wide_gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num > kMax || num < kMin || den > kMax)
        throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
}

Rational Rational::parse(std::string_view text) {
    text = trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::int64_t Rational::floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::int64_t Rational::ceil() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
}

Rational Rational::frac() const {
    return *this - Rational(floor());
}

double Rational::to_double() const {
    return static_cast<double>(to_long_double());
}

long double Rational::to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
    return from_wide(-static_cast<__int128>(num_), den_);
}

Rational& Rational::operator+=(const Rational& o) {
    *this = from_wide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                      static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    *this = from_wide(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
                      static_cast<__int128>(den_) * o.den_);
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    // cross-reduce first so exact products of moderately sized operands stay in range
    __int128 g1 = wide_gcd(num_, o.den_);
    __int128 g2 = wide_gcd(o.num_, den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    *this = from_wide((num_ / g1) * (o.num_ / g2), (den_ / g2) * (o.den_ / g1));
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    return *this *= from_wide(o.den_, o.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& q) {
    return os << q.str();
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    __int128 l = static_cast<__int128>(std::abs(a)) / std::gcd(a, b) * std::abs(b);
    if (l > kMax) throw std::overflow_error("lcm overflow");
    return static_cast<std::int64_t>(l);
}

std::optional<Rational> approximate_rational(double x, std::int64_t max_den, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    // convergents h/k of the continued fraction of x
    long double rest = x;
    __int128 h_prev = 1, h = static_cast<__int128>(std::floor(rest));
    __int128 k_prev = 0, k = 1;
    for (int iter = 0; iter < 64; ++iter) {
        if (k > max_den) return std::nullopt;
        long double approx = static_cast<long double>(h) / static_cast<long double>(k);
        if (std::fabs(static_cast<long double>(x) - approx) <= tol) {
            if (h > kMax || h < kMin) return std::nullopt;
            return Rational(static_cast<std::int64_t>(h), static_cast<std::int64_t>(k));
        }
        long double f = rest - std::floor(rest);
        if (f == 0) return std::nullopt;
        rest = 1.0L / f;
        auto a = static_cast<__int128>(std::floor(rest));
        __int128 h_next = a * h + h_prev;
        __int128 k_next = a * k + k_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
    return std::nullopt;
}

CoprimeBasis::CoprimeBasis(const std::vector<std::uint64_t>& values) {
    for (auto v : values) insert(v);
}

void CoprimeBasis::insert(std::uint64_t value) {
    if (value <= 1) return;
    elements_.push_back(value);
    refine();
}

void CoprimeBasis::refine() {
    // Split any pair sharing a factor g into {g, a/g, b/g} until pairwise coprime.
    bool changed = true;
    while (changed) {
        changed = false;
        std::sort(elements_.begin(), elements_.end());
        elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
        for (std::size_t i = 0; i < elements_.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < elements_.size() && !changed; ++j) {
                std::uint64_t g = std::gcd(elements_[i], elements_[j]);
                if (g == 1) continue;
                std::uint64_t a = elements_[i] / g;
                std::uint64_t b = elements_[j] / g;
                elements_.erase(elements_.begin() + static_cast<std::ptrdiff_t>(j));
                elements_.erase(elements_.begin() + static_cast<std::ptrdiff_t>(i));
                for (auto v : {g, a, b})
                    if (v > 1) elements_.push_back(v);
                changed = true;
            }
        }
    }
    std::sort(elements_.begin(), elements_.end());
}

std::vector<std::int64_t> CoprimeBasis::exponents(std::uint64_t value) const {
    if (value == 0) throw std::domain_error("cannot factor zero");
    std::vector<std::int64_t> e(elements_.size(), 0);
    for (std::size_t i = 0; i < elements_.size() && value > 1; ++i) {
        while (value % elements_[i] == 0) {
            value /= elements_[i];
            ++e[i];
        }
    }
    if (value != 1) throw std::domain_error("value does not factor over the coprime basis");
    return e;
}

}  // namespace shannon_markov
