#include "shannon_markov/prob.hpp"

#include <cmath>
#include <cstdio>
#include <regex>
#include <stdexcept>

#include "shannon_markov/errors.hpp"

namespace shannon_markov {

namespace {

// Strips factors of two from n, returning how many were removed.
int strip_twos(std::int64_t& n) {
    int k = 0;
    while (n != 0 && n % 2 == 0) {
        n /= 2;
        ++k;
    }
    return k;
}

}  // namespace

ExactProb::ExactProb(Rational mantissa, Rational exp2) {
    if (mantissa.sign() <= 0) throw std::domain_error("mantissa must be positive");
    std::int64_t num = mantissa.num();
    std::int64_t den = mantissa.den();
    int up = strip_twos(num);
    int down = strip_twos(den);
    mantissa_ = Rational(num, den);
    exp2_ = exp2 + Rational(up - down);
    if (mantissa_ == Rational(1)) {
        if (exp2_ > Rational(0)) throw std::domain_error("probability exceeds 1: " + str());
    } else if (to_long_double() > 1.0L) {
        // an odd/odd mantissa != 1 never hits exactly 1, so the float compare is safe
        throw std::domain_error("probability exceeds 1: " + str());
    }
}

Rational ExactProb::rational_value() const {
    if (!exp2_.is_integer()) throw std::domain_error("irrational probability " + str());
    std::int64_t e = exp2_.num();
    if (e > 62 || e < -62) throw std::overflow_error("exponent too large for a rational value");
    Rational scale = e >= 0 ? Rational(std::int64_t{1} << e) : Rational(1, std::int64_t{1} << -e);
    return mantissa_ * scale;
}

long double ExactProb::to_long_double() const {
    return mantissa_.to_long_double() * std::exp2(exp2_.to_long_double());
}

std::string ExactProb::str() const {
    if (exp2_.is_zero()) return mantissa_.str();
    std::string e = "2^(" + exp2_.str() + ")";
    if (mantissa_ == Rational(1)) return e;
    return mantissa_.str() + " * " + e;
}

ProbValue ProbValue::real(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("probability out of [0,1]");
    ProbValue v;
    if (p > 0.0) v.value_ = p;
    return v;
}

ProbValue::Kind ProbValue::kind() const {
    switch (value_.index()) {
        case 0: return Kind::Zero;
        case 1: return Kind::Exact;
        default: return Kind::Float;
    }
}

long double ProbValue::to_long_double() const {
    switch (kind()) {
        case Kind::Zero: return 0.0L;
        case Kind::Exact: return exact().to_long_double();
        case Kind::Float: return real_value();
    }
    return 0.0L;
}

std::string ProbValue::str() const {
    switch (kind()) {
        case Kind::Zero: return "0";
        case Kind::Exact: return exact().str();
        case Kind::Float: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", real_value());
            return buf;
        }
    }
    return {};
}

ProbValue parse_probspec(std::string_view text) {
    static const std::regex re(
        R"(^\s*([+-]?\d+(?:\s*/\s*[+-]?\d+)?)?\s*(\*)?\s*(?:2\s*\^\s*(?:\(\s*([^)]*)\)|([+-]?\d+)))?\s*$)");
    std::string s(text);
    std::smatch m;
    if (!std::regex_match(s, m, re) || (!m[1].matched && !m[3].matched && !m[4].matched))
        throw ParseError("malformed probability spec '" + s + "'");
    if (m[2].matched && (!m[1].matched || (!m[3].matched && !m[4].matched)))
        throw ParseError("dangling '*' in probability spec '" + s + "'");
    try {
        Rational mantissa = m[1].matched ? Rational::parse(m[1].str()) : Rational(1);
        Rational exp2 = m[3].matched ? Rational::parse(m[3].str())
                        : m[4].matched ? Rational::parse(m[4].str())
                                       : Rational(0);
        if (mantissa.is_zero()) {
            if (m[3].matched || m[4].matched) throw ParseError("zero mantissa with exponent in '" + s + "'");
            return ProbValue::zero();
        }
        return ExactProb(mantissa, exp2);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError("invalid probability spec '" + s + "': " + e.what());
    }
}

long double ExactLog::value() const {
    return exp2.to_long_double() + std::log2(mantissa.to_long_double());
}

LogValue log2_prob(const ProbValue& v) {
    switch (v.kind()) {
        case ProbValue::Kind::Zero: throw ZeroProbability("log2 of zero probability");
        case ProbValue::Kind::Exact: return ExactLog{v.exact().exp2(), v.exact().mantissa()};
        case ProbValue::Kind::Float: return static_cast<double>(std::log2(static_cast<long double>(v.real_value())));
    }
    throw ZeroProbability("unreachable");
}

bool LogCoord::is_rational() const {
    for (auto c : coeffs)
        if (c != 0) return false;
    return true;
}

long double LogCoord::value(const std::vector<long double>& basis_logs) const {
    long double v = rational.to_long_double();
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0) v += static_cast<long double>(coeffs[i]) * basis_logs.at(i);
    return v;
}

LogCoord& LogCoord::operator+=(const LogCoord& o) {
    rational += o.rational;
    if (coeffs.size() < o.coeffs.size()) coeffs.resize(o.coeffs.size(), 0);
    for (std::size_t i = 0; i < o.coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
}

LogCoord& LogCoord::operator-=(const LogCoord& o) {
    rational -= o.rational;
    if (coeffs.size() < o.coeffs.size()) coeffs.resize(o.coeffs.size(), 0);
    for (std::size_t i = 0; i < o.coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
}

LogCoord& LogCoord::operator*=(std::int64_t k) {
    rational *= Rational(k);
    for (auto& c : coeffs) c *= k;
    return *this;
}

LogCoord log_coord(const ExactProb& p, const CoprimeBasis& basis) {
    LogCoord out;
    out.rational = p.exp2();
    auto up = basis.exponents(static_cast<std::uint64_t>(p.mantissa().num()));
    auto down = basis.exponents(static_cast<std::uint64_t>(p.mantissa().den()));
    out.coeffs.resize(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) out.coeffs[i] = up[i] - down[i];
    return out;
}

long double frac(long double u) {
    long double f = u - std::floor(u);
    return f >= 1.0L ? 0.0L : f;
}

}  // namespace shannon_markov
