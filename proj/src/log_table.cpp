#include "shannon_markov/log_table.hpp"

#include <cmath>
#include <limits>

namespace shannon_markov {

double varrho(double u) {
    return std::ceil(u) - u;
}

long double varrho(long double u) {
    return std::ceil(u) - u;
}

Rational varrho(const Rational& u) {
    return Rational(u.ceil()) - u;
}

RhoResult varrho(const LogReal& u, double snap_tol) {
    if (u.exact) return {varrho(*u.exact).to_double(), false};
    long double nearest = std::nearbyint(u.approx);
    if (snap_tol > 0.0 && std::fabs(u.approx - nearest) <= snap_tol) return {0.0, true};
    return {static_cast<double>(varrho(u.approx)), false};
}

LogTable::LogTable(const MarkovSource& source) : r_(source.size()), exact_(source.exact()) {
    class_of_.assign(static_cast<std::size_t>(r_ * r_), -1);
    std::vector<ProbValue> class_values;
    for (State from = 0; from < r_; ++from) {
        for (State to = 0; to < r_; ++to) {
            const auto& p = source.transition(from, to);
            if (p.is_zero()) continue;
            int c = -1;
            for (std::size_t i = 0; i < class_values.size(); ++i)
                if (class_values[i] == p) c = static_cast<int>(i);
            if (c < 0) {
                c = static_cast<int>(class_values.size());
                class_values.push_back(p);
            }
            class_of_[static_cast<std::size_t>(from * r_ + to)] = c;
        }
    }

    for (const auto& p : class_values) {
        class_log_.push_back(std::log2(p.to_long_double()));
        class_neg_log_.push_back(-class_log_.back());
    }
    for (State k = 0; k < r_; ++k) {
        const auto& p = source.initial(k);
        initial_positive_.push_back(!p.is_zero());
        long double lg = p.is_zero() ? -std::numeric_limits<long double>::infinity()
                                     : std::log2(p.to_long_double());
        initial_log_.push_back(lg);
        initial_neg_log_.push_back(-lg);
    }
    if (!exact_) return;

    for (const auto& p : class_values) {
        basis_.insert(static_cast<std::uint64_t>(p.exact().mantissa().num()));
        basis_.insert(static_cast<std::uint64_t>(p.exact().mantissa().den()));
    }
    for (const auto& p : source.initial_vector()) {
        if (!p.is_exact()) continue;
        basis_.insert(static_cast<std::uint64_t>(p.exact().mantissa().num()));
        basis_.insert(static_cast<std::uint64_t>(p.exact().mantissa().den()));
    }
    for (auto b : basis_.elements()) basis_logs_.push_back(std::log2(static_cast<long double>(b)));

    for (const auto& p : class_values) {
        class_coord_.push_back(log_coord(p.exact(), basis_));
        common_den_ = checked_lcm(common_den_, class_coord_.back().rational.den());
    }
    for (State k = 0; k < r_; ++k) {
        const auto& p = source.initial(k);
        if (p.is_exact()) {
            initial_coord_.push_back(log_coord(p.exact(), basis_));
            common_den_ = checked_lcm(common_den_, initial_coord_.back().rational.den());
            // log of the initial value is only meaningful when positive
            initial_log_[static_cast<std::size_t>(k)] = initial_coord_.back().value(basis_logs_);
            initial_neg_log_[static_cast<std::size_t>(k)] = -initial_log_[static_cast<std::size_t>(k)];
        } else {
            initial_coord_.push_back(LogCoord{Rational(0), std::vector<std::int64_t>(basis_.size(), 0)});
        }
    }
    for (std::size_t c = 0; c < class_coord_.size(); ++c) {
        class_coord_[c].coeffs.resize(basis_.size(), 0);
        class_log_[c] = class_coord_[c].value(basis_logs_);
        class_neg_log_[c] = -class_log_[c];
    }
    for (const auto& c : class_coord_)
        class_exp_scaled_.push_back((c.rational * Rational(common_den_)).num());
    for (const auto& c : initial_coord_)
        initial_exp_scaled_.push_back((c.rational * Rational(common_den_)).num());
}

LogCoord LogTable::transition_coord(State from, State to) const {
    int c = transition_class(from, to);
    if (c < 0) throw std::domain_error("log of a zero transition");
    return class_coord(c);
}

LogReal LogTable::neg_log(State first, std::span<const int> counts) const {
    if (!exact_) {
        long double v = initial_neg_log_[static_cast<std::size_t>(first)];
        for (std::size_t c = 0; c < counts.size(); ++c)
            if (counts[c] != 0) v += static_cast<long double>(counts[c]) * class_neg_log_[c];
        return {v, std::nullopt};
    }
    __int128 exp_sum = initial_exp_scaled_[static_cast<std::size_t>(first)];
    for (std::size_t c = 0; c < counts.size(); ++c)
        exp_sum += static_cast<__int128>(counts[c]) * class_exp_scaled_[c];
    const auto& init = initial_coord_[static_cast<std::size_t>(first)];
    long double irrational = 0.0L;
    bool rational = true;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        std::int64_t coef = init.coeffs[i];
        for (std::size_t c = 0; c < counts.size(); ++c) coef += counts[c] * class_coord_[c].coeffs[i];
        if (coef != 0) {
            rational = false;
            irrational += static_cast<long double>(coef) * basis_logs_[i];
        }
    }
    if (exp_sum > std::numeric_limits<std::int64_t>::max() || exp_sum < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("log exponent sum overflow");
    Rational exp_part(static_cast<std::int64_t>(exp_sum), common_den_);
    if (rational) return {-exp_part.to_long_double(), -exp_part};
    return {-(exp_part.to_long_double() + irrational), std::nullopt};
}

LogReal LogTable::evaluate(const LogCoord& c) const {
    if (c.is_rational()) return {c.rational.to_long_double(), c.rational};
    return {c.value(basis_logs_), std::nullopt};
}

long double LogTable::frac_scaled(const LogCoord& c, std::int64_t m) const {
    long double f = (c.rational * Rational(m)).frac().to_long_double();
    for (std::size_t i = 0; i < c.coeffs.size(); ++i)
        if (c.coeffs[i] != 0) f += static_cast<long double>(c.coeffs[i] * m) * basis_logs_[i];
    return frac(f);
}

long double LogTable::frac_scaled_log_transition(State from, State to, std::int64_t m) const {
    int c = transition_class(from, to);
    if (c < 0) throw std::domain_error("log of a zero transition");
    if (exact_) return frac_scaled(class_coord_[static_cast<std::size_t>(c)], m);
    return frac(static_cast<long double>(m) * class_log_[static_cast<std::size_t>(c)]);
}

long double LogTable::frac_scaled_log_initial(State k, std::int64_t m) const {
    if (!initial_positive(k)) throw std::domain_error("log of a zero initial probability");
    if (exact_) return frac_scaled(initial_coord_[static_cast<std::size_t>(k)], m);
    return frac(static_cast<long double>(m) * initial_log_[static_cast<std::size_t>(k)]);
}

}  // namespace shannon_markov
