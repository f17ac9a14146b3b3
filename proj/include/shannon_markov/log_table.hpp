#pragma once

#include <span>
#include <vector>

#include "shannon_markov/markov_model.hpp"
#include "shannon_markov/prob.hpp"
#include "shannon_markov/rational.hpp"
#include "shannon_markov/varrho.hpp"

namespace shannon_markov {

/**
 * Base-2 logarithms of a source's probabilities.
 *
 * Positive transitions are grouped into classes of identical probability, so
 * -log mu(x^n) depends on x^n only through x_1 and the per-class transition
 * counts. Exact sources carry LogCoords over a coprime basis built from every
 * mantissa in the source, which keeps rationality of any path's log decidable.
 */
class LogTable {
public:
    explicit LogTable(const MarkovSource& source);

    bool exact() const { return exact_; }
    int state_count() const { return r_; }
    std::size_t class_count() const { return class_neg_log_.size(); }
    /// 0 for exact sources (no float noise to absorb), kSnapTolerance otherwise.
    double snap_tolerance() const { return exact_ ? 0.0 : kSnapTolerance; }

    /// Class of the transition from -> to, or -1 when its probability is zero.
    int transition_class(State from, State to) const {
        return class_of_[static_cast<std::size_t>(from * r_ + to)];
    }
    bool initial_positive(State k) const { return initial_positive_[static_cast<std::size_t>(k)]; }

    long double class_neg_log(int c) const { return class_neg_log_[static_cast<std::size_t>(c)]; }
    long double initial_neg_log(State k) const { return initial_neg_log_[static_cast<std::size_t>(k)]; }

    /// Exact log2 coordinates (exact sources only).
    const LogCoord& class_coord(int c) const { return class_coord_.at(static_cast<std::size_t>(c)); }
    const LogCoord& initial_coord(State k) const { return initial_coord_.at(static_cast<std::size_t>(k)); }
    LogCoord transition_coord(State from, State to) const;
    const std::vector<long double>& basis_logs() const { return basis_logs_; }
    const CoprimeBasis& basis() const { return basis_; }

    /// -log2 mu of any path with first state `first` and per-class counts.
    LogReal neg_log(State first, std::span<const int> counts) const;

    /// Evaluates an exact coordinate: exact when rational.
    LogReal evaluate(const LogCoord& c) const;

    /// <m * log2 p(to|from)> and <m * log2 p_k>, exact where the log is rational.
    long double frac_scaled_log_transition(State from, State to, std::int64_t m) const;
    long double frac_scaled_log_initial(State k, std::int64_t m) const;
    long double frac_scaled(const LogCoord& c, std::int64_t m) const;

private:
    int r_ = 0;
    bool exact_ = false;
    std::vector<int> class_of_;
    std::vector<long double> class_neg_log_;
    std::vector<long double> initial_neg_log_;
    std::vector<bool> initial_positive_;
    std::vector<long double> class_log_;
    std::vector<long double> initial_log_;

    CoprimeBasis basis_;
    std::vector<long double> basis_logs_;
    std::vector<LogCoord> class_coord_;
    std::vector<LogCoord> initial_coord_;
    // exponent parts over a common denominator, for allocation-free path sums
    std::int64_t common_den_ = 1;
    std::vector<std::int64_t> class_exp_scaled_;
    std::vector<std::int64_t> initial_exp_scaled_;
};

}  // namespace shannon_markov
