#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shannon_markov/prob.hpp"

namespace shannon_markov {

using State = int;

/**
 * First-order Markov source over the alphabet {0, ..., r-1}.
 *
 * Orientation is fixed here once: transition(from, to) is the probability of
 * moving to state `to` given current state `from`; row `from` of the stored
 * matrix is the conditional distribution of the next symbol. Every matrix the
 * library builds from a source (P, A_m) uses the same row = current layout.
 *
 * A source is homogeneously exact or homogeneously floating; the constructor
 * rejects mixtures and shape errors with ValidationError. Row sums are checked
 * by validate(), not here, so invalid sources can still be inspected.
 */
class MarkovSource {
public:
    MarkovSource(std::vector<ProbValue> initial, std::vector<std::vector<ProbValue>> transitions);

    /// Convenience for floating sources.
    static MarkovSource from_doubles(const std::vector<double>& initial,
                                     const std::vector<std::vector<double>>& transitions);
    /// Convenience for exact sources given as "m/n * 2^(a/b)" strings.
    static MarkovSource from_specs(const std::vector<std::string>& initial,
                                   const std::vector<std::vector<std::string>>& transitions);
    /// Memoryless source: every row equals `p`, initial vector equals `p`.
    static MarkovSource memoryless(const std::vector<ProbValue>& p);

    int size() const { return static_cast<int>(initial_.size()); }
    bool exact() const { return exact_; }

    const ProbValue& initial(State k) const { return initial_.at(static_cast<std::size_t>(k)); }
    const ProbValue& transition(State from, State to) const {
        return transitions_.at(static_cast<std::size_t>(from)).at(static_cast<std::size_t>(to));
    }
    const std::vector<ProbValue>& initial_vector() const { return initial_; }
    const std::vector<std::vector<ProbValue>>& transition_rows() const { return transitions_; }

    std::vector<std::vector<double>> transition_matrix() const;
    std::vector<double> initial_doubles() const;

private:
    std::vector<ProbValue> initial_;
    std::vector<std::vector<ProbValue>> transitions_;
    bool exact_ = false;
};

/// Outcome of validate(). Exact sources are canonical by construction, so the
/// canonical-form part of the check reduces to the homogeneity test.
struct ValidationReport {
    bool valid = true;
    std::vector<double> row_residuals;  ///< |sum_j p(j|k) - 1| per row
    double initial_residual = 0.0;
    std::vector<std::string> issues;
};

/// Row-sum tolerance for floating sources.
inline constexpr double kFloatSumTolerance = 1e-12;

ValidationReport validate(const MarkovSource& source);
/// Throws ValidationError carrying the first issue when validate() fails.
void require_valid(const MarkovSource& source);

struct ChainStructure {
    bool irreducible = false;
    std::optional<int> period;  ///< defined only when irreducible
    bool positive = false;
    std::optional<std::string> reducible_note;

    bool aperiodic() const { return period && *period == 1; }
};

ChainStructure classify_structure(const MarkovSource& source);

struct StationaryDist {
    std::vector<double> pi;
};

/// Unique stationary vector of an irreducible chain; throws ReducibleChain otherwise.
StationaryDist stationary_distribution(const MarkovSource& source);

}  // namespace shannon_markov
