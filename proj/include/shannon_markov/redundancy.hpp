#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "shannon_markov/log_table.hpp"
#include "shannon_markov/markov_model.hpp"

namespace shannon_markov {

enum class Strategy { Auto, Enumeration, CountDp };
enum class Method { Enumeration, CountDp, MonteCarlo };

std::string to_string(Method m);
Strategy parse_strategy(const std::string& s);

/// Guards for the exact oracle; exceeding one raises ResourceLimit.
struct ResourceLimits {
    /// Cap on the number of positive-probability sequences enumerated.
    std::uint64_t max_enumeration = std::uint64_t{1} << 24;
    int count_dp_max_n_r2 = 200;
    int count_dp_max_n_r3 = 40;
    /// Alphabets of four or more symbols are disabled by default.
    int count_dp_max_n_larger = 0;
    /// Cap on live (state, count vector) entries at any step.
    std::size_t count_dp_max_states = 20'000'000;

    int count_dp_max_n(int r) const;
};

struct SequenceProb {
    std::vector<State> sequence;
    double neg_log2 = 0.0;
    double prob = 0.0;
};

struct RedundancyValue {
    int n = 0;
    double value = 0.0;
    Method method = Method::Enumeration;
    std::optional<double> std_error;  ///< Monte Carlo only
    bool snapped = false;             ///< some -log mu was snapped to an integer
};

struct TransitionCounts {
    State first_state = 0;
    State last_state = 0;
    std::vector<std::vector<int>> counts;  ///< counts[from][to], summing to n - 1
    boost::multiprecision::cpp_int multiplicity;
};

/// -log2 mu(x); throws ZeroPathProbability at the first zero-probability step.
double neg_log_mu(const MarkovSource& source, const std::vector<State>& x);
/// Same, exact when the value is rational.
LogReal neg_log_mu_value(const MarkovSource& source, const LogTable& table, const std::vector<State>& x);

/// Number of positive-probability sequences of length n (saturates at UINT64_MAX).
std::uint64_t support_size(const MarkovSource& source, int n);

/// Every positive-probability sequence of length n, in lexicographic order.
std::vector<SequenceProb> enumerate_sequences(const MarkovSource& source, int n,
                                              const ResourceLimits& limits = {});

RedundancyValue exact_redundancy(const MarkovSource& source, int n, Strategy strategy = Strategy::Auto,
                                 const ResourceLimits& limits = {});

/// Transition-count classes of all positive-probability sequences of length n.
std::vector<TransitionCounts> transition_count_classes(const MarkovSource& source, int n,
                                                       const ResourceLimits& limits = {});

RedundancyValue monte_carlo_redundancy(const MarkovSource& source, int n, std::uint64_t samples,
                                       std::uint64_t seed);

struct CodeLength {
    std::vector<State> sequence;
    std::int64_t length = 0;
    double prob = 0.0;
};

/// Shannon code lengths ceil(-log2 mu(x)) over the positive-probability support.
std::vector<CodeLength> shannon_lengths(const MarkovSource& source, int n, const ResourceLimits& limits = {});
long double kraft_sum(const std::vector<CodeLength>& lengths);

void write_redundancy_csv_header(std::ostream& os);
void write_redundancy_csv_row(std::ostream& os, const RedundancyValue& v);

}  // namespace shannon_markov
