#include "shannon_markov/redundancy.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "shannon_markov/errors.hpp"
#include "shannon_markov/format.hpp"

namespace shannon_markov {

namespace {

void require_length(int n) {
    if (n < 1) throw ValidationError("block length n must be at least 1");
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}

// Depth-first walk over the positive-probability support. The visitor gets the
// path, the per-class counts and the path probability at each leaf.
template <class Visit>
class SupportWalker {
public:
    SupportWalker(const MarkovSource& s, const LogTable& t, int n, Visit& visit)
        : source_(s), table_(t), n_(n), visit_(visit), counts_(t.class_count(), 0) {}

    void run() {
        for (State k = 0; k < source_.size(); ++k) {
            if (!table_.initial_positive(k)) continue;
            path_.assign(1, k);
            descend(source_.initial(k).to_long_double());
        }
    }

private:
    void descend(long double mass) {
        if (static_cast<int>(path_.size()) == n_) {
            visit_(path_, counts_, mass);
            return;
        }
        State cur = path_.back();
        for (State next = 0; next < source_.size(); ++next) {
            int c = table_.transition_class(cur, next);
            if (c < 0) continue;
            ++counts_[static_cast<std::size_t>(c)];
            path_.push_back(next);
            descend(mass * source_.transition(cur, next).to_long_double());
            path_.pop_back();
            --counts_[static_cast<std::size_t>(c)];
        }
    }

    const MarkovSource& source_;
    const LogTable& table_;
    int n_;
    Visit& visit_;
    std::vector<State> path_;
    std::vector<int> counts_;
};

template <class Visit>
void walk_support(const MarkovSource& s, const LogTable& t, int n, Visit& visit) {
    SupportWalker<Visit> walker(s, t, n, visit);
    walker.run();
}

void guard_enumeration(const MarkovSource& source, int n, const ResourceLimits& limits) {
    std::uint64_t size = support_size(source, n);
    if (size > limits.max_enumeration)
        throw ResourceLimit("enumeration of " + std::to_string(size) + " sequences exceeds the cap of " +
                            std::to_string(limits.max_enumeration));
}

RedundancyValue by_enumeration(const MarkovSource& source, int n, const ResourceLimits& limits) {
    guard_enumeration(source, n, limits);
    LogTable table(source);
    long double sum = 0.0L;
    bool snapped = false;
    auto visit = [&](const std::vector<State>& path, const std::vector<int>& counts, long double mass) {
        auto rho = varrho(table.neg_log(path.front(), counts), table.snap_tolerance());
        snapped |= rho.snapped;
        sum += mass * rho.value;
    };
    walk_support(source, table, n, visit);
    return {n, static_cast<double>(sum), Method::Enumeration, std::nullopt, snapped};
}

// Key layout: current state, then one 16-bit count per probability class.
std::string dp_key(State cur, const std::vector<std::uint16_t>& counts) {
    std::string key(sizeof(std::uint16_t) * (counts.size() + 1), '\0');
    auto put = [&](std::size_t i, std::uint16_t v) {
        key[2 * i] = static_cast<char>(v & 0xff);
        key[2 * i + 1] = static_cast<char>(v >> 8);
    };
    put(0, static_cast<std::uint16_t>(cur));
    for (std::size_t i = 0; i < counts.size(); ++i) put(i + 1, counts[i]);
    return key;
}

void dp_unkey(const std::string& key, State& cur, std::vector<int>& counts) {
    auto get = [&](std::size_t i) {
        return static_cast<int>(static_cast<unsigned char>(key[2 * i]) |
                                (static_cast<unsigned char>(key[2 * i + 1]) << 8));
    };
    cur = get(0);
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = get(i + 1);
}

RedundancyValue by_count_dp(const MarkovSource& source, int n, const ResourceLimits& limits) {
    const int r = source.size();
    if (n > limits.count_dp_max_n(r))
        throw ResourceLimit("count_dp is limited to n <= " + std::to_string(limits.count_dp_max_n(r)) +
                            " for r = " + std::to_string(r));
    LogTable table(source);
    const std::size_t classes = table.class_count();
    long double sum = 0.0L;
    bool snapped = false;

    std::vector<std::uint16_t> ucounts(classes);
    std::vector<int> counts(classes);
    for (State first = 0; first < r; ++first) {
        if (!table.initial_positive(first)) continue;
        std::unordered_map<std::string, long double> layer;
        std::fill(ucounts.begin(), ucounts.end(), 0);
        layer.emplace(dp_key(first, ucounts), source.initial(first).to_long_double());
        for (int t = 1; t < n; ++t) {
            std::unordered_map<std::string, long double> next_layer;
            next_layer.reserve(layer.size() * 2);
            for (const auto& [key, mass] : layer) {
                State cur = 0;
                dp_unkey(key, cur, counts);
                for (std::size_t i = 0; i < classes; ++i) ucounts[i] = static_cast<std::uint16_t>(counts[i]);
                for (State next = 0; next < r; ++next) {
                    int c = table.transition_class(cur, next);
                    if (c < 0) continue;
                    ++ucounts[static_cast<std::size_t>(c)];
                    next_layer[dp_key(next, ucounts)] += mass * source.transition(cur, next).to_long_double();
                    --ucounts[static_cast<std::size_t>(c)];
                }
            }
            if (next_layer.size() > limits.count_dp_max_states)
                throw ResourceLimit("count_dp state table exceeds " + std::to_string(limits.count_dp_max_states) +
                                    " entries");
            layer = std::move(next_layer);
        }
        // the final state no longer matters; fold by count vector alone
        std::map<std::vector<int>, long double> folded;
        for (const auto& [key, mass] : layer) {
            State cur = 0;
            dp_unkey(key, cur, counts);
            folded[counts] += mass;
        }
        for (const auto& [cv, mass] : folded) {
            auto rho = varrho(table.neg_log(first, cv), table.snap_tolerance());
            snapped |= rho.snapped;
            sum += mass * rho.value;
        }
    }
    return {n, static_cast<double>(sum), Method::CountDp, std::nullopt, snapped};
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// SplitMix64 stream; one independent stream per sample index.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() { return mix64(state_ += 0x9e3779b97f4a7c15ULL); }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

State draw(const std::vector<double>& cdf, double u) {
    for (std::size_t k = 0; k < cdf.size(); ++k)
        if (u < cdf[k]) return static_cast<State>(k);
    // rounding left u above the last cumulative value: take the last positive state
    for (std::size_t k = cdf.size(); k-- > 0;)
        if (k == 0 || cdf[k] > cdf[k - 1]) return static_cast<State>(k);
    return 0;
}

std::vector<double> cumulative(const std::vector<ProbValue>& row) {
    std::vector<double> cdf;
    long double acc = 0.0L;
    for (const auto& p : row) {
        acc += p.to_long_double();
        cdf.push_back(static_cast<double>(acc));
    }
    return cdf;
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::Enumeration: return "enumeration";
        case Method::CountDp: return "count_dp";
        case Method::MonteCarlo: return "monte_carlo";
    }
    return "unknown";
}

Strategy parse_strategy(const std::string& s) {
    if (s == "auto") return Strategy::Auto;
    if (s == "enumeration") return Strategy::Enumeration;
    if (s == "count_dp") return Strategy::CountDp;
    throw ParseError("unknown strategy '" + s + "'");
}

int ResourceLimits::count_dp_max_n(int r) const {
    if (r == 2) return count_dp_max_n_r2;
    if (r == 3) return count_dp_max_n_r3;
    return count_dp_max_n_larger;
}

double neg_log_mu(const MarkovSource& source, const std::vector<State>& x) {
    LogTable table(source);
    return static_cast<double>(neg_log_mu_value(source, table, x).approx);
}

LogReal neg_log_mu_value(const MarkovSource& source, const LogTable& table, const std::vector<State>& x) {
    if (x.empty()) throw ValidationError("sequence must be nonempty");
    for (State s : x)
        if (s < 0 || s >= source.size()) throw ValidationError("state out of range");
    if (!table.initial_positive(x.front()))
        throw ZeroPathProbability(0, "initial probability of state " + std::to_string(x.front() + 1) + " is zero");
    std::vector<int> counts(table.class_count(), 0);
    for (std::size_t t = 1; t < x.size(); ++t) {
        int c = table.transition_class(x[t - 1], x[t]);
        if (c < 0)
            throw ZeroPathProbability(t, "transition " + std::to_string(x[t - 1] + 1) + " -> " +
                                             std::to_string(x[t] + 1) + " at step " + std::to_string(t + 1) +
                                             " has zero probability");
        ++counts[static_cast<std::size_t>(c)];
    }
    return table.neg_log(x.front(), counts);
}

std::uint64_t support_size(const MarkovSource& source, int n) {
    require_length(n);
    const int r = source.size();
    std::vector<std::uint64_t> ways(static_cast<std::size_t>(r), 0);
    for (State k = 0; k < r; ++k) ways[static_cast<std::size_t>(k)] = source.initial(k).is_zero() ? 0 : 1;
    for (int t = 1; t < n; ++t) {
        std::vector<std::uint64_t> next(static_cast<std::size_t>(r), 0);
        for (State from = 0; from < r; ++from)
            for (State to = 0; to < r; ++to)
                if (!source.transition(from, to).is_zero())
                    next[static_cast<std::size_t>(to)] =
                        saturating_add(next[static_cast<std::size_t>(to)], ways[static_cast<std::size_t>(from)]);
        ways = std::move(next);
    }
    std::uint64_t total = 0;
    for (auto w : ways) total = saturating_add(total, w);
    return total;
}

std::vector<SequenceProb> enumerate_sequences(const MarkovSource& source, int n, const ResourceLimits& limits) {
    require_length(n);
    require_valid(source);
    guard_enumeration(source, n, limits);
    LogTable table(source);
    std::vector<SequenceProb> out;
    auto visit = [&](const std::vector<State>& path, const std::vector<int>& counts, long double mass) {
        out.push_back({path, static_cast<double>(table.neg_log(path.front(), counts).approx),
                       static_cast<double>(mass)});
    };
    walk_support(source, table, n, visit);
    return out;
}

RedundancyValue exact_redundancy(const MarkovSource& source, int n, Strategy strategy,
                                 const ResourceLimits& limits) {
    require_length(n);
    require_valid(source);
    switch (strategy) {
        case Strategy::Enumeration: return by_enumeration(source, n, limits);
        case Strategy::CountDp: return by_count_dp(source, n, limits);
        case Strategy::Auto: break;
    }
    if (n <= limits.count_dp_max_n(source.size())) {
        try {
            return by_count_dp(source, n, limits);
        } catch (const ResourceLimit&) {
            // state table blew up; enumeration may still fit
        }
    }
    return by_enumeration(source, n, limits);
}

std::vector<TransitionCounts> transition_count_classes(const MarkovSource& source, int n,
                                                       const ResourceLimits& limits) {
    require_length(n);
    require_valid(source);
    const int r = source.size();
    using Key = std::tuple<State, State, std::vector<int>>;  // first, current, flattened counts
    std::map<Key, boost::multiprecision::cpp_int> layer;
    for (State k = 0; k < r; ++k)
        if (!source.initial(k).is_zero())
            layer.emplace(Key{k, k, std::vector<int>(static_cast<std::size_t>(r * r), 0)}, 1);
    for (int t = 1; t < n; ++t) {
        std::map<Key, boost::multiprecision::cpp_int> next_layer;
        for (const auto& [key, mult] : layer) {
            const auto& [first, cur, counts] = key;
            for (State next = 0; next < r; ++next) {
                if (source.transition(cur, next).is_zero()) continue;
                auto c = counts;
                ++c[static_cast<std::size_t>(cur * r + next)];
                next_layer[Key{first, next, std::move(c)}] += mult;
            }
        }
        if (next_layer.size() > limits.count_dp_max_states)
            throw ResourceLimit("transition-count table exceeds " + std::to_string(limits.count_dp_max_states) +
                                " entries");
        layer = std::move(next_layer);
    }
    std::vector<TransitionCounts> out;
    for (const auto& [key, mult] : layer) {
        const auto& [first, last, flat] = key;
        TransitionCounts tc;
        tc.first_state = first;
        tc.last_state = last;
        tc.counts.assign(static_cast<std::size_t>(r), std::vector<int>(static_cast<std::size_t>(r), 0));
        for (int i = 0; i < r * r; ++i)
            tc.counts[static_cast<std::size_t>(i / r)][static_cast<std::size_t>(i % r)] =
                flat[static_cast<std::size_t>(i)];
        tc.multiplicity = mult;
        out.push_back(std::move(tc));
    }
    return out;
}

RedundancyValue monte_carlo_redundancy(const MarkovSource& source, int n, std::uint64_t samples,
                                       std::uint64_t seed) {
    require_length(n);
    require_valid(source);
    if (samples < 1) throw ValidationError("samples must be at least 1");
    LogTable table(source);
    auto init_cdf = cumulative(source.initial_vector());
    std::vector<std::vector<double>> row_cdf;
    for (const auto& row : source.transition_rows()) row_cdf.push_back(cumulative(row));

    std::vector<int> counts(table.class_count());
    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    bool snapped = false;
    const std::uint64_t stream_base = mix64(seed);
    for (std::uint64_t i = 0; i < samples; ++i) {
        SplitMix64 rng(mix64(stream_base ^ mix64(i + 0x632be59bd9b4e019ULL)));
        std::fill(counts.begin(), counts.end(), 0);
        State first = draw(init_cdf, rng.uniform());
        State cur = first;
        for (int t = 1; t < n; ++t) {
            State next = draw(row_cdf[static_cast<std::size_t>(cur)], rng.uniform());
            int c = table.transition_class(cur, next);
            ++counts[static_cast<std::size_t>(c)];
            cur = next;
        }
        auto rho = varrho(table.neg_log(first, counts), table.snap_tolerance());
        snapped |= rho.snapped;
        sum += rho.value;
        sum_sq += static_cast<long double>(rho.value) * rho.value;
    }
    const long double count = static_cast<long double>(samples);
    const long double mean = sum / count;
    long double var = 0.0L;
    if (samples > 1) var = std::max(0.0L, (sum_sq - count * mean * mean) / (count - 1));
    double se = static_cast<double>(std::sqrt(var / count));
    return {n, static_cast<double>(mean), Method::MonteCarlo, se, snapped};
}

std::vector<CodeLength> shannon_lengths(const MarkovSource& source, int n, const ResourceLimits& limits) {
    require_length(n);
    require_valid(source);
    guard_enumeration(source, n, limits);
    LogTable table(source);
    std::vector<CodeLength> out;
    auto visit = [&](const std::vector<State>& path, const std::vector<int>& counts, long double mass) {
        LogReal u = table.neg_log(path.front(), counts);
        std::int64_t len;
        if (u.exact) {
            len = u.exact->ceil();
        } else {
            long double nearest = std::nearbyint(u.approx);
            bool snap = table.snap_tolerance() > 0 && std::fabs(u.approx - nearest) <= table.snap_tolerance();
            len = static_cast<std::int64_t>(snap ? nearest : std::ceil(u.approx));
        }
        out.push_back({path, len, static_cast<double>(mass)});
    };
    walk_support(source, table, n, visit);
    return out;
}

long double kraft_sum(const std::vector<CodeLength>& lengths) {
    long double sum = 0.0L;
    for (const auto& l : lengths) sum += std::ldexp(1.0L, static_cast<int>(-l.length));
    return sum;
}

void write_redundancy_csv_header(std::ostream& os) {
    os << "n,method,value,stderr\n";
}

void write_redundancy_csv_row(std::ostream& os, const RedundancyValue& v) {
    os << v.n << ',' << to_string(v.method) << ',' << format_number(v.value) << ','
       << (v.std_error ? format_number(*v.std_error) : "") << '\n';
}

}  // namespace shannon_markov
