#include "shannon_markov/markov_model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "shannon_markov/errors.hpp"

namespace shannon_markov {

namespace {

std::string state_name(State k) {
    return std::to_string(k + 1);
}

// Residual |sum - 1| of a probability vector; exact when every entry is rational.
double sum_residual(const std::vector<ProbValue>& row, bool exact, std::string& note) {
    if (exact) {
        bool irrational = false;
        for (const auto& p : row)
            if (p.is_exact() && !p.exact().is_rational_value()) irrational = true;
        if (!irrational) {
            try {
                Rational sum(0);
                for (const auto& p : row)
                    if (p.is_exact()) sum += p.exact().rational_value();
                Rational diff = sum - Rational(1);
                return std::fabs(diff.to_double());
            } catch (const std::exception& e) {
                note = std::string("exact sum not representable: ") + e.what();
            }
        } else {
            note = "contains irrational entries; positive terms q*2^(a/b) with non-integer exponent cannot sum to exactly 1";
        }
    }
    long double sum = 0.0L;
    for (const auto& p : row) sum += p.to_long_double();
    double r = static_cast<double>(std::fabs(sum - 1.0L));
    // an exact source whose sum could not be formed exactly is never valid
    if (exact && r == 0.0) r = std::numeric_limits<double>::min();
    return r;
}

std::vector<std::vector<int>> adjacency(const MarkovSource& s, bool reversed) {
    const int r = s.size();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(r));
    for (State from = 0; from < r; ++from)
        for (State to = 0; to < r; ++to)
            if (!s.transition(from, to).is_zero()) {
                if (reversed)
                    adj[static_cast<std::size_t>(to)].push_back(from);
                else
                    adj[static_cast<std::size_t>(from)].push_back(to);
            }
    return adj;
}

std::vector<int> bfs_levels(const std::vector<std::vector<int>>& adj, int root) {
    std::vector<int> level(adj.size(), -1);
    std::queue<int> q;
    level[static_cast<std::size_t>(root)] = 0;
    q.push(root);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (level[static_cast<std::size_t>(v)] < 0) {
                level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
                q.push(v);
            }
        }
    }
    return level;
}

}  // namespace

MarkovSource::MarkovSource(std::vector<ProbValue> initial,
                           std::vector<std::vector<ProbValue>> transitions)
    : initial_(std::move(initial)), transitions_(std::move(transitions)) {
    const std::size_t r = initial_.size();
    if (r < 2) throw ValidationError("alphabet size must be at least 2");
    if (transitions_.size() != r) throw ValidationError("transition matrix must have r rows");
    for (const auto& row : transitions_)
        if (row.size() != r) throw ValidationError("transition matrix must be r x r");
    bool any_exact = false;
    bool any_float = false;
    auto scan = [&](const ProbValue& p) {
        any_exact |= p.is_exact();
        any_float |= p.is_float();
    };
    for (const auto& p : initial_) scan(p);
    for (const auto& row : transitions_)
        for (const auto& p : row) scan(p);
    if (any_exact && any_float)
        throw ValidationError("source mixes exact and floating probabilities");
    exact_ = any_exact;
}

MarkovSource MarkovSource::from_doubles(const std::vector<double>& initial,
                                        const std::vector<std::vector<double>>& transitions) {
    std::vector<ProbValue> init;
    for (double p : initial) init.push_back(ProbValue::real(p));
    std::vector<std::vector<ProbValue>> rows;
    for (const auto& row : transitions) {
        auto& out = rows.emplace_back();
        for (double p : row) out.push_back(ProbValue::real(p));
    }
    return MarkovSource(std::move(init), std::move(rows));
}

MarkovSource MarkovSource::from_specs(const std::vector<std::string>& initial,
                                      const std::vector<std::vector<std::string>>& transitions) {
    std::vector<ProbValue> init;
    for (const auto& p : initial) init.push_back(parse_probspec(p));
    std::vector<std::vector<ProbValue>> rows;
    for (const auto& row : transitions) {
        auto& out = rows.emplace_back();
        for (const auto& p : row) out.push_back(parse_probspec(p));
    }
    return MarkovSource(std::move(init), std::move(rows));
}

MarkovSource MarkovSource::memoryless(const std::vector<ProbValue>& p) {
    return MarkovSource(p, std::vector<std::vector<ProbValue>>(p.size(), p));
}

std::vector<std::vector<double>> MarkovSource::transition_matrix() const {
    std::vector<std::vector<double>> out;
    for (const auto& row : transitions_) {
        auto& o = out.emplace_back();
        for (const auto& p : row) o.push_back(p.to_double());
    }
    return out;
}

std::vector<double> MarkovSource::initial_doubles() const {
    std::vector<double> out;
    for (const auto& p : initial_) out.push_back(p.to_double());
    return out;
}

ValidationReport validate(const MarkovSource& source) {
    ValidationReport report;
    const bool exact = source.exact();
    const double tol = exact ? 0.0 : kFloatSumTolerance;
    for (State k = 0; k < source.size(); ++k) {
        std::string note;
        double res = sum_residual(source.transition_rows()[static_cast<std::size_t>(k)], exact, note);
        report.row_residuals.push_back(res);
        if (res > tol) {
            report.valid = false;
            report.issues.push_back("row " + state_name(k) + " sums to 1 +/- " + std::to_string(res) +
                                    (note.empty() ? "" : " (" + note + ")"));
        }
    }
    std::string note;
    report.initial_residual = sum_residual(source.initial_vector(), exact, note);
    if (report.initial_residual > tol) {
        report.valid = false;
        report.issues.push_back("initial vector sums to 1 +/- " + std::to_string(report.initial_residual) +
                                (note.empty() ? "" : " (" + note + ")"));
    }
    return report;
}

void require_valid(const MarkovSource& source) {
    auto report = validate(source);
    if (!report.valid) throw ValidationError("invalid source: " + report.issues.front());
}

ChainStructure classify_structure(const MarkovSource& source) {
    const int r = source.size();
    ChainStructure out;
    out.positive = true;
    for (State from = 0; from < r; ++from)
        for (State to = 0; to < r; ++to)
            if (source.transition(from, to).is_zero()) out.positive = false;

    auto fwd = adjacency(source, false);
    auto forward = bfs_levels(fwd, 0);
    auto backward = bfs_levels(adjacency(source, true), 0);
    for (State k = 0; k < r; ++k) {
        if (forward[static_cast<std::size_t>(k)] < 0) {
            out.reducible_note = "state " + state_name(k) + " is unreachable from state 1";
            return out;
        }
        if (backward[static_cast<std::size_t>(k)] < 0) {
            out.reducible_note = "state 1 is unreachable from state " + state_name(k);
            return out;
        }
    }
    out.irreducible = true;

    // every edge u->v closes a walk whose length differs from a BFS-tree path by
    // level[u] + 1 - level[v]; the period is the gcd of those discrepancies
    int d = 0;
    for (State u = 0; u < r; ++u)
        for (int v : fwd[static_cast<std::size_t>(u)])
            d = std::gcd(d, std::abs(forward[static_cast<std::size_t>(u)] + 1 -
                                     forward[static_cast<std::size_t>(v)]));
    out.period = d;
    return out;
}

StationaryDist stationary_distribution(const MarkovSource& source) {
    auto structure = classify_structure(source);
    if (!structure.irreducible)
        throw ReducibleChain("stationary distribution requires an irreducible chain: " +
                             structure.reducible_note.value_or(""));
    const int r = source.size();
    Eigen::MatrixXd a(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            a(i, j) = source.transition(j, i).to_double() - (i == j ? 1.0 : 0.0);
    // pi (P - I) = 0 has one redundant equation; replace it with sum(pi) = 1
    a.row(r - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(r);
    b(r - 1) = 1.0;
    Eigen::VectorXd pi = a.fullPivLu().solve(b);
    StationaryDist out;
    out.pi.assign(pi.data(), pi.data() + r);
    return out;
}

}  // namespace shannon_markov
