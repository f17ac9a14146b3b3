#include "shannon_markov/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "shannon_markov/errors.hpp"

namespace shannon_markov {

namespace {

constexpr double kUnitEigenTolerance = 1e-9;
constexpr double kImaginaryTolerance = 1e-8;

std::string name(State k) {
    return std::to_string(k + 1);
}

std::string cond(State to, State from) {
    return "p(" + name(to) + "|" + name(from) + ")";
}

bool is_degenerate(const MarkovSource& source) {
    auto dyadic = [](const ProbValue& p) {
        if (p.is_zero()) return true;
        if (p.is_exact()) return p.exact().is_dyadic();
        double lg = std::log2(p.real_value());
        return std::fabs(lg - std::nearbyint(lg)) <= 1e-12;
    };
    for (const auto& p : source.initial_vector())
        if (!dyadic(p)) return false;
    for (const auto& row : source.transition_rows())
        for (const auto& p : row)
            if (!dyadic(p)) return false;
    return true;
}

void require_oscillatory(const ModeClassification& cls) {
    if (cls.mode != Mode::Oscillatory || !cls.M)
        throw ValidationError("zeta is defined only for oscillatory classifications");
}

// Eigenvector of `m` at `lambda`, from the one-dimensional null space of m - lambda I.
Eigen::VectorXcd null_vector(const Eigen::MatrixXcd& m, Complex lambda) {
    Eigen::MatrixXcd shifted = m - lambda * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(shifted);
    lu.setThreshold(1e-9);
    Eigen::MatrixXcd kernel = lu.kernel();
    if (kernel.cols() != 1)
        throw DefectiveMatrix("eigenvalue of P on the unit circle is not simple");
    return kernel.col(0);
}

Prediction base_prediction(const ModeClassification& cls, int n, double xi) {
    if (!(xi > 0.0 && xi < 0.5)) throw ValidationError("xi must lie in (0, 1/2)");
    Prediction pr;
    pr.n = n;
    pr.mode = cls.mode;
    pr.M = cls.M;
    pr.xi = xi;
    pr.degenerate = cls.degenerate;
    pr.heuristic = cls.heuristic;
    return pr;
}

void finish(Prediction& pr, double weighted_rho, double boundary_mass) {
    const double M = static_cast<double>(*pr.M);
    pr.omega = 0.5 * (1.0 - 1.0 / M) + weighted_rho / M;
    pr.boundary_terms = boundary_mass / M;
    pr.lower = pr.omega - pr.boundary_terms;
    pr.upper = pr.omega + pr.boundary_terms;
    pr.boundary = pr.boundary_terms > 0.0;
}

bool outside_margin(double rho, double xi) {
    return !(rho > xi && rho < 1.0 - xi);
}

}  // namespace

bool AlphaMatrix::all_rational() const {
    for (const auto& row : entries)
        for (const auto& e : row)
            if (e.defined && !e.rational) return false;
    return true;
}

std::int64_t AlphaMatrix::denominator_lcm() const {
    std::int64_t l = 1;
    for (const auto& row : entries)
        for (const auto& e : row)
            if (e.defined) {
                if (!e.value) throw ValidationError("alpha entry is not rational");
                l = checked_lcm(l, e.value->den());
            }
    return l;
}

AlphaMatrix alpha_matrix(const MarkovSource& source, State anchor, AlphaForm form) {
    require_valid(source);
    const int r = source.size();
    if (anchor < 0 || anchor >= r) throw ValidationError("anchor state out of range");
    const State l = anchor;
    auto zero = [&](State from, State to) { return source.transition(from, to).is_zero(); };

    std::vector<std::string> missing;
    auto need = [&](State from, State to) {
        if (!zero(from, to)) return;
        std::string c = cond(to, from);
        for (const auto& m : missing)
            if (m == c) return;
        missing.push_back(c);
    };
    if (form == AlphaForm::Standard) {
        for (State j = 0; j < r; ++j)
            for (State k = 0; k < r; ++k) {
                need(l, j);
                need(j, j);
                need(l, k);
                need(k, j);
            }
    } else {
        for (State j = 0; j < r; ++j) need(l, j);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw UndefinedAlpha("alpha needs positive " + list);
    }

    AlphaMatrix out;
    out.anchor = l;
    out.form = form;
    out.exact = source.exact();
    out.heuristic = !source.exact();
    out.entries.assign(static_cast<std::size_t>(r), std::vector<AlphaEntry>(static_cast<std::size_t>(r)));
    LogTable table(source);
    auto log_of = [&](State from, State to) {
        return -static_cast<double>(table.class_neg_log(table.transition_class(from, to)));
    };
    for (State j = 0; j < r; ++j)
        for (State k = 0; k < r; ++k) {
            if (zero(k, j)) continue;  // p(j|k) = 0 leaves the entry undefined
            auto& e = out.entries[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            e.defined = true;
            const State second = form == AlphaForm::Standard ? j : l;  // p(j|j) or p(l|l)
            if (j == k && form == AlphaForm::Standard) {
                e.rational = true;
                e.value = Rational(0);
                if (out.exact) e.coord = LogCoord{Rational(0), std::vector<std::int64_t>(table.basis().size(), 0)};
                continue;
            }
            if (out.exact) {
                LogCoord c = table.transition_coord(l, j) + table.transition_coord(second, second) -
                             table.transition_coord(l, k) - table.transition_coord(k, j);
                e.approx = static_cast<double>(c.value(table.basis_logs()));
                e.rational = c.is_rational();
                if (e.rational) e.value = c.rational;
                e.coord = std::move(c);
            } else {
                e.approx = log_of(l, j) + log_of(second, second) - log_of(l, k) - log_of(k, j);
                e.value = approximate_rational(e.approx);
                e.rational = e.value.has_value();
            }
        }
    return out;
}

std::string to_string(Mode m) {
    return m == Mode::Convergent ? "Convergent" : "Oscillatory";
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::ExactRational: return "exact_rational";
        case Provenance::SpectralSearch: return "spectral_search";
        case Provenance::HeuristicFloat: return "heuristic_float";
    }
    return "unknown";
}

ModeClassification classify_mode(const MarkovSource& source, const ClassifyOptions& options) {
    require_valid(source);
    auto structure = classify_structure(source);
    if (!structure.irreducible)
        throw ReducibleChain("mode classification requires an irreducible chain: " +
                             structure.reducible_note.value_or(""));
    const int r = source.size();
    if (options.anchor < 0 || options.anchor >= r) throw ValidationError("anchor state out of range");

    ModeClassification cls;
    cls.period = *structure.period;
    cls.anchor = options.anchor;
    cls.degenerate = is_degenerate(source);
    cls.w.assign(static_cast<std::size_t>(r), 0.0);

    if (source.exact() && structure.positive) {
        const State l = options.anchor;
        auto alpha = alpha_matrix(source, l);
        cls.provenance = Provenance::ExactRational;
        if (!alpha.all_rational()) {
            cls.mode = Mode::Convergent;
            cls.note = "some alpha is irrational";
            return cls;
        }
        const std::int64_t M = alpha.denominator_lcm();
        LogTable table(source);
        cls.mode = Mode::Oscillatory;
        cls.M = M;
        cls.s = static_cast<double>(table.frac_scaled(table.transition_coord(l, l), -M));
        for (State j = 0; j < r; ++j)
            cls.w[static_cast<std::size_t>(j)] = static_cast<double>(
                table.frac_scaled(table.transition_coord(l, j) - table.transition_coord(j, j), M));
        cls.similarity_residual = verify_similarity(source, M, cls.s, cls.w).residual;
        return cls;
    }

    auto found = find_M(source, options.m_max, options.tol);
    cls.provenance = source.exact() ? Provenance::SpectralSearch : Provenance::HeuristicFloat;
    cls.heuristic = found.heuristic;
    if (!found.M) {
        cls.mode = Mode::Convergent;
        cls.note = "no oscillation detected up to m_max = " + std::to_string(options.m_max);
        return cls;
    }
    cls.mode = Mode::Oscillatory;
    cls.M = found.M;
    cls.s = found.s;
    cls.w = found.w;
    cls.similarity_residual = verify_similarity(source, *found.M, found.s, found.w).residual;
    return cls;
}

LogCoord zeta_coord(const MarkovSource& source, const LogTable& table, const ModeClassification& cls, State j,
                    State k, int n) {
    require_oscillatory(cls);
    if (source.initial(j).is_zero()) throw ZeroProbability("p_" + name(j) + " is zero; zeta is undefined");
    const State l = cls.anchor;
    LogCoord c = table.transition_coord(l, l) * static_cast<std::int64_t>(-(n - 1));
    c += table.transition_coord(l, j);
    c -= table.transition_coord(l, k);
    c -= table.initial_coord(j);
    c *= *cls.M;
    return c;
}

long double zeta_phase_form(const MarkovSource& source, const ModeClassification& cls, State j, State k, int n) {
    require_oscillatory(cls);
    if (source.initial(j).is_zero()) throw ZeroProbability("p_" + name(j) + " is zero; zeta is undefined");
    const long double log_pj = std::log2(source.initial(j).to_long_double());
    return static_cast<long double>(n - 1) * cls.s + cls.w[static_cast<std::size_t>(j)] -
           cls.w[static_cast<std::size_t>(k)] - static_cast<long double>(*cls.M) * log_pj;
}

LogReal zeta(const MarkovSource& source, const ModeClassification& cls, State j, State k, int n) {
    require_oscillatory(cls);
    if (cls.provenance == Provenance::ExactRational && source.exact()) {
        LogTable table(source);
        return table.evaluate(zeta_coord(source, table, cls, j, k, n));
    }
    return {zeta_phase_form(source, cls, j, k, n), std::nullopt};
}

std::string Prediction::flags() const {
    std::string out;
    auto add = [&](bool on, const char* f) {
        if (!on) return;
        if (!out.empty()) out += ';';
        out += f;
    };
    add(degenerate, "degenerate");
    add(boundary, "boundary");
    add(heuristic, "heuristic");
    add(snap, "snap");
    return out;
}

Prediction omega(const MarkovSource& source, const ModeClassification& cls, int n, double xi) {
    if (n < 1) throw ValidationError("block length n must be at least 1");
    Prediction pr = base_prediction(cls, n, xi);
    if (cls.mode == Mode::Convergent) return pr;
    if (cls.period != 1) throw ValidationError("omega requires an aperiodic chain; use omega_periodic");
    require_oscillatory(cls);

    const int r = source.size();
    const auto pi = stationary_distribution(source).pi;
    const bool exact_form = cls.provenance == Provenance::ExactRational && source.exact();
    LogTable table(source);
    const double snap_tol = exact_form ? 0.0 : kSnapTolerance;
    double weighted = 0.0;
    double boundary = 0.0;
    for (State j = 0; j < r; ++j) {
        if (source.initial(j).is_zero()) continue;
        const double pj = source.initial(j).to_double();
        for (State k = 0; k < r; ++k) {
            LogReal z = exact_form ? table.evaluate(zeta_coord(source, table, cls, j, k, n))
                                   : LogReal{zeta_phase_form(source, cls, j, k, n), std::nullopt};
            auto rho = varrho(z, snap_tol);
            pr.snap |= rho.snapped;
            const double weight = pj * pi[static_cast<std::size_t>(k)];
            weighted += weight * rho.value;
            if (outside_margin(rho.value, xi)) boundary += weight;
        }
    }
    finish(pr, weighted, boundary);
    return pr;
}

Prediction omega_periodic(const MarkovSource& source, const ModeClassification& cls, int n, double xi) {
    if (cls.period == 1) return omega(source, cls, n, xi);
    if (n < 1) throw ValidationError("block length n must be at least 1");
    Prediction pr = base_prediction(cls, n, xi);
    if (cls.mode == Mode::Convergent) return pr;
    require_oscillatory(cls);

    const int r = source.size();
    const int d = cls.period;
    Eigen::MatrixXcd p(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) p(i, j) = source.transition(i, j).to_double();
    const auto pi = stationary_distribution(source).pi;

    // W(j, k) = sum_t r_{t,j} l_{t,k} e^{2 pi i (n-1) t / d}: the periodic limit of P^{n-1}
    Eigen::MatrixXcd weights = Eigen::MatrixXcd::Zero(r, r);
    for (int t = 0; t < d; ++t) {
        Eigen::VectorXcd right, left;
        if (t == 0) {
            right = Eigen::VectorXcd::Ones(r);
            left = Eigen::VectorXcd(r);
            for (int k = 0; k < r; ++k) left(k) = pi[static_cast<std::size_t>(k)];
        } else {
            const Complex lambda = std::polar(1.0, 2.0 * std::numbers::pi * t / d);
            right = null_vector(p, lambda);
            left = null_vector(p.transpose(), lambda);
            Complex norm = left.transpose() * right;
            if (std::abs(norm) < 1e-10) throw DefectiveMatrix("left and right eigenvectors are orthogonal");
            left /= norm;
        }
        // reduce (n-1) t mod d before forming the phase
        const long long turns = (static_cast<long long>(n - 1) * t) % d;
        const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(turns) / d);
        weights += phase * right * left.transpose();
    }

    Complex weighted = 0.0;
    Complex boundary = 0.0;
    for (State j = 0; j < r; ++j) {
        if (source.initial(j).is_zero()) continue;
        const double pj = source.initial(j).to_double();
        for (State k = 0; k < r; ++k) {
            auto rho = varrho(LogReal{zeta_phase_form(source, cls, j, k, n), std::nullopt}, kSnapTolerance);
            pr.snap |= rho.snapped;
            const Complex weight = pj * weights(j, k);
            weighted += weight * rho.value;
            if (outside_margin(rho.value, xi)) boundary += weight;
        }
    }
    if (std::abs(weighted.imag()) > kImaginaryTolerance)
        throw ComplexResidual("periodic prediction has imaginary part " + std::to_string(weighted.imag()));
    finish(pr, weighted.real(), std::max(0.0, boundary.real()));
    return pr;
}

Prediction predict(const MarkovSource& source, const ModeClassification& cls, int n, double xi) {
    return cls.period == 1 ? omega(source, cls, n, xi) : omega_periodic(source, cls, n, xi);
}

double sandwich_tolerance(const MarkovSource& source, std::int64_t M, int n, bool include_lower_harmonics) {
    double lambda = 0.0;
    for (const auto& v : sorted_eigenvalues(build_A(source, M).entries)) {
        double mod = std::abs(v);
        if (mod < 1.0 - kUnitEigenTolerance) {
            lambda = mod;
            break;
        }
    }
    if (include_lower_harmonics)
        for (std::int64_t m = 1; m < M; ++m) lambda = std::max(lambda, spectral_radius(build_A(source, m).entries));
    return 10.0 * std::pow(lambda, n - 1) + 1e-6;
}

MemorylessValue memoryless_formula(const std::vector<ProbValue>& p, int n) {
    if (n < 1) throw ValidationError("block length n must be at least 1");
    for (const auto& v : p)
        if (v.is_zero()) throw ValidationError("memoryless formula needs every p_k > 0");
    auto source = MarkovSource::memoryless(p);
    require_valid(source);
    LogTable table(source);
    const State first = 0;
    MemorylessValue out;
    std::int64_t M = 1;
    if (source.exact()) {
        for (State j = 1; j < source.size(); ++j) {
            LogCoord a = table.initial_coord(j) - table.initial_coord(first);
            if (!a.is_rational()) return out;
            M = checked_lcm(M, a.rational.den());
        }
    } else {
        out.heuristic = true;
        const long double lg1 = std::log2(p[0].to_long_double());
        for (State j = 1; j < source.size(); ++j) {
            auto a = approximate_rational(static_cast<double>(std::log2(p[static_cast<std::size_t>(j)].to_long_double()) - lg1));
            if (!a) return out;
            M = checked_lcm(M, a->den());
        }
    }
    out.M = M;
    // <beta M n> with beta = -log2 p_1
    long double f = 0.0L;
    if (source.exact()) {
        const LogCoord& c = table.initial_coord(first);
        f = table.frac_scaled(c, -M * n);
        out.boundary = c.is_rational() && f == 0.0L;
    } else {
        f = frac(-static_cast<long double>(M) * n * std::log2(p[0].to_long_double()));
        if (f <= kSnapTolerance || 1.0L - f <= kSnapTolerance) {
            f = 0.0L;
            out.boundary = true;
        }
    }
    out.value = 0.5 + (0.5 - static_cast<double>(f)) / static_cast<double>(M);
    return out;
}

Example2Value example2_formula(double alpha, double truncation_eps) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
    if (!(truncation_eps > 0.0)) throw ValidationError("truncation_eps must be positive");
    const long double a = alpha;
    const long double q = 1.0L - a;
    const long double log_a = std::log2(a);
    const long double log_q = std::log2(q);
    Example2Value out;
    long double sum = 0.0L;
    long double weight = a;  // a q^k
    long double tail = q;    // q^{k+1}
    for (int k = 0;; ++k) {
        auto rho = varrho(LogReal{-log_a - k * log_q, std::nullopt}, kSnapTolerance);
        out.snap |= rho.snapped;
        sum += weight * rho.value;
        ++out.terms;
        if (tail < truncation_eps) break;
        weight *= q;
        tail *= q;
    }
    out.value = static_cast<double>(sum);
    out.tail_bound = static_cast<double>(tail);
    return out;
}

}  // namespace shannon_markov
